"""Exact degree-growth analysis of birational maps of the projective plane.

Typical use::

    from cremona import load_fixture, analyze
    report = analyze(load_fixture("ex4"))
    print(report.summary())
"""

from .analysis import AnalysisReport, analyze
from .basegeom import BaseData, CharMatrix, analyze_base, char_matrix, find_base_points, lsc_invariants, principal_curves
from .errors import CremonaError
from .mapcore import BiratMap, compose_maps, conjugate, degrees_within_budget, iterate_degrees, jacobian, transform_curve, validate
from .orbits import Decomposition, decompose, orbit_of, verify_pairs
from .parsing import MapFile, load_fixture, load_map_file, parse_poly
from .polyring import HomPoly, ProjPoint, UniPoly
from .recurrence import (
    DynamicsData,
    Recurrence,
    build_lambda,
    classify_growth,
    closed_form,
    enumerate_candidates,
    forward_d,
    lump,
    minimal_recurrence,
    recurrence_check,
    secular,
)

__version__ = "0.1.0"
