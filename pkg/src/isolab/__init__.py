"""Exact computations with filtered isocrystals, slope types and phi-series."""

__version__ = "0.1.0"

from .errors import IsolabError, NotStable, RankUncertain, RelationMismatch, SingularSubspace, UnsupportedMultiplicity
from .fields import ExactField, PPowerSumField
from .filtered import GrassmannianPoint, WeakAdmissibilityReport, intersection_dim, t_H, weak_admissible
from .isocrystal import (
    Isocrystal,
    NewtonPolygon,
    StableSubspace,
    charpoly_slopes,
    frobenius_matrix,
    newton_slopes,
    stable_subspaces,
    t_N,
)
from .padic_core import PPowerSum, TeichmullerPolynomial, TowerElement, theta, v_0r, v_E, v_sr, w_k
from .phi_series import (
    HomCandidate,
    PhiSeries,
    bad_locus_point,
    phi_apply,
    theta_of_phi_power,
    verify_hom,
)
from .phimod_types import SlopeType, degree_from_filtration, enumerate_types, hn_bounds_for_ML

__all__ = [name for name in dir() if not name.startswith("_")]
