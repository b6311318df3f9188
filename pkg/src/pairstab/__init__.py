"""Exact semistability tests for pairs of representation vectors."""

from .binary import FactoredBinaryForm, P1Point, closed_form_check, oracle_equivalence, root_adapted_frames
from .curves import PlaneCurve, equivariance_check, fermat_curve, mabuchi_bound_check, stability_data
from .forms import FormError, SparseForm, Variance, ZeroFormError
from .geometry import Containment, LatticePolytope, contains_polytope, convex_hull, minimize_linear
from .kempf_ness import energy, energy_along_psg, energy_scan, fs_distance
from .pairs import Pair, PairVerdict, Status, check_pair_numerical, hilbert_mumford_check, replay_certificate
from .torus import OnePSG, TorusFrame, one_psg_weight, weight_polytope

__version__ = "0.1.0"

__all__ = [
    "Containment",
    "FactoredBinaryForm",
    "FormError",
    "LatticePolytope",
    "OnePSG",
    "P1Point",
    "Pair",
    "PairVerdict",
    "PlaneCurve",
    "SparseForm",
    "Status",
    "TorusFrame",
    "Variance",
    "ZeroFormError",
    "check_pair_numerical",
    "closed_form_check",
    "contains_polytope",
    "convex_hull",
    "energy",
    "energy_along_psg",
    "energy_scan",
    "equivariance_check",
    "fermat_curve",
    "fs_distance",
    "hilbert_mumford_check",
    "mabuchi_bound_check",
    "minimize_linear",
    "one_psg_weight",
    "oracle_equivalence",
    "replay_certificate",
    "root_adapted_frames",
    "stability_data",
    "weight_polytope",
]
