"""Period and index of curves over Q: genus-2 constructions with local certificates and the higher-genus derivation."""
from .arith import Modulus, Place, is_prime, legendre, prime_in_progression, val
from .calculus import Triple, classify_case, derive_period_index, is_admissible, is_locally_admissible
from .certificates import CertificateBundle, forge_bundle, pipeline_bundle, verify_bundle
from .curves import EllipticModel, HyperellipticModel, genus_of_model
from .forge import build_case1, build_case2, build_case3
from .kernels import BACKEND
from .local import qp_points_exist, weil_lower_bound
from .tower import TowerField

__version__ = "0.1.0"

__all__ = [
    "BACKEND", "CertificateBundle", "EllipticModel", "HyperellipticModel", "Modulus", "Place",
    "TowerField", "Triple", "build_case1", "build_case2", "build_case3", "classify_case",
    "derive_period_index", "forge_bundle", "genus_of_model", "is_admissible", "is_locally_admissible",
    "is_prime", "legendre", "pipeline_bundle", "prime_in_progression", "qp_points_exist", "val",
    "verify_bundle", "weil_lower_bound",
]
