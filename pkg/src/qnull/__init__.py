"""Quantum nullhomotopy certificates for loops in small compact spaces.

Loops in S1, RP2 and the wedge of two circles are embedded as loops of
2x2 matrix homomorphisms.  The library builds explicit disk fillings of those
loops where one exists, checks any claimed filling independently, and
computes the determinant winding obstruction where none can exist.
"""

from .constructor import (Certificate, build_rp2_certificate, build_wedge_commutator_certificate,
                          pairing_nullhomotopy_demo, pushforward_certificate)
from .homspace import HomArray, HomParam, eval_metric, iota, q2_eval
from .obstruction import canonical_obstruction, winding_number
from .spaces import RP2, S1, S2, WEDGE, SampledLoop, SpacePoint
from .verifier import VerificationReport, adversarial_suite, check_hom_laws, verify

__version__ = "0.1.0"

__all__ = [
    "Certificate", "build_rp2_certificate", "build_wedge_commutator_certificate",
    "pairing_nullhomotopy_demo", "pushforward_certificate", "HomArray", "HomParam",
    "eval_metric", "iota", "q2_eval", "canonical_obstruction", "winding_number",
    "RP2", "S1", "S2", "WEDGE", "SampledLoop", "SpacePoint", "VerificationReport",
    "adversarial_suite", "check_hom_laws", "verify",
]
