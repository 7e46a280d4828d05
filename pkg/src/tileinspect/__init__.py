"""Ceramic-tile style defect inspection with the 2-D Haar wavelet transform.

Test images are compared with a defect-free reference through the Euclidean
distance between their level-k Haar approximations.
"""

__version__ = "0.1.0"

from .inspection import InspectConfig, InspectionResult, Inspector, Verdict, inspect_pair
from .wavelet import Pyramid, SubbandSet, decompose, dwt2, idwt2, reconstruct

__all__ = [
    "InspectConfig",
    "InspectionResult",
    "Inspector",
    "Pyramid",
    "SubbandSet",
    "Verdict",
    "decompose",
    "dwt2",
    "idwt2",
    "inspect_pair",
    "reconstruct",
]
