"""Ping-pong partners for group actions on trees, with brute-force certificates."""
from .errors import (
    CapabilityError,
    CertificateFailure,
    DomainError,
    NeedsEllipticization,
    PnaiveError,
    Refusal,
    SearchFailure,
    UnsupportedModel,
)
from .models import FreeGroup, FreeProduct, GroupElement, HalfPlane, model_from_description
from .points import Cylinder, EndPoint, Site

__version__ = "0.1.0"
