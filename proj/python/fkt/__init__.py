"""Fuglede-Kadison determinants and L2 torsion of finite complexes."""

import json

from ._fkt import (
    FktError,
    canonical_trace,
    fk_determinant,
    randol_zeta,
    randol_zeta_prime0,
    surface_torsion_scalar,
    torsion_constant_C,
)
from . import _fkt


def _text(instance):
    return instance if isinstance(instance, str) else json.dumps(instance)


def torsion(instance, u=0.0):
    """Torsion data for a complex instance (dict or JSON text)."""
    return _fkt.torsion(_text(instance), u)


def variation(instance, u=0.0, h=1e-4):
    return _fkt.variation(_text(instance), u, h)


def validate(instance):
    return _fkt.validate(_text(instance))


__all__ = [
    "FktError",
    "canonical_trace",
    "fk_determinant",
    "randol_zeta",
    "randol_zeta_prime0",
    "surface_torsion_scalar",
    "torsion",
    "torsion_constant_C",
    "validate",
    "variation",
]
