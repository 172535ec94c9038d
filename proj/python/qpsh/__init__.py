"""Python bindings for the qpsh library.

Quaternionic matrices are numpy arrays of shape (n, n, 4) holding the
(t, x, y, z) components of each entry. Polynomials and convex bodies use the
same JSON shapes as the command-line tool and may be passed as dicts.
"""

import json as _json

import numpy as _np

from . import _qpsh
from ._qpsh import (  # noqa: F401
    NumericalError,
    ParseError,
    PreconditionError,
    aleksandrov_gap,
    conj_transform,
    is_positive_definite,
    min_embedding_eigenvalue,
    mixed_discriminant,
    moore_det,
    quaternion_multiply,
    random_hyperhermitian,
    random_positive_definite,
    real_embedding,
    signature_of_B,
)

__all__ = [
    "NumericalError",
    "ParseError",
    "PreconditionError",
    "aleksandrov_gap",
    "conj_transform",
    "hessian",
    "hkt_flat_check",
    "is_positive_definite",
    "is_psh",
    "ma_density",
    "min_embedding_eigenvalue",
    "mixed_discriminant",
    "moore_det",
    "quarter_identity_deviation",
    "quaternion_multiply",
    "random_hyperhermitian",
    "random_positive_definite",
    "real_embedding",
    "signature_of_B",
    "solve_dirichlet",
    "valuation",
]


def _text(obj):
    return obj if isinstance(obj, str) else _json.dumps(obj)


def _points(samples):
    return _np.atleast_2d(_np.asarray(samples, dtype=float))


def hessian(poly, point):
    """Quaternionic Hessian of a real polynomial at a point, shape (n, n, 4)."""
    return _qpsh.hessian(_text(poly), list(point))


def ma_density(poly, point):
    """Moore determinant of the quaternionic Hessian."""
    return _qpsh.ma_density(_text(poly), list(point))


def is_psh(poly, samples):
    return _qpsh.is_psh(_text(poly), _points(samples))


def solve_dirichlet(f, phi, h=0.125, tol=1e-12):
    """Solve lap u = f in the unit ball of H with u = phi on the sphere."""
    return _qpsh.solve_dirichlet(_text(f), _text(phi), h, tol)


def valuation(body, n=1, k=1, delta=0.1, samples=1 << 14, seed=1):
    """(value, standard error) of the degree-k valuation of a convex body."""
    return _qpsh.valuation(_text(body), n, k, delta, samples, seed)


def hkt_flat_check(poly, samples):
    return _qpsh.hkt_flat_check(_text(poly), _points(samples))


def quarter_identity_deviation(poly, point):
    """max |t(del del_J f) - hessian(f) / 4| at a point."""
    return _qpsh.quarter_identity_deviation(_text(poly), list(point))
