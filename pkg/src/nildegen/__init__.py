"""Exact computations for varieties of nilpotent algebras and their degenerations."""

from .scalars import ONE, ZERO, I, GaussianRational, PoleError, RatFunc, UniPoly, ZeroDivision
from .algebra import (
    Algebra,
    Subspace,
    annihilator,
    change_basis,
    classify,
    derivation_dim,
    fingerprint,
    in_Unk,
    make_algebra,
    multiply,
    nil_index,
    orbit_dim,
    square,
    subspace_product,
)
from .kernels import BACKEND

__version__ = "0.1.0"
