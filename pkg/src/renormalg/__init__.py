"""Exact-arithmetic toolkit for Hopf-algebraic renormalization and Rota--Baxter identities."""
from .birkhoff import (
    MS,
    BirkhoffPair,
    RenormScheme,
    bch_factorize,
    birkhoff_decompose,
    bogoliubov_prep,
    bogoliubov_series,
    chi,
    chi_compact,
    chi_inverse,
    chi_theta,
)
from .convolution import (
    ConvolutionContext,
    LinMap,
    char_from_spec,
    character_from_generators,
    conv_exp,
    conv_inverse,
    conv_log,
    convolve,
    inf_character_from_generators,
    is_character,
    is_inf_character,
)
from .errors import InstanceMismatchError, PreconditionError, RenormalgError, WindowOverflowError
from .hopf import POLY, ROOTED_FORESTS, HopfAlgebra, HopfElement, get_instance
from .scalars import Laurent, LaurentRing, bernoulli

__version__ = "0.1.0"

__all__ = [
    "MS", "BirkhoffPair", "RenormScheme", "bch_factorize", "birkhoff_decompose", "bogoliubov_prep",
    "bogoliubov_series", "chi", "chi_compact", "chi_inverse", "chi_theta",
    "ConvolutionContext", "LinMap", "char_from_spec", "character_from_generators", "conv_exp",
    "conv_inverse", "conv_log", "convolve", "inf_character_from_generators", "is_character",
    "is_inf_character",
    "InstanceMismatchError", "PreconditionError", "RenormalgError", "WindowOverflowError",
    "POLY", "ROOTED_FORESTS", "HopfAlgebra", "HopfElement", "get_instance",
    "Laurent", "LaurentRing", "bernoulli",
]
