"""Certified computations in the nil algebra with x^3 = 0 and in the
invariant algebra of 3x3 matrices over arbitrary characteristic."""

__version__ = "0.1.0"

from .lincomb import LinComb
from .linalg import (
    NonzeroWitness,
    ZeroCertificate,
    membership,
    nullspace_basis,
    rank,
    verify_certificate,
)
from .oracle import (
    component_dimension,
    nilpotency_degree,
    verify_functional,
    zero_test,
)
from .relations import build_system
from .rewrite import canonicalize, lower_degree, substitute_unit
from .words import (
    ComponentTooLargeError,
    cyclic_representative,
    enumerate_words,
    format_word,
    is_canonical,
    mdeg,
    multinomial,
    parse_word,
    primitive_cycles,
)

__all__ = [
    "ComponentTooLargeError",
    "LinComb",
    "NonzeroWitness",
    "ZeroCertificate",
    "build_system",
    "canonicalize",
    "component_dimension",
    "cyclic_representative",
    "enumerate_words",
    "format_word",
    "is_canonical",
    "mdeg",
    "membership",
    "multinomial",
    "nilpotency_degree",
    "nullspace_basis",
    "parse_word",
    "lower_degree",
    "primitive_cycles",
    "rank",
    "substitute_unit",
    "verify_certificate",
    "verify_functional",
    "zero_test",
    "__version__",
]
