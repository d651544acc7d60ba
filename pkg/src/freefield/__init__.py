"""Free-field matrix elements, screening operators and Macdonald polynomials at t = -q.

Everything is exact over Q(i)(v, u) with v = q^(1/2) and u = e^(i pi a).
"""

from .coeffring import I, ONE, U, V, ZERO, GaussRational, RingElem, parse_ring
from .fock import AElement, FockVector, Weight, parse_aelement, vacuum
from .symalg import Partition, SymPoly, SymRat, partitions

__version__ = "0.1.0"

__all__ = [
    "__version__", "GaussRational", "RingElem", "parse_ring", "I", "ONE", "U", "V", "ZERO",
    "AElement", "FockVector", "Weight", "parse_aelement", "vacuum",
    "Partition", "SymPoly", "SymRat", "partitions",
]
