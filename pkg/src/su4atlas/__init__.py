"""su4atlas: exact atlas of the finite subgroups of the two-qubit Clifford group.

Reconstructs, classifies and verifies every subgroup of the two-qubit
Clifford group containing the Pauli group, plus the remaining primitive
finite subgroups of SU(4), from explicit matrix generators in exact
cyclotomic arithmetic.
"""

__version__ = "0.1.0"

from .cyclo import Cyclotomic, Rational, root_of_unity, sqrt_named
from .linal import GateMatrix

__all__ = ["Cyclotomic", "Rational", "GateMatrix", "root_of_unity", "sqrt_named",
           "__version__"]
