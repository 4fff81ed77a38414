"""orbifrob: exact G-twisted Frobenius algebras and their second quantization.

The package constructs symmetric-group twisted Frobenius algebras on
tensor powers of a Frobenius algebra, twisted group rings and discrete
torsion twists, and machine-verifies every defining axiom over exact
rational arithmetic.
"""

from .frobenius import (FrobeniusAlgebra, AlgebraElement, point_algebra,
                        zn_algebra, milnor_univariate, tensor_power,
                        verify_frobenius)
from .symgroup import Permutation, OrbitPartition, joint_orbits, graph_defect
from .cocycles import (FiniteGroupTable, TwoCocycle, NonabelianCocycle,
                       SuperGrading, schur_cocycle_sn, twisted_group_ring)
from .gfrob import (GFrobeniusAlgebra, verify_axioms, tensor_hat,
                    twist_by_torsion, super_twist, invariants,
                    extract_special, normalize_gamma)
from .sympow import SymmetricPowerAlgebra, build, second_quantization

__all__ = [
    "FrobeniusAlgebra", "AlgebraElement", "point_algebra", "zn_algebra",
    "milnor_univariate", "tensor_power", "verify_frobenius",
    "Permutation", "OrbitPartition", "joint_orbits", "graph_defect",
    "FiniteGroupTable", "TwoCocycle", "NonabelianCocycle", "SuperGrading",
    "schur_cocycle_sn", "twisted_group_ring",
    "GFrobeniusAlgebra", "verify_axioms", "tensor_hat", "twist_by_torsion",
    "super_twist", "invariants", "extract_special", "normalize_gamma",
    "SymmetricPowerAlgebra", "build", "second_quantization",
]
