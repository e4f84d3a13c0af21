"""Certificates for the Q-systems built from small groups and multi-matrix algebras.

Prints one row per Q-system: d (when special), the worst axiom and twist
residual, and how far the Jones projection is from being crossing symmetric.

    python3 scripts/qsystem_gallery.py
"""

import numpy as np

from crosslab.groups import cyclic, dihedral, symmetric
from crosslab.qsystem import (
    MultiMatrixAlgebra,
    from_cstar,
    is_special,
    jones_checks,
    qsystem_functions_on_group,
    qsystem_group_algebra,
    twist_certificates,
    validate,
)


def rows():
    for g in (cyclic(2), cyclic(3), cyclic(4), symmetric(3), dihedral(4)):
        yield f"C({g.name})", qsystem_functions_on_group(g)
        yield f"L1({g.name})", qsystem_group_algebra(g)
    yield "C+C standard", from_cstar(MultiMatrixAlgebra.standard([1, 1]))
    yield "M2 standard", from_cstar(MultiMatrixAlgebra.standard([2]))
    yield "M2 rho=diag(3/4,1/4)", from_cstar(MultiMatrixAlgebra((2,), (np.diag([0.75, 0.25]),)))
    yield "C+M2 standard", from_cstar(MultiMatrixAlgebra.standard([1, 2]))
    yield "C+M2 mismatched", from_cstar(MultiMatrixAlgebra((1, 2), (np.array([[0.5]]), np.eye(2) / 4)))


def main() -> None:
    print(f"{'Q-system':<22} {'N':>3} {'d':>7} {'axioms':>9} {'twist':>9} {'Cross(E)-E*':>12}")
    for label, q in rows():
        axioms, twist = validate(q), twist_certificates(q)
        worst_axiom = max(c.residual for c in axioms.checks)
        worst_twist = max(c.residual for c in twist.checks)
        if is_special(q):
            jones = jones_checks(q)
            d, asym = f"{jones.info['d']:.4g}", f"{jones.info['crossing_residual_of_E']:.3f}"
        else:
            d, asym = "-", "-"
        print(f"{label:<22} {q.dim:>3} {d:>7} {worst_axiom:>9.1e} {worst_twist:>9.1e} {asym:>12}")


if __name__ == "__main__":
    main()
