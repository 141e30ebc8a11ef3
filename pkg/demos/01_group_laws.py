"""Graded nilpotent group laws: stock algebras, products, dilations.

Run:  python3 demos/01_group_laws.py
"""

from fractions import Fraction

from carnotkit.graded import dilate
from carnotkit.groups import (
    StructureConstants, catalog, catalog_names, group_inverse, group_product,
    validate_algebra,
)


def fmt(point):
    return "(" + ", ".join(str(v) for v in point) + ")"


def main():
    print("stock entries:", ", ".join(catalog_names()))
    print()

    # The Heisenberg group in exponential coordinates.
    entry = catalog("heisenberg_3")
    c = entry.constants
    x = (Fraction(1), Fraction(0), Fraction(0))
    y = (Fraction(0), Fraction(1), Fraction(0))
    print("heisenberg_3 weights:", c.weights.weights)
    print("x * y    =", fmt(group_product(x, y, c)))
    print("y * x    =", fmt(group_product(y, x, c)))
    print("x * x^-1 =", fmt(group_product(x, group_inverse(x), c)))
    print()

    # Dilations are automorphisms: delta_t(x * y) = delta_t x * delta_t y.
    engel = catalog("engel_4").constants
    x = (Fraction(1), Fraction(2), Fraction(3), Fraction(4))
    y = (Fraction(5), Fraction(6), Fraction(7), Fraction(8))
    t = Fraction(1, 3)
    lhs = dilate(group_product(x, y, engel), t, engel.weights.weights)
    rhs = group_product(dilate(x, t, engel.weights.weights),
                        dilate(y, t, engel.weights.weights), engel)
    print("engel_4 x * y =", fmt(group_product(x, y, engel)))
    print("dilation equivariance holds exactly:", lhs == rhs)
    print()

    # Any graded table works, as long as it grades and satisfies Jacobi.
    custom = StructureConstants((1, 1, 1, 2), {(0, 1, 3): Fraction(1),
                                               (1, 2, 3): Fraction(-2)})
    report = validate_algebra(custom)
    print("custom table valid:", report.ok)
    a = (Fraction(1), Fraction(1, 2), Fraction(0), Fraction(0))
    b = (Fraction(0), Fraction(1), Fraction(-1), Fraction(0))
    print("custom a * b =", fmt(group_product(a, b, custom)))


if __name__ == "__main__":
    main()
