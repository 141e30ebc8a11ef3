"""Privileged coordinates: affine adaptation, the psi correction, and the
derivation-order test.

Run:  python3 demos/02_privileged_coordinates.py
"""

from fractions import Fraction

from carnotkit.coords import CoordinateChange, linearize, psi_map
from carnotkit.groups import catalog
from carnotkit.poly import RationalPoly
from carnotkit.vfields import function_order
from carnotkit.verify import check_privileged


def main():
    # A step-3 H-frame whose fields carry weight-breaking linear extras.
    frame = catalog("perturbed_engel_4").frame.at_base(
        (Fraction(1), Fraction(0), Fraction(-1), Fraction(2)))
    print("frame weights:", frame.weights.weights, "at base",
          tuple(str(v) for v in frame.base_point))
    for j, field in enumerate(frame.fields):
        print("  X%d = %s" % (j + 1, field))
    print()

    # Step 1: affine adaptation T(x) = (B(a)^t)^{-1}(x - a).
    affine, adapted = linearize(frame)
    print("after linearize, X_j(0) = e_j:")
    origin = (Fraction(0),) * frame.n
    for j, field in enumerate(adapted.fields):
        print("  X%d(0) =" % (j + 1), tuple(str(v) for v in field.evaluate(origin)))
    print()

    # The affine chart alone is not privileged: x4 should have order 3.
    print("derivation orders in the affine chart:")
    for k in range(frame.n):
        order = function_order(RationalPoly.variable(frame.n, k), adapted)
        print("  x%d: order %s (want %d)" % (k + 1, order,
                                             frame.weights.weights[k]))
    verdict = check_privileged(frame, affine)
    print("check_privileged(affine):", verdict.ok)
    for w in verdict.witnesses:
        print("  witness:", w)
    print()

    # Step 2: the triangular psi correction repairs exactly those orders.
    psi = psi_map(adapted)
    print("psi components:")
    for k, comp in enumerate(psi.components):
        print("  u%d = %s" % (k + 1, comp))
    change = CoordinateChange(affine.matrix, affine.offset, frame.weights, psi)
    verdict = check_privileged(frame, change)
    print("check_privileged(affine + psi):", verdict.ok)


if __name__ == "__main__":
    main()
