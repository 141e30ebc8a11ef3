"""Carnot coordinates: the epsilon chart, the tangent group it induces,
and why privileged does not imply Carnot.

Run:  python3 demos/03_carnot_coordinates.py
"""

from fractions import Fraction

from carnotkit.coords import canonical_second_kind, epsilon
from carnotkit.groups import catalog
from carnotkit.vfields import model_field
from carnotkit.verify import check_carnot, check_privileged


def main():
    frame = catalog("perturbed_heisenberg_3").frame.at_base(
        (Fraction(1, 2), Fraction(-1), Fraction(2)))
    print("frame at base", tuple(str(v) for v in frame.base_point))
    for j, field in enumerate(frame.fields):
        print("  X%d = %s" % (j + 1, field))
    print()

    # The epsilon pipeline: affine adaptation, psi, then the logarithm of
    # the model fields' exponential.
    eps = epsilon(frame)
    print("epsilon chart (triangular factor):")
    for k, comp in enumerate(eps.change.poly.components):
        print("  u%d = %s" % (k + 1, comp))
    print()

    print("induced tangent algebra (weights %s):"
          % (frame.weights.weights,))
    for (i, j, k), c in sorted(eps.constants.table.items()):
        print("  [e%d, e%d] = %s e%d" % (i + 1, j + 1, c, k + 1))
    print()

    # In Carnot coordinates the pushed fields osculate the left-invariant
    # model: the degree -w_j part IS the model field.
    print("pushed fields and their model parts:")
    for j, field in enumerate(eps.carnot_frame.fields):
        model = model_field(field, j, frame.weights.weights)
        print("  X%d pushed = %s" % (j + 1, field))
        print("     model   = %s" % model)
    print()

    print("check_carnot(epsilon):",
          check_carnot(frame, eps.change, eps=eps).ok)

    # Second-kind canonical coordinates are privileged but not Carnot.
    chart = canonical_second_kind(frame).change
    priv = check_privileged(frame, chart)
    carn = check_carnot(frame, chart, eps=eps)
    print("check_privileged(second kind):", priv.ok)
    print("check_carnot(second kind):", carn.ok)
    for w in carn.witnesses:
        print("  witness:", w)


if __name__ == "__main__":
    main()
