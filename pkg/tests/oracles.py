"""Independent oracles for the test suite.

Everything in this module is computed from first principles with its own
small helpers (nested brackets straight from a structure-constant table,
explicit closed forms, literals checked by hand) so that the package code
under test never certifies itself.  Keep these implementations boring and
free of imports from carnotkit internals beyond the basic polynomial type.
"""

from fractions import Fraction

from carnotkit.poly import PolyMap, RationalPoly


# ---------------------------------------------------------------------------
# Abstract bracket and the closed-form group product up to step 4.
# ---------------------------------------------------------------------------

def _table_of(constants):
    return constants.table if hasattr(constants, "table") else dict(constants)


def abstract_bracket(constants, n, u, v):
    """[u, v] for coefficient vectors over a {(i, j, k): c} table (i < j,
    0-based, [e_i, e_j] = sum_k c e_k).  Entries may be Fractions or
    polynomials; only + and * are used."""
    table = _table_of(constants)
    out = [None] * n
    for (i, j, k), c in table.items():
        term = (u[i] * v[j] - u[j] * v[i]) * c
        out[k] = term if out[k] is None else out[k] + term
    zero = None
    for x in u:
        zero = x * 0
        break
    return [zero if w is None else w for w in out]


def bch_product(constants, n, x, y):
    """Closed-form product of a nilpotent group of step <= 4:

        z = x + y + 1/2 [x,y] + 1/12 ([x,[x,y]] + [y,[y,x]]) - 1/24 [y,[x,[x,y]]]

    evaluated with nested brackets over the raw structure-constant table.
    Entries may be Fractions or polynomials.
    """
    br = lambda u, v: abstract_bracket(constants, n, u, v)
    xy = br(x, y)
    xxy = br(x, xy)
    yyx = br(y, br(y, x))
    yxxy = br(y, xxy)
    out = []
    for k in range(n):
        out.append(x[k] + y[k] + xy[k] * Fraction(1, 2)
                   + (xxy[k] + yyx[k]) * Fraction(1, 12)
                   - yxxy[k] * Fraction(1, 24))
    return out


def bch_inverse(x):
    """The group inverse is plain negation for any nilpotent group given in
    exponential coordinates: all bracket terms of z(x, -x) cancel in pairs."""
    return [-v for v in x]


def left_invariant_vectors(constants, n, point):
    """X_j(point) for the left-invariant frame of a step <= 4 group, from
    the derivative of the closed-form product in its second slot:

        X_j(x) = e_j + 1/2 [x, e_j] + 1/12 [x, [x, e_j]].

    Returns a list of n vectors (rows j).
    """
    br = lambda u, v: abstract_bracket(constants, n, u, v)
    rows = []
    for j in range(n):
        ej = [Fraction(1 if i == j else 0) for i in range(n)]
        first = br(list(point), ej)
        second = br(list(point), first)
        rows.append([ej[k] + first[k] * Fraction(1, 2)
                     + second[k] * Fraction(1, 12) for k in range(n)])
    return rows


# ---------------------------------------------------------------------------
# Flow certificate: a solved flow is correct iff it satisfies its own ODE.
# ---------------------------------------------------------------------------

def flow_certificate_failures(fields, weights, flow):
    """Exact certificate for a solved flow of x' = sum_j xi_j X_j(x).

    The flow components are polynomials in (y_1..y_n, xi_1..xi_n, t).
    Checks, as exact polynomial identities:
      * x_k(0; y, xi) = y_k,
      * d/dt x_k = sum_j xi_j * (coefficient of d/dx_k in X_j)(x(t)).
    Returns a list of human-readable failure strings (empty = certified).
    """
    n = len(fields)
    nn = 2 * n + 1
    failures = []
    zero_t = [RationalPoly.variable(nn, i) for i in range(nn)]
    zero_t[2 * n] = RationalPoly.zero(nn)
    for k, comp in enumerate(flow.components):
        at0 = comp.substitute(zero_t)
        if at0 != RationalPoly.variable(nn, k):
            failures.append("x_%d(0) != y_%d" % (k + 1, k + 1))

    # lift the field coefficients b_jk (polynomials in x) to (y, xi, t)
    # variables by plugging in the solved components
    lifted = [[fields[j].coefficients[k].substitute(flow.components)
               for k in range(n)] for j in range(n)]
    for k in range(n):
        lhs = flow.components[k].partial(2 * n)
        rhs = RationalPoly.zero(nn)
        for j in range(n):
            rhs = rhs + RationalPoly.variable(nn, n + j) * lifted[j][k]
        if lhs != rhs:
            failures.append("d/dt x_%d does not match the field" % (k + 1))
    return failures


# ---------------------------------------------------------------------------
# Step-2 quadratic coefficients of the homogeneous logarithm.
# ---------------------------------------------------------------------------

def expected_log_quadratic(frame):
    """For a step-2 frame adapted at 0, the logarithm chart's component k
    is x_k + sum_{i<=j} q_{ij} x_i x_j with

        q_ij = -1/2 (d_i b_jk(0) + d_j b_ik(0))    for i < j,
        q_ii = -1/2  d_i b_ik(0),

    where b_jk is the coefficient of d/dx_k in X_j minus its value delta_jk.
    Returns {k: {(i, j): coefficient}} over nonzero entries only, 0-based,
    i <= j.
    """
    n = frame.weights.n
    origin = (Fraction(0),) * n
    d = {}
    for j in range(n):
        for k in range(n):
            coef = frame.fields[j].coefficients[k]
            for i in range(n):
                d[(i, j, k)] = coef.partial(i).evaluate(origin)
    out = {}
    for k in range(n):
        entry = {}
        for i in range(n):
            for j in range(i, n):
                if i == j:
                    q = -Fraction(1, 2) * d[(i, i, k)]
                else:
                    q = -Fraction(1, 2) * (d[(i, j, k)] + d[(j, i, k)])
                if q:
                    entry[(i, j)] = q
        if entry:
            out[k] = entry
    return out


# ---------------------------------------------------------------------------
# Frozen, hand-checked literals.
# ---------------------------------------------------------------------------

# Heisenberg group law in exponential coordinates:
#   z_3 = x_3 + y_3 + 1/2 (x_1 y_2 - x_2 y_1)
H3_PRODUCT_INSTANCE = (
    (Fraction(1), Fraction(0), Fraction(0)),
    (Fraction(0), Fraction(1), Fraction(0)),
    (Fraction(1), Fraction(1), Fraction(1, 2)),
)

# The step-3 law on weights (1,1,2,3) with [e1,e2]=e3, [e1,e3]=e4:
#   z_3 = x_3 + y_3 + 1/2 (x_1 y_2 - x_2 y_1)
#   z_4 = x_4 + y_4 + 1/2 (x_1 y_3 - x_3 y_1)
#         + 1/12 (x_1^2 y_2 - x_1 x_2 y_1 + y_1^2 x_2 - y_1 y_2 x_1)
# Hand evaluation at x=(1,2,3,4), y=(5,6,7,8):
#   z_3 = 3 + 7 + (6 - 10)/2 = 8
#   z_4 = 4 + 8 + (7 - 15)/2 + (6 - 10 + 50 - 30)/12 = 12 - 4 + 16/12 = 28/3
ENGEL_PRODUCT_INSTANCE = (
    (Fraction(1), Fraction(2), Fraction(3), Fraction(4)),
    (Fraction(5), Fraction(6), Fraction(7), Fraction(8)),
    (Fraction(6), Fraction(8), Fraction(8), Fraction(28, 3)),
)

# On a group frame the centered chart is the left translation by the
# inverse of the base point: with a = (1,2,3) and x = (4,6,10),
#   (-a) . x = (3, 4, 10 - 3 + (-1*6 + 2*4)/2) = (3, 4, 8).
H3_EPSILON_INSTANCE = {
    "base": (Fraction(1), Fraction(2), Fraction(3)),
    "point": (Fraction(4), Fraction(6), Fraction(10)),
    "image": (Fraction(3), Fraction(4), Fraction(8)),
}


def h3_c2_forward():
    """Second-kind forward map of the Heisenberg frame with
    X_1 = d1 - (x_2/2) d3, X_2 = d2 + (x_1/2) d3.  Flowing the basis
    fields one at a time (highest index innermost) from 0:
        exp(t_3 X_3)(0) = (0, 0, t_3),
        exp(t_2 X_2):  x_3' = x_1/2 = 0      -> (0, t_2, t_3),
        exp(t_1 X_1):  x_3' = -x_2/2 = -t_2/2 -> (t_1, t_2, t_3 - t_1 t_2/2),
    so the forward map is (t_1, t_2, t_3 - t_1 t_2 / 2) and the chart
    (its inverse) is (x_1, x_2, x_3 + x_1 x_2 / 2)."""
    x1 = RationalPoly.variable(3, 0)
    x2 = RationalPoly.variable(3, 1)
    x3 = RationalPoly.variable(3, 2)
    return PolyMap([x1, x2, x3 - x1 * x2 * Fraction(1, 2)])


H3_C2_WITNESS = "x1*x2/2 in component 3"


def perturbed_h3_c1_chart():
    """First-kind chart of the catalog frame whose only deviation from the
    Heisenberg model is an extra x_1^2 d/dx_3 term on the first field.
    Solving x' = xi_1 X_1 + xi_2 X_2 + xi_3 X_3 from 0:
        x_1 = t xi_1, x_2 = t xi_2,
        x_3' = xi_3 - (x_2 xi_1 - x_1 xi_2)/2 + xi_1 x_1^2
             = xi_3 + t^2 xi_1^3   =>   x_3(1) = xi_3 + xi_1^3/3,
    and the chart inverts that: (x_1, x_2, x_3 - x_1^3/3)."""
    x1 = RationalPoly.variable(3, 0)
    x2 = RationalPoly.variable(3, 1)
    x3 = RationalPoly.variable(3, 2)
    return PolyMap([x1, x2, x3 - x1 ** 3 * Fraction(1, 3)])


def perturbed_engel_psi():
    """The catalog step-3 frame with the weight-breaking extras x_2 d/dx_4
    on X_1 and x_1 d/dx_4 on X_2 needs exactly one correction term:
    the order recursion at |alpha| = (1,1,0,0) gives
        a_4,(1,1,0,0) = -(X_1 X_2 x_4)(0) = -1,
    so psi = (x_1, x_2, x_3, x_4 - x_1 x_2)."""
    comps = [RationalPoly.variable(4, k) for k in range(4)]
    comps[3] = comps[3] - RationalPoly.variable(4, 0) * RationalPoly.variable(4, 1)
    return PolyMap(comps)


def step2_log_instance():
    """Frame X_1 = d/dx_1 + x_2 d/dx_3, X_2 = d/dx_2, X_3 = d/dx_3 on
    weights (1,1,2): b_13 = x_2, so the only quadratic correction is
    q_{12} in component 3 = -1/2 (d_1 b_23 + d_2 b_13)(0) = -1/2, giving
    the chart (x_1, x_2, x_3 - x_1 x_2 / 2)."""
    x1 = RationalPoly.variable(3, 0)
    x2 = RationalPoly.variable(3, 1)
    x3 = RationalPoly.variable(3, 2)
    return PolyMap([x1, x2, x3 - x1 * x2 * Fraction(1, 2)])
