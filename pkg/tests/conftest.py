import random
from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings, strategies as st

from carnotkit.graded import WeightVector
from carnotkit.groups import StructureConstants, catalog, catalog_names
from carnotkit.poly import RationalPoly
from carnotkit.vfields import Frame, PolyVectorField

settings.register_profile(
    "default",
    max_examples=25,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")


# ---------------------------------------------------------------------------
# Strategies.
# ---------------------------------------------------------------------------

def fractions(max_num=9, max_den=7):
    return st.builds(
        Fraction,
        st.integers(min_value=-max_num, max_value=max_num),
        st.integers(min_value=1, max_value=max_den),
    )


def points(n, max_num=6, max_den=5):
    return st.tuples(*[fractions(max_num, max_den) for _ in range(n)])


def small_polys(n, max_terms=4, max_exp=3):
    """Sparse polynomials in n variables with small rational coefficients."""
    exps = st.tuples(*[st.integers(min_value=0, max_value=max_exp)
                       for _ in range(n)])
    term = st.tuples(exps, fractions(6, 4))
    def build(terms):
        p = RationalPoly.zero(n)
        for exp, c in terms:
            p = p + RationalPoly.monomial(n, exp, c)
        return p
    return st.lists(term, min_size=0, max_size=max_terms).map(build)


CATALOG_GROUP_NAMES = [
    "abelian_3", "heisenberg_3", "heisenberg_5", "engel_4", "step3_filiform_5",
]
CATALOG_FRAME_NAMES = CATALOG_GROUP_NAMES + [
    "perturbed_heisenberg_3", "perturbed_engel_4",
]


def catalog_constants():
    return st.sampled_from(CATALOG_GROUP_NAMES).map(
        lambda name: catalog(name).constants)


def step2_constants(n1_range=(2, 3), n2_range=(1, 2)):
    """Random valid step-2 structure constants: n1 weight-1 generators, n2
    weight-2 centre directions, [e_i, e_j] an arbitrary small-rational
    combination of the centre (Jacobi is automatic in the centre)."""
    def build(args):
        n1, n2, coefs = args
        weights = (1,) * n1 + (2,) * n2
        table = {}
        idx = 0
        for i in range(n1):
            for j in range(i + 1, n1):
                for k in range(n2):
                    c = coefs[idx % len(coefs)]
                    idx += 1
                    if c:
                        table[(i, j, n1 + k)] = c
        return StructureConstants(WeightVector(weights), table)
    return st.tuples(
        st.integers(min_value=n1_range[0], max_value=n1_range[1]),
        st.integers(min_value=n2_range[0], max_value=n2_range[1]),
        st.lists(fractions(3, 2), min_size=6, max_size=12),
    ).map(build)


def step2_adapted_frames():
    """Random step-2 frames adapted at the origin: X_j = d/dx_j plus random
    linear forms times the centre directions."""
    def build(args):
        n1, n2, coefs = args
        n = n1 + n2
        weights = (1,) * n1 + (2,) * n2
        fields = []
        idx = 0
        for j in range(n):
            comps = [RationalPoly.const(n, 1 if k == j else 0) for k in range(n)]
            if j < n1:
                for k in range(n1, n):
                    form = RationalPoly.zero(n)
                    for i in range(n1):
                        c = coefs[idx % len(coefs)]
                        idx += 1
                        if c:
                            form = form + RationalPoly.variable(n, i) * c
                    comps[k] = comps[k] + form
            fields.append(PolyVectorField(comps))
        try:
            return Frame(fields, WeightVector(weights), (Fraction(0),) * n)
        except ValueError:
            return None
    return st.tuples(
        st.integers(min_value=2, max_value=3),
        st.integers(min_value=1, max_value=2),
        st.lists(fractions(3, 2), min_size=8, max_size=16),
    ).map(build).filter(lambda fr: fr is not None)


# ---------------------------------------------------------------------------
# Fixtures.
# ---------------------------------------------------------------------------

@pytest.fixture
def rng(request):
    return random.Random("carnotkit-tests:%s" % request.node.nodeid)


@pytest.fixture(params=CATALOG_GROUP_NAMES)
def group_entry(request):
    return catalog(request.param)


@pytest.fixture(params=CATALOG_FRAME_NAMES)
def frame_entry(request):
    return catalog(request.param)


@pytest.fixture
def h3_frame():
    return catalog("heisenberg_3").frame


@pytest.fixture
def engel_frame():
    return catalog("engel_4").frame
