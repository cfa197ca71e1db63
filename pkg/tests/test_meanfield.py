import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from drsub import meanfield as mf
from drsub import verify
from drsub.errors import BadSet, DimensionMismatch, ElementInSet, StructuralViolation, TooLarge, TooLargeForTable
from drsub.setfunctions import CutModel, FlidModel, ModularModel, SetCoverModel, TableModel, ZeroModel
from drsub.solvers import SolverConfig

import pools

CUT12 = CutModel([[0.0, 1.0], [1.0, 0.0]])
KINDS = ["modular", "cut", "dcut", "ising"]


def log_z_by_hand(model, beta=1.0):
    """Plain enumeration with math.exp; no shift, so only for small, tame values."""
    total = 0.0
    for bits in itertools.product((False, True), repeat=model.n):
        total += math.exp(beta * model.value(np.array(bits)))
    return math.log(total)


def entropy_by_hand(x):
    return -sum(p * math.log(p) + (1 - p) * math.log(1 - p) if 0 < p < 1 else 0.0 for p in x)


def pathology(c=1.0, b=10.0):
    W = np.zeros((4, 4))
    W[0, 1] = W[1, 2] = W[2, 3] = c
    W[2, 1] = b * c
    return CutModel(W, directed=True)


# --- ELBO ------------------------------------------------------------------

def test_elbo_examples():
    assert mf.build_elbo(CUT12).value([0.5, 0.5]) == pytest.approx(0.5 + 2 * math.log(2), abs=1e-14)
    assert mf.build_elbo(CUT12).value([0.5, 0.5]) == pytest.approx(1.886294, abs=1e-6)
    assert mf.build_elbo(ModularModel([0.0])).value([0.5]) == pytest.approx(math.log(2), abs=1e-15)
    elbo = mf.build_elbo(pathology())
    assert elbo.value([0.5, 1, 0, 0.5]) == pytest.approx(1 + 2 * math.log(2), abs=1e-14)
    assert elbo.value([1, 0, 1, 0]) == (2 + 10) * 1.0
    assert elbo.value([0, 0, 0, 0]) == 0.0


def test_elbo_matches_exhaustive_plus_entropy(rng):
    for kind in KINDS:
        model = pools.random_model(rng, kind, 5)
        x = rng.random(5)
        expected = verify.mt_exhaustive(model, x) + entropy_by_hand(x)
        assert mf.build_elbo(model).value(x) == pytest.approx(expected, abs=1e-10)


def test_elbo_flags():
    assert mf.build_elbo(CUT12).meta.dr


def test_table_model_limits():
    with pytest.raises(TooLargeForTable):
        TableModel(np.zeros(1 << 21))
    with pytest.raises(DimensionMismatch):
        TableModel(np.zeros(5))


def test_pa_elbo_identical_modular():
    theta = np.array([0.4, -1.0])
    pa = mf.PaModel(ModularModel(theta), ModularModel(theta), 1.0)
    obj = mf.build_pa_elbo(pa)
    x = 1 / (1 + np.exp(-2 * theta))
    assert obj.value(x) == pytest.approx(sum(math.log1p(math.exp(2 * t)) for t in theta), abs=1e-12)


def test_pa_elbo_with_zero_partner(rng):
    model = pools.random_model(rng, "cut", 4)
    obj = mf.build_pa_elbo(mf.PaModel(model, ZeroModel(4), 1.0))
    plain = mf.build_elbo(model)
    for x in rng.random((10, 4)):
        assert obj.value(x) == pytest.approx(plain.value(x), abs=1e-14)


def test_pa_elbo_vertex(rng):
    a, b = pools.random_model(rng, "ising", 3), pools.random_model(rng, "cut", 3)
    obj = mf.build_pa_elbo(mf.PaModel(a, b, 0.7))
    for bits in itertools.product((0, 1), repeat=3):
        S = np.array(bits, bool)
        assert obj.value(np.array(bits, float)) == pytest.approx(0.7 * (a.value(S) + b.value(S)), abs=1e-14)


def test_pa_model_validation():
    with pytest.raises(DimensionMismatch):
        mf.PaModel(ModularModel([0.0]), ModularModel([0.0, 1.0]))
    with pytest.raises(StructuralViolation):
        mf.PaModel(ModularModel([0.0]), ModularModel([0.0]), 0.0)


# --- partition functions ---------------------------------------------------

def test_log_partition_examples():
    assert mf.log_partition_exact(ModularModel([0.0])) == pytest.approx(math.log(2), abs=1e-15)
    assert mf.log_partition_exact(ModularModel([1.0, 1.0])) == pytest.approx(2 * math.log(1 + math.e), abs=1e-14)
    assert mf.log_partition_exact(ModularModel([1.0, 1.0])) == pytest.approx(2.626523, abs=1e-6)
    # states: {} 0, {1} 1, {2} 1, {1,2} 0
    assert mf.log_partition_exact(CUT12) == pytest.approx(math.log(2 + 2 * math.e), abs=1e-14)


def test_log_partition_matches_naive_sum(rng):
    for kind in KINDS:
        model = pools.random_model(rng, kind, 6)
        for beta in (0.5, 1.0, 2.0):
            assert mf.log_partition_exact(model, beta) == pytest.approx(log_z_by_hand(model, beta), abs=1e-12)


def test_log_partition_stable_for_large_values():
    m = ModularModel([800.0, 800.0])
    assert mf.log_partition_exact(m) == pytest.approx(1600.0, abs=1e-9)


def test_log_partition_too_large():
    with pytest.raises(TooLarge):
        mf.log_partition_exact(ModularModel(np.zeros(21)))


def test_log_pa_examples():
    same = mf.PaModel(ModularModel([0.0]), ModularModel([0.0]))
    assert mf.log_pa_exact(same) == pytest.approx(math.log(0.5), abs=1e-15)
    a = 0.8
    pa = mf.PaModel(ModularModel([a]), ModularModel([-a]))
    s = 1 / (1 + math.exp(-a))
    assert mf.log_pa_exact(pa) == pytest.approx(math.log(2 * s * (1 - s)), abs=1e-14)


def test_log_pa_identical_models_is_log_sum_of_squares(rng):
    m = pools.random_model(rng, "ising", 5)
    v = mf.log_pa_exact(mf.PaModel(m, m))
    assert v <= 0
    logp = np.array([m.value(np.array(b)) for b in itertools.product((False, True), repeat=5)])
    p = np.exp(logp - log_z_by_hand(m))
    assert v == pytest.approx(math.log(np.sum(p * p)), abs=1e-12)


# --- bounds ----------------------------------------------------------------

def test_marginal_gain_examples():
    m = ModularModel([2.0, -1.0, 0.5])
    assert mf.marginal_gain(m, 1, []) == -1.0
    assert mf.marginal_gain(m, 1, [0, 2]) == -1.0
    assert mf.marginal_gain(CUT12, 0, []) == 1.0
    assert mf.marginal_gain(CUT12, 0, [1]) == -1.0
    with pytest.raises(ElementInSet):
        mf.marginal_gain(CUT12, 0, [0])
    with pytest.raises(BadSet):
        mf.marginal_gain(CUT12, 0, [5])


@settings(max_examples=80, deadline=None)
@given(st.sampled_from(["cut", "ising", "flid", "setcover"]), st.integers(0, 2**32 - 1))
def test_marginal_gains_diminish(kind, seed):
    rng = np.random.default_rng(seed)
    n = 6
    if kind == "flid":
        model = FlidModel(rng.random((n, 2)), rng.normal(size=n))
    elif kind == "setcover":
        model = SetCoverModel(rng.random(3), [[0, 1], [2, 3, 4], [5, 0]])
    else:
        model = pools.random_model(rng, kind, n)
    T = rng.random(n) < 0.5
    S = T & (rng.random(n) < 0.5)
    outside = np.flatnonzero(~T)
    if outside.size:
        i = int(rng.choice(outside))
        assert mf.marginal_gain(model, i, S) >= mf.marginal_gain(model, i, T) - 1e-12


def test_bar_bound_tight_on_modular(rng):
    m = ModularModel(rng.normal(size=5))
    for A in ([], [0, 3], list(range(5))):
        assert mf.bar_supergradient_bound(m, 1.3, A) == pytest.approx(mf.log_partition_exact(m, 1.3), abs=1e-12)


def test_bar_bound_cut_examples():
    lz = mf.log_partition_exact(CUT12)
    empty = mf.bar_supergradient_bound(CUT12, 1.0, [])
    full = mf.bar_supergradient_bound(CUT12, 1.0, [0, 1])
    assert empty == pytest.approx(2 * math.log(1 + math.e), abs=1e-14)
    assert full == pytest.approx(2 + 2 * math.log(1 + math.exp(-1)), abs=1e-14)
    assert empty >= lz and full >= lz


@pytest.mark.parametrize("kind", ["cut", "dcut", "ising"])
def test_bar_bound_upper_bounds_log_z(kind):
    rng = np.random.default_rng(hash(kind) % 2**32)
    for _ in range(10):
        n = int(rng.integers(2, 9))
        m = pools.random_model(rng, kind, n)
        lz = mf.log_partition_exact(m)
        for _ in range(5):
            A = rng.random(n) < 0.5
            assert mf.bar_supergradient_bound(m, 1.0, A) >= lz - 1e-9


def test_pa_lower_bound_identical_modular():
    pa = mf.PaModel(ModularModel([0.0, 0.0]), ModularModel([0.0, 0.0]))
    assert mf.pa_lower_bound(pa) == pytest.approx(-2 * math.log(2), abs=1e-12)
    assert mf.log_pa_exact(pa) == pytest.approx(-2 * math.log(2), abs=1e-12)


@pytest.mark.parametrize("kind", KINDS)
def test_pa_lower_bound_valid(kind):
    rng = np.random.default_rng(len(kind))
    for _ in range(5):
        n = int(rng.integers(2, 8))
        pa = mf.PaModel(pools.random_model(rng, kind, n), pools.random_model(rng, kind, n), float(rng.uniform(0.2, 2)))
        assert mf.pa_lower_bound(pa, SolverConfig(epochs=3)) <= mf.log_pa_exact(pa) + 1e-6


def test_pa_bound_needs_candidates():
    pa = mf.PaModel(ModularModel([0.0]), ModularModel([0.0]))
    with pytest.raises(BadSet):
        mf.pa_bound(pa, candidate_sets=[])


def test_elbo_below_log_z(rng):
    for kind in KINDS:
        for _ in range(3):
            n = int(rng.integers(1, 9))
            m = pools.random_model(rng, kind, n)
            obj, lz = mf.build_elbo(m), mf.log_partition_exact(m)
            for x in rng.random((50, n)):
                assert obj.value(x) <= lz + 1e-9


def test_mean_field_exact_on_modular(rng):
    m = ModularModel(rng.normal(size=6) * 3)
    x = mf.sigmoid(m.theta)
    assert mf.build_elbo(m).value(x) == pytest.approx(mf.log_partition_exact(m), abs=1e-6)


def test_binary_entropy_endpoints():
    np.testing.assert_array_equal(mf.binary_entropy([0.0, 1.0]), [0.0, 0.0])
    assert mf.binary_entropy(0.5) == pytest.approx(math.log(2))


def test_elbo_gradient_finite_at_boundary():
    g = mf.build_elbo(CUT12).grad([0.0, 1.0])
    assert np.all(np.isfinite(g))
