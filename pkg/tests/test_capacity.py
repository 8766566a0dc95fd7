import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dampdeph import capacity as cap
from dampdeph import channels as ch
from dampdeph.channels import ChannelParams
from dampdeph.distillation import combined_lower_bound
from dampdeph.entropic import binary_entropy, coherent_information
from dampdeph.errors import ContractViolation, DomainError, ParameterError
from dampdeph.linalg import kron


def _ic_at(params, r):
    rho = ch.bloch_to_density(r)
    return coherent_information(ch.joint_channel(params), ch.joint_complement(params), rho).value


def _leading_ir(p, dg):
    # Printed asymptotic form with the missing log2(e) and exp(-1/(1-q)) factors.
    q = 4 * p * (1 - p)
    return cap.asymptotic_ir(p, dg) / math.log(2) * math.exp(-1 / (1 - q))


# -- scalar optimizers --------------------------------------------------------------

def test_golden_section_on_parabola():
    x, fx, n, ok = cap.golden_section_max(lambda t: -(t - 0.3) ** 2, -1, 1)
    assert ok and abs(x - 0.3) < 1e-9 and fx > -1e-18 and n < 400


def test_maximize_on_interval_finds_global_of_bimodal():
    f = lambda t: math.exp(-50 * (t + 0.5) ** 2) + 1.2 * math.exp(-50 * (t - 0.6) ** 2)  # noqa: E731
    res = cap.maximize_on_interval(f, -1, 1, starts=3)
    assert abs(res.argmax[0] - 0.6) < 1e-6 and res.converged


# -- single-letter coherent information ------------------------------------------------

def test_ic_dephasing_line():
    res = cap.ic_channel(ChannelParams(0.15, 0))
    assert abs(res.value - (1 - binary_entropy(0.15))) < 1e-10
    assert abs(res.value - 0.390160) < 1e-6
    assert abs(res.argmax[0]) < 1e-4
    assert res.converged


@pytest.mark.parametrize("p", [0.05, 0.15, 0.25, 0.35])
def test_ic_vanishes_beyond_gmax(p):
    for g in (ch.g_max(p), ch.g_max(p) + 0.02, 0.8, 1.0):
        assert cap.ic_channel(ChannelParams(p, min(g, 1.0))).value <= 1e-9


@pytest.mark.parametrize("p", [0.05, 0.15, 0.25, 0.35])
def test_ic_positive_just_below_gmax(p):
    # Positive, although for mid-range p only by ~1e-9 (see gmax_consistency).
    assert cap.ic_channel(ChannelParams(p, ch.g_max(p) - 0.02)).value > 1e-12


def test_ic_pure_damping_matches_closed_form_scan():
    g = 0.25
    zs = np.linspace(-1, 1, 200001)
    closed = max(
        binary_entropy((1 - g) * (1 - z) / 2) - binary_entropy(g * (1 - z) / 2) for z in zs[::100]
    )
    fine = np.array([binary_entropy((1 - g) * (1 - z) / 2) - binary_entropy(g * (1 - z) / 2) for z in zs])
    res = cap.ic_channel(ChannelParams(0, g))
    assert res.value >= closed - 1e-12
    assert abs(res.value - fine.max()) < 1e-8


def test_ic_random_bloch_net():
    rng = np.random.default_rng(0)
    for p, g in [(0.15, 0.2), (0.05, 0.4), (0.3, 0.1)]:
        prm = ChannelParams(p, g)
        best = cap.ic_channel(prm).value
        for _ in range(200):
            v = rng.normal(size=3)
            r = v / np.linalg.norm(v) * rng.uniform() ** (1 / 3)
            assert _ic_at(prm, r) <= best + 1e-9


def test_ic_invariant_under_rotation_about_z():
    rng = np.random.default_rng(1)
    for _ in range(200):
        p, g = rng.uniform(0, 0.5), rng.uniform(0, 1)
        prm = ChannelParams(p, g)
        z = rng.uniform(-1, 1)
        rho_t = math.sqrt(1 - z * z) * rng.uniform()
        a, b = rng.uniform(0, 2 * math.pi, size=2)
        r1 = (rho_t * math.cos(a), rho_t * math.sin(a), z)
        r2 = (rho_t * math.cos(b), rho_t * math.sin(b), z)
        assert abs(_ic_at(prm, r1) - _ic_at(prm, r2)) < 1e-10


def test_ic_rejects_bad_params():
    with pytest.raises(ParameterError):
        cap.ic_channel((0.1, 0.2))


# -- reverse coherent information --------------------------------------------------------

@pytest.mark.parametrize("p", [0.05, 0.15, 0.25])
def test_ir_dephasing_line(p):
    res = cap.ir_channel(ChannelParams(p, 0))
    assert abs(res.value - (1 - binary_entropy(p))) < 1e-10
    assert abs(res.argmax[0]) < 1e-4 and res.converged


def test_ir_equals_ic_pointwise_on_dephasing_line():
    for p in (0.05, 0.15, 0.4):
        prm = ChannelParams(p, 0)
        f_ic, f_ir = cap.ic_objective(prm), cap.ir_objective(prm)
        assert abs(f_ic(0.0) - f_ir(0.0)) < 1e-12


def test_ir_positive_everywhere_below_full_damping():
    for p in (0.0, 0.1, 0.25, 0.45):
        for g in (0.0, 0.3, 0.7, 0.95, 0.999):
            if p == 0.45 and g == 0.999:
                continue  # optimum needs eps < 1e-300, checked below
            assert cap.ir_channel(ChannelParams(p, g)).value > 0


def test_ir_near_half_dephasing_limited_by_double_range():
    # The rate gap (1-g)(1-q) puts the optimum at eps ~ exp(-c / gap); once
    # that is below 1e-300 only underflow-sized values remain.
    assert 0 < cap.ir_channel(ChannelParams(0.45, 0.95)).value < 1e-170
    assert abs(cap.ir_channel(ChannelParams(0.45, 0.999)).value) < 1e-290


def test_ir_closed_form_tail_matches_generic_objective():
    for p, g in [(0.3, 0.4), (0.05, 0.9), (0.45, 0.1)]:
        prm = ChannelParams(p, g)
        f = cap.ir_objective(prm)
        for e in (1e-2, 1e-4, 1e-6):
            assert abs(cap.ir_nearly_pure(prm, e, True) - f(1 - 2 * e)) < 1e-12
            assert abs(cap.ir_nearly_pure(prm, e, False) - f(2 * e - 1)) < 1e-12


def test_ir_zero_at_full_damping():
    assert abs(cap.ir_channel(ChannelParams(0.15, 1.0)).value) < 1e-12


def test_ir_small_delta_g_matches_corrected_leading_form():
    for dg in (1e-2, 1e-3):
        ratio = cap.ir_channel(ChannelParams(0.15, 1 - dg)).value / _leading_ir(0.15, dg)
        assert abs(ratio - 1) < 0.02


@pytest.mark.xfail(strict=True, reason="printed asymptotic form overshoots by ~5x")
def test_ir_near_full_damping_matches_printed_asymptotic():
    ratio = cap.ir_channel(ChannelParams(0.15, 0.99)).value / cap.asymptotic_ir(0.15, 0.01)
    assert abs(ratio - 1) < 0.15


# -- complement positivity ------------------------------------------------------------

def test_complement_coherent_information_positive():
    for p, g in [(0.25, 0.5), (0.15, 0.9), (0.05, 0.05), (0.5, 0.99)]:
        w = cap.ic_complement_positive(ChannelParams(p, g))
        assert w.covered and w.positive and w.value > 0
        fc, f = ch.joint_complement(ChannelParams(p, g)), ch.joint_channel(ChannelParams(p, g))
        assert abs(coherent_information(fc, f, w.rho).value - w.value) < 1e-12


def test_complement_positivity_outside_hypotheses():
    w = cap.ic_complement_positive(ChannelParams(0, 0.5))
    assert not w.covered and not w.positive


# -- two-letter ansatz ---------------------------------------------------------------

@pytest.mark.parametrize("z", [-0.9, -0.2, 0.0, 0.35, 1.0])
def test_product_weights_give_product_state(z):
    rho = np.diag([(1 + z) / 2, (1 - z) / 2])
    np.testing.assert_allclose(cap.ansatz_state(cap.product_weights(z)), kron(rho, rho), atol=1e-12)


def test_ansatz_rejects_non_probability_weights():
    with pytest.raises(ParameterError):
        cap.ansatz_state([0.5, 0.5, 0.5, -0.5])
    with pytest.raises(ParameterError):
        cap.ansatz_state([0.3, 0.3, 0.3])


def test_two_letter_objective_matches_direct_evaluation():
    prm = ChannelParams(0.16, 0.2)
    f = cap.two_letter_objective(prm)
    f2 = ch.tensor(ch.joint_channel(prm), ch.joint_channel(prm))
    fc2 = ch.tensor(ch.joint_complement(prm), ch.joint_complement(prm))
    rng = np.random.default_rng(2)
    w = rng.dirichlet(np.ones(4), size=10)
    batch = f(w)
    for wi, bi in zip(w, batch):
        direct = coherent_information(f2, fc2, cap.ansatz_state(wi)).value
        assert abs(f(wi) - direct) < 1e-12
        assert abs(bi - direct) < 1e-12


def test_two_letter_dephasing_is_additive():
    prm = ChannelParams(0.15, 0)
    res = cap.two_letter_ansatz_ic(prm)
    assert abs(res.value - 2 * cap.ic_channel(prm).value) < 1e-7


@settings(max_examples=10, deadline=None)
@given(st.floats(0, 0.5), st.floats(0, 1))
def test_two_letter_never_below_product(p, g):
    prm = ChannelParams(p, g)
    res = cap.two_letter_ansatz_ic(prm, restarts=4)
    assert res.value >= 2 * cap.ic_channel(prm).value - 1e-9
    w = np.array(res.argmax)
    assert w.min() >= 0 and abs(w.sum() - 1) < 1e-12


def test_nonadditivity_examples():
    assert cap.nonadditivity_delta(ChannelParams(0.15, 0)).delta <= 1e-6
    na = cap.nonadditivity_delta(ChannelParams(0.16, 0.2))
    assert na.significant and 1e-4 < na.delta < 1e-2
    assert abs(na.delta - (na.two_letter.value / 2 - na.single.value)) < 1e-15
    far = cap.nonadditivity_delta(ChannelParams(0.16, 0.6))
    assert not far.significant


def test_nonadditivity_onset_on_coarse_grid():
    onset = cap.nonadditivity_onset(0.16, [0.0, 0.05, 0.1, 0.15, 0.2], restarts=16)
    assert onset is not None and 0 < onset <= 0.2


def test_two_letter_deterministic():
    prm = ChannelParams(0.16, 0.15)
    a = cap.two_letter_ansatz_ic(prm, restarts=8, seed=3)
    b = cap.two_letter_ansatz_ic(prm, restarts=8, seed=3)
    assert a == b


def test_two_letter_objective_rejects_broken_state():
    f = cap.two_letter_objective(ChannelParams(0.15, 0.2))
    with pytest.raises(ContractViolation):
        f(np.array([1.5, -0.5, 0.0, 0.0]))


# -- singularity rates ----------------------------------------------------------------

def test_singularity_rates_near_ground():
    r = cap.singularity_rate(ChannelParams(0.15, 0.2))
    assert abs(r.x_a - 1) < 0.05
    assert abs(r.x_d / 0.8 - 1) < 0.05
    assert abs(r.x_e / 0.608 - 1) < 0.05


def test_singularity_rates_identity_channel():
    r = cap.singularity_rate(ChannelParams(0, 0))
    assert abs(r.x_a - 1) < 1e-6 and abs(r.x_d - 1) < 1e-6 and r.x_e == 0


def test_singularity_rate_near_excited():
    r = cap.singularity_rate(ChannelParams(0.15, 0.5), family="excited")
    assert abs(r.x_e / 0.51 - 1) < 0.05


def test_singularity_rate_unknown_family():
    with pytest.raises(ValueError):
        cap.singularity_rate(ChannelParams(0.15, 0.5), family="other")


# -- asymptotic forms ------------------------------------------------------------------

def test_asymptotic_limits_and_value():
    assert abs(cap.asymptotic_ir(1e-9, 0.01) / 0.01 - 1) < 1e-6
    assert abs(cap.asymptotic_ir(0.15, 0.01) / 2.02e-5 - 1) < 0.01


def test_asymptotic_is_small_eps_maximum_in_nats():
    # small_eps_ir is in bits, the closed form is its maximum in nats.
    for p, dg in [(0.15, 0.01), (0.3, 1e-3), (0.05, 0.2)]:
        e = cap.eps_star(p, dg)
        assert abs(cap.small_eps_ir(p, dg, e) * math.log(2) / cap.asymptotic_ir(p, dg) - 1) < 1e-12
        grid = np.geomspace(e / 10, e * 10, 2001)
        assert abs(grid[np.argmax([cap.small_eps_ir(p, dg, x) for x in grid])] / e - 1) < 0.01


@pytest.mark.xfail(strict=True, reason="identity holds only up to a factor ln 2")
def test_asymptotic_equals_small_eps_at_eps_star():
    e = cap.eps_star(0.15, 0.01)
    assert abs(cap.small_eps_ir(0.15, 0.01, e) / cap.asymptotic_ir(0.15, 0.01) - 1) < 1e-12


def test_asymptotic_domain_errors():
    for args in [(0, 0.01), (0.5, 0.01), (0.15, 0), (0.15, 1.0)]:
        with pytest.raises(DomainError):
            cap.asymptotic_ir(*args)


# -- pure amplitude damping -----------------------------------------------------------

def test_amplitude_damping_reverse_dominates():
    recs = {r.g: r for r in cap.ad_ir_dominates_ic([0.0, 0.1, 0.3, 0.5, 0.7, 0.9, 1.0])}
    assert all(r.holds for r in recs.values())
    assert abs(recs[0.0].ic - 1) < 1e-10 and abs(recs[0.0].ir - 1) < 1e-10 and recs[0.0].strict is None
    assert recs[0.7].ic <= 1e-9 and recs[0.7].ir > 0
    assert recs[0.3].strict and recs[0.3].margin > 1e-3
    assert all(r.strict for g, r in recs.items() if 0 < g < 1)


# -- half mutual information --------------------------------------------------------------

def test_half_mutual_information_examples():
    assert abs(cap.half_mutual_info_bound(ch.identity_channel()).value - 1) < 1e-10
    assert cap.half_mutual_info_bound(ChannelParams(0.15, 0)).value >= 0.390160
    prm = ChannelParams(0.15, 0.5)
    assert cap.half_mutual_info_bound(prm).value >= combined_lower_bound(prm)


def test_half_mutual_information_rejects_non_qubit():
    with pytest.raises(ParameterError):
        cap.half_mutual_info_bound(ch.identity_channel(3))


# -- determinism and threshold consistency --------------------------------------------------

def test_single_letter_optimizers_deterministic():
    prm = ChannelParams(0.2, 0.25)
    for fn in (cap.ic_channel, cap.ir_channel, cap.half_mutual_info_bound):
        assert fn(prm) == fn(prm)


def test_gmax_consistency_signs():
    for p, below, above in cap.gmax_consistency():
        assert below > 1e-12
        assert above < 1e-12
