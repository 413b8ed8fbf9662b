import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ghz_noise.analytic_dynamics import (
    NoiseConfiguration,
    analytic_measures,
    analytic_rho,
    dephasing_factors,
    factors_from_c,
    pure_decoherence_closed_form,
    separability_time,
    spectrum_offsets,
    witness_crossing,
    xstate_entropy,
    xstate_from_factors,
)
from ghz_noise.errors import DomainError
from ghz_noise.measures import measure_set
from ghz_noise.noise_kernels import FgKernel, PlKernel, beta_pl_closed
from ghz_noise.quantum_core import apply_bitflip_channel, ghz_density, validate_density

LN3_4 = math.log(3) / 4

CONFIGS = {
    "pure-pl": NoiseConfiguration.pure_pl(1e-2, 2.1),
    "pure-fg": NoiseConfiguration.pure_fg(0.5),
    "plm": NoiseConfiguration.plm(1.0, 3.0, 0.1),
    "fgm": NoiseConfiguration.fgm(0.1, 3.0, 0.9),
    "custom": NoiseConfiguration((FgKernel(0.3), PlKernel(0.5, 4.0), FgKernel(0.7))),
}


def channel_oracle(c, r):
    rho = ghz_density(r)
    for q, cq in enumerate(c):
        rho = apply_bitflip_channel(rho, q, (1 - cq) / 2)
    return rho


def test_channel_equivalence_random_tuples():
    rng = np.random.default_rng(0)
    for _ in range(200):
        c, r = rng.uniform(size=3), rng.uniform()
        got = xstate_from_factors(factors_from_c(c), r)
        assert np.max(np.abs(got - channel_oracle(c, r))) <= 1e-12


@pytest.mark.parametrize("c", [(0, 0, 0), (1, 1, 1), (0, 1, 0.5), (1, 0, 1)])
def test_channel_equivalence_boundaries(c):
    for r in (0.0, 0.5, 1.0):
        assert np.max(np.abs(xstate_from_factors(factors_from_c(c), r) - channel_oracle(c, r))) <= 1e-12


def test_zero_noise_is_identity_map():
    np.testing.assert_allclose(xstate_from_factors(factors_from_c((1, 1, 1))), ghz_density(1.0), atol=1e-15)


def test_pure_matrix_layout():
    x1 = math.exp(-4 * 0.2)
    c = math.exp(-0.4)
    rho = xstate_from_factors(factors_from_c((c, c, c)))
    assert rho[0, 0].real == pytest.approx((1 + 3 * x1) / 8, abs=1e-15)
    assert rho[0, 7].real == pytest.approx((1 + 3 * x1) / 8, abs=1e-15)
    for b in range(1, 7):
        assert rho[b, b].real == pytest.approx((1 - x1) / 8, abs=1e-15)
        assert rho[b, 7 - b].real == pytest.approx((1 - x1) / 8, abs=1e-15)


def test_mixed_matrix_layout_matches_h_values():
    f = dephasing_factors(CONFIGS["plm"], 1.0)
    rho = xstate_from_factors(f)
    expected = [f.H1, f.H2, f.H3, f.H3, f.H3, f.H3, f.H2, f.H1]
    np.testing.assert_allclose(np.diag(rho).real * 8, expected, atol=1e-14)
    np.testing.assert_allclose(rho[np.arange(8), 7 - np.arange(8)].real * 8, expected, atol=1e-14)


def test_plm_factor_values():
    f = dephasing_factors(CONFIGS["plm"], 1.0)
    # beta_pl(1) = 1/2 and beta_fg(1) at H = 0.1 = 1/2.2
    assert f.X == pytest.approx(math.exp(-2.0), rel=1e-14)
    assert f.Y == pytest.approx(math.exp(-2 * (0.5 + 1 / 2.2)), rel=1e-14)
    assert f.H1 + f.H2 + 2 * f.H3 == pytest.approx(4.0, abs=1e-15)


@given(st.floats(0, 1), st.floats(0, 1), st.floats(0, 1))
def test_h_values_sum_to_four(a, b, c):
    f = factors_from_c((a, b, c))
    assert f.H1 + f.H2 + 2 * f.H3 == pytest.approx(4.0, abs=1e-14)
    assert f.eta2 == pytest.approx(f.eta1**2)
    assert f.M + f.N == pytest.approx(2 + 2 * f.eta1)


@given(st.permutations([0, 1, 2]), st.floats(0, 1), st.floats(0, 1), st.floats(0, 1))
@settings(max_examples=50)
def test_measures_symmetric_under_qubit_permutation(perm, a, b, c):
    cs = (a, b, c)
    base = measure_set(xstate_from_factors(factors_from_c(cs)))
    perm_rho = xstate_from_factors(factors_from_c([cs[i] for i in perm]))
    m = measure_set(perm_rho)
    assert (m.E, m.P, m.D) == pytest.approx((base.E, base.P, base.D), abs=1e-10)


@pytest.mark.parametrize("name", sorted(CONFIGS))
def test_closed_forms_match_density_matrix_on_grid(name):
    cfg = CONFIGS[name]
    for tau in np.linspace(0.0, 5.0, 50):
        a = analytic_measures(cfg, tau)
        rho = analytic_rho(cfg, tau)
        validate_density(rho)
        m = measure_set(rho)
        assert abs(a.E - m.E) <= 1e-12
        assert abs(a.P - m.P) <= 1e-12
        assert abs(a.D - m.D) <= 1e-10


@given(st.floats(0, 1))
def test_pure_entropy_closed_form_equals_spectral_entropy(eta1):
    c = math.sqrt(eta1)
    assert xstate_entropy(spectrum_offsets(factors_from_c((c, c, c)))) == pytest.approx(
        pure_decoherence_closed_form(eta1), abs=1e-12
    )


@given(st.floats(0, 1), st.floats(0, 1))
def test_mixed_entropy_equals_h_form(c01, c2):
    f = factors_from_c((c01, c01, c2))
    hs = [f.H1, f.H2, f.H3, f.H3]
    h_form = -sum(h / 4 * math.log(h / 4) for h in hs if h > 0)
    assert xstate_entropy(spectrum_offsets(f)) == pytest.approx(h_form, abs=1e-12)


@pytest.mark.parametrize("name", sorted(CONFIGS))
def test_initial_values(name):
    m = analytic_measures(CONFIGS[name], 0.0)
    assert (m.E, m.P, m.D) == pytest.approx((0.5, 1.0, 0.0), abs=1e-12)


@pytest.mark.parametrize("name", sorted(CONFIGS))
def test_monotone_in_tau(name):
    cfg = CONFIGS[name]
    rows = [analytic_measures(cfg, t) for t in np.linspace(0, 30, 600)]
    assert all(b.E <= a.E for a, b in zip(rows, rows[1:]))
    assert all(b.P <= a.P for a, b in zip(rows, rows[1:]))
    assert all(b.D >= a.D for a, b in zip(rows, rows[1:]))


def test_asymptotes_at_large_beta():
    for c in [(math.exp(-40),) * 3, (math.exp(-40), math.exp(-50), math.exp(-45))]:
        m = measure_set(xstate_from_factors(factors_from_c(c)))
        assert (m.E, m.P, m.D) == pytest.approx((-0.25, 0.25, math.log(4)), abs=1e-9)
    m = analytic_measures(NoiseConfiguration.pure_fg(0.5), 10.0)  # beta = 10^3 / 3
    assert (m.E, m.P, m.D) == pytest.approx((-0.25, 0.25, math.log(4)), abs=1e-9)


def test_entropy_monotone_near_plateau():
    etas = np.linspace(1e-4, 0.0, 200)
    vals = [xstate_entropy(spectrum_offsets(factors_from_c((math.sqrt(e),) * 3))) for e in etas]
    assert all(b >= a for a, b in zip(vals, vals[1:]))
    assert vals[-1] == math.log(4)


def test_separability_pure_fg():
    tau = separability_time(NoiseConfiguration.pure_fg(0.5))
    assert tau == pytest.approx((3 * math.log(3) / 4) ** (1 / 3), abs=1e-9)
    assert tau == pytest.approx(0.93748, abs=1e-4)


def test_separability_pure_pl_hits_ln3_over_4():
    k = PlKernel(1e-2, 2.1)
    tau = separability_time(NoiseConfiguration.pure_pl(1e-2, 2.1))
    assert beta_pl_closed(tau, k) == pytest.approx(LN3_4, abs=1e-9)
    assert LN3_4 == pytest.approx(0.27465, abs=1e-5)


def test_separability_ordering():
    pl = separability_time(NoiseConfiguration.pure_pl(1e-3, 2.1))
    fg = separability_time(NoiseConfiguration.pure_fg(0.9))
    assert pl > fg


def test_witness_crossing_rejects_unreachable_level():
    with pytest.raises(DomainError):
        witness_crossing(CONFIGS["pure-fg"], -0.3)


def test_factors_validation():
    with pytest.raises(DomainError):
        factors_from_c((1.2, 0.5, 0.5))
    with pytest.raises(DomainError):
        factors_from_c((0.5, 0.5))
    with pytest.raises(DomainError):
        xstate_from_factors(factors_from_c((1, 1, 1)), r=1.5)


def test_configuration_validation():
    with pytest.raises(DomainError):
        NoiseConfiguration((FgKernel(0.5), FgKernel(0.5)))
    with pytest.raises(DomainError):
        NoiseConfiguration((FgKernel(0.5),) * 3, kind="bogus")
    cfg = NoiseConfiguration.fgm(0.1, 3.0, 0.9)
    assert cfg.kernels[0] == cfg.kernels[1] == FgKernel(0.9)
    assert cfg.kernels[2] == PlKernel(0.1, 3.0)


def test_pure_pl_corner_entry():
    cfg = NoiseConfiguration.pure_pl(1e-2, 2.1)
    beta = beta_pl_closed(1.0, PlKernel(1e-2, 2.1))
    assert analytic_rho(cfg, 1.0)[0, 0].real == pytest.approx((1 + 3 * math.exp(-4 * beta)) / 8, abs=1e-15)
