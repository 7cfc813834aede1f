import math

import numpy as np
import pytest

import qsync


def bell_like():
    # (|1,1;1,1> + |1,-1;1,-1>) / sqrt 2 lives on product indices 0 and 8
    psi = np.zeros(9, dtype=complex)
    psi[0] = psi[8] = 1.0 / math.sqrt(2.0)
    return np.outer(psi, psi.conj())


def test_model_and_bath_builders():
    model = qsync.build_model(1.0, 0.01, -1.0)
    assert model.delta == 0.01
    hs = np.asarray(model.hs)
    assert hs.shape == (9, 9)
    assert np.allclose(hs, np.diag(np.diag(hs)))  # diagonal in the product basis
    v = np.asarray(model.v)
    assert np.allclose(v, v.conj().T)

    bath = qsync.make_bath(0.05, 0.2, 0.3, 2)
    assert bath.nu[0] == 0.2
    assert bath.nu[1] == pytest.approx(2.0 * math.pi / 0.3, rel=1e-15)
    assert len(bath.c) == 3
    # c_0 = gamma*lambda*(cot(gamma*beta/2) - i)
    c0 = 0.2 * 0.05 * (1.0 / math.tan(0.2 * 0.3 / 2.0) - 1j)
    assert bath.c[0] == pytest.approx(c0, rel=1e-14)
    # analytic cancellation of the imaginary part, up to rounding
    assert bath.terminator.imag == pytest.approx(0.0, abs=1e-15)

    with pytest.raises(ValueError):
        qsync.make_bath(0.05, 2.0 * math.pi / 0.3, 0.3, 1)


def test_hierarchy_enumeration():
    space = qsync.enumerate_indices(6, 2)
    assert len(space) == 28  # binom(8, 2)
    assert space.index(0) == [0, 0, 0, 0, 0, 0]
    assert space.tier(0) == 0
    first_up = space.raised(0, 0)
    assert space.lowered(first_up, 0) == 0


def test_short_evolution_conserves_trace():
    model = qsync.build_model(1.0, 0.01, -1.0)
    bath = qsync.make_bath(0.05, 2.0, 0.3, 1)
    space = qsync.enumerate_indices(4, 2)
    rho0 = qsync.make_initial(qsync.InitialPreset.EquatorialProduct, model, bath)
    assert qsync.max_stable_step(bath) > 0.005

    samples = qsync.evolve(rho0, model, bath, space, 0.005, 0.5, 10)
    assert samples[0].time == 0.0
    assert samples[-1].time == pytest.approx(0.5)
    for s in samples:
        rho = np.asarray(s.rho)
        assert abs(np.trace(rho) - 1.0) < 1e-10
        assert np.max(np.abs(rho - rho.conj().T)) < 1e-10


def test_measures_on_textbook_states():
    rho = bell_like()
    neg = qsync.negativity_measures(rho)
    assert neg.negativity == pytest.approx(0.5, abs=1e-12)
    assert neg.log_negativity == pytest.approx(1.0, abs=1e-12)
    assert qsync.mutual_information(rho) == pytest.approx(2.0 * math.log(2.0), abs=1e-12)

    # equatorial product state: closed form S_r(0) = (4 + 9 pi^2) / (256 pi)
    model = qsync.build_model(1.0, 0.0, -1.0)
    bath = qsync.make_bath(0.05, 2.0, 0.3, 0)
    rho_eq = qsync.make_initial(qsync.InitialPreset.EquatorialProduct, model, bath)
    expected = (4.0 + 9.0 * math.pi**2) / (256.0 * math.pi)
    assert qsync.sync_measure(rho_eq, 0.0) == pytest.approx(expected, rel=1e-12)

    peak = qsync.max_sync(rho_eq, 256)
    assert peak.s_r_max == pytest.approx(expected, rel=1e-9)

    report = qsync.measure_report(rho_eq, 128)
    assert len(report.phi_grid) == 128
    assert report.s_r_max == pytest.approx(peak.s_r_max, rel=1e-9)

    with pytest.raises(ValueError):
        qsync.sync_measure(np.eye(9, dtype=complex), 0.0)  # trace 9, not a state


def test_quadrature_agrees_with_closed_form():
    rho = bell_like()
    closed = qsync.sync_measure(rho, 0.3)
    quad = qsync.sync_measure_quadrature(rho, 0.3, 48)
    assert quad == pytest.approx(closed, abs=1e-8)

    nodes, weights = qsync.gauss_legendre(16)
    assert sum(weights) == pytest.approx(2.0, abs=1e-13)
    assert sum(w * x for x, w in zip(nodes, weights)) == pytest.approx(0.0, abs=1e-14)


def test_steady_state_runs_to_convergence():
    model = qsync.build_model(1.0, 0.0, -1.0)
    bath = qsync.make_bath(0.05, 2.0, 0.3, 0)
    space = qsync.enumerate_indices(2, 2)
    rho0 = qsync.make_initial(qsync.InitialPreset.DiagonalThermal, model, bath)

    opts = qsync.SteadyOptions()
    opts.dt = 0.005
    opts.tolerance = 1e-5
    opts.window = 10.0
    opts.max_time = 100.0
    res = qsync.steady_state(rho0, model, bath, space, opts)
    assert res.converged
    assert res.t_reached <= 100.0
    rho = np.asarray(res.rho)
    assert abs(np.trace(rho) - 1.0) < 1e-10
