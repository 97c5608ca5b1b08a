import numpy as np
import pytest

from wiretap_lsl.channel import ChannelStatistics, gen_correlation, ArraySpec
from wiretap_lsl.detequiv import (
    lsl_mutual_information,
    lsl_objective,
    lsl_secrecy_rate,
    solve_fixed_point,
)
from wiretap_lsl.linalg import hermitianize

GOLDEN = (np.sqrt(5.0) - 1.0) / 2.0


def iid_stats(snr, n, m):
    return ChannelStatistics(snr=snr, num_rx=n, num_tx=m, t_corr=np.eye(m), r_corr=np.eye(n))


def scalar_delta(rho, beta):
    """Analytic solution of e = rho/(1+delta), delta = rho/(1+beta*e)."""
    b = 1.0 + beta * rho - rho
    return (-b + np.sqrt(b * b + 4 * rho)) / 2.0


class TestFixedPoint:
    def test_scalar_golden_ratio(self):
        fp = solve_fixed_point(iid_stats(1.0, 1, 1), np.eye(1))
        assert fp.e == pytest.approx(GOLDEN, abs=1e-9)
        assert fp.delta == pytest.approx(GOLDEN, abs=1e-9)

    def test_zero_snr(self):
        fp = solve_fixed_point(iid_stats(0.0, 1, 1), np.eye(1))
        assert fp.e == 0.0 and fp.delta == 0.0

    def test_scalar_rho_ten(self):
        fp = solve_fixed_point(iid_stats(10.0, 4, 4), np.eye(4))
        expected = (-1.0 + np.sqrt(41.0)) / 2.0
        assert fp.e == pytest.approx(expected, abs=1e-9)
        assert fp.delta == pytest.approx(expected, abs=1e-9)

    @pytest.mark.parametrize("rho", [0.1, 1.0, 10.0])
    @pytest.mark.parametrize("beta", [0.5, 1.0, 2.0])
    def test_matches_scalar_quadratic(self, rho, beta):
        m = 2
        n = int(round(beta * m))
        fp = solve_fixed_point(iid_stats(rho, n, m), np.eye(m))
        delta = scalar_delta(rho, beta)
        e = rho / (1.0 + delta)
        assert fp.delta == pytest.approx(delta, abs=1e-10)
        assert fp.e == pytest.approx(e, abs=1e-10)

    def test_residual_below_tolerance(self):
        fp = solve_fixed_point(iid_stats(5.0, 3, 2), np.eye(2))
        assert fp.residual <= 1e-12


class TestMutualInformation:
    def test_zero_snr(self):
        stats = iid_stats(0.0, 2, 2)
        fp = solve_fixed_point(stats, np.eye(2))
        assert lsl_mutual_information(stats, np.eye(2), fp) == 0.0

    def test_scalar_analytic_value(self):
        # Oracle: plug e = delta = (sqrt(5)-1)/2 into the closed form:
        # 2 ln(1+e) - e^2 = 0.5804576388691... nats.
        stats = iid_stats(1.0, 1, 1)
        fp = solve_fixed_point(stats, np.eye(1))
        expected = 2.0 * np.log(1.0 + GOLDEN) - GOLDEN**2
        assert expected == pytest.approx(0.5804576388691, abs=1e-12)
        assert lsl_mutual_information(stats, np.eye(1), fp) == pytest.approx(expected, abs=1e-8)

    def test_unitary_congruence_invariance(self):
        rng = np.random.default_rng(8)
        m = 4
        g = rng.standard_normal((m, m)) + 1j * rng.standard_normal((m, m))
        t = hermitianize(np.eye(m) + g @ g.conj().T / m)
        gp = rng.standard_normal((m, m)) + 1j * rng.standard_normal((m, m))
        p = hermitianize(gp @ gp.conj().T / m)
        q, _ = np.linalg.qr(rng.standard_normal((m, m)) + 1j * rng.standard_normal((m, m)))

        def mi(t_mat, p_mat):
            stats = ChannelStatistics(snr=3.0, num_rx=m, num_tx=m, t_corr=t_mat, r_corr=np.eye(m))
            fp = solve_fixed_point(stats, p_mat)
            return lsl_mutual_information(stats, p_mat, fp)

        base = mi(t, p)
        rotated = mi(hermitianize(q @ t @ q.conj().T), hermitianize(q @ p @ q.conj().T))
        assert rotated == pytest.approx(base, abs=1e-10)

    def test_monotone_in_snr(self):
        t = gen_correlation(ArraySpec(3, 1.0, 40.0, 5.0))
        previous = -1.0
        for snr in [0.1, 0.5, 1.0, 5.0, 10.0, 50.0]:
            stats = ChannelStatistics(snr=snr, num_rx=3, num_tx=3, t_corr=t, r_corr=np.eye(3))
            fp = solve_fixed_point(stats, np.eye(3))
            mi = lsl_mutual_information(stats, np.eye(3), fp)
            assert mi > previous
            previous = mi


class TestSecrecyRate:
    def test_identical_statistics_zero(self):
        stats = iid_stats(2.0, 3, 3)
        rate = lsl_secrecy_rate(stats, stats, np.eye(3))
        assert rate.rs == 0.0

    def test_strong_eavesdropper_clamped(self):
        main = iid_stats(1.0, 2, 2)
        eave = iid_stats(100.0, 2, 2)
        rate = lsl_secrecy_rate(main, eave, np.eye(2))
        assert rate.i_eave > rate.i_main
        assert rate.rs == 0.0

    def test_transmit_dim_mismatch(self):
        with pytest.raises(ValueError):
            lsl_secrecy_rate(iid_stats(1.0, 2, 2), iid_stats(1.0, 2, 3), np.eye(2))


class TestObjective:
    def test_symmetric_zero(self):
        stats = iid_stats(1.0, 2, 2)
        rng = np.random.default_rng(0)
        g = rng.standard_normal((2, 2))
        p = g @ g.T
        assert lsl_objective(0.7, 0.7, stats, stats, p) == 0.0

    def test_zero_precoder(self):
        main = iid_stats(2.0, 2, 2)
        eave = iid_stats(1.0, 4, 2)
        assert lsl_objective(0.5, 0.3, main, eave, np.zeros((2, 2))) == 0.0

    def test_consistent_with_full_rate(self):
        # At converged fixed points, the objective must equal the
        # difference of the log-det terms inside the full expression.
        t_m = gen_correlation(ArraySpec(3, 1.0, 40.0, 5.0))
        t_e = gen_correlation(ArraySpec(3, 1.0, -10.0, 5.0))
        main = ChannelStatistics(snr=5.0, num_rx=3, num_tx=3, t_corr=t_m, r_corr=np.eye(3))
        eave = ChannelStatistics(snr=5.0, num_rx=2, num_tx=3, t_corr=t_e, r_corr=np.eye(2))
        p = np.eye(3)
        fp_m = solve_fixed_point(main, p)
        fp_e = solve_fixed_point(eave, p)
        obj = lsl_objective(fp_m.e, fp_e.e, main, eave, p)
        term_m = np.linalg.slogdet(np.eye(3) + main.beta * fp_m.e * t_m)[1]
        term_e = np.linalg.slogdet(np.eye(3) + eave.beta * fp_e.e * t_e)[1]
        assert obj == pytest.approx(max(0.0, (term_m - term_e) / 3), abs=1e-10)
