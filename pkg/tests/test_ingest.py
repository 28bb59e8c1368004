import io
import math

import numpy as np
import pytest

from kellyfrac.distributions import empirical_from_samples
from kellyfrac.errors import DomainError, ParseError
from kellyfrac.ingest import (
    TickSeries,
    gbm_ticks,
    matched_drift,
    read_prices_csv,
    returns_from_prices,
    summary_stats,
    write_prices_csv,
)
from kellyfrac.optimizer import optimize_scalar


class TestReadPrices:
    def test_basic(self):
        t = read_prices_csv(io.BytesIO(b"timestamp,price\nt,100\nt,101\n"))
        np.testing.assert_array_equal(t.prices, [100, 101])

    def test_text_stream_and_iso_timestamps(self):
        src = "timestamp,price\n2015-12-02T09:30:00,117.3\n2015-12-02T09:30:01,117.4\n"
        assert len(read_prices_csv(io.StringIO(src))) == 2

    def test_negative_price_names_row(self):
        with pytest.raises(ParseError) as exc:
            read_prices_csv(io.BytesIO(b"timestamp,price\n1,100\n2,-5\n"))
        assert exc.value.row == 3
        assert "row 3" in str(exc.value)

    @pytest.mark.parametrize(
        "body,row",
        [
            (b"timestamp,price\n1,100\n2\n", 3),
            (b"timestamp,price\n1,abc\n", 2),
            (b"timestamp,price\n5,100\n4,100\n", 3),
            (b"timestamp,price\n1,0\n", 2),
        ],
    )
    def test_parse_errors(self, body, row):
        with pytest.raises(ParseError) as exc:
            read_prices_csv(io.BytesIO(body))
        assert exc.value.row == row

    def test_large_file(self):
        ticks = gbm_ticks(100, 0.0, 1e-4, 110_000, seed=1)
        buf = io.StringIO()
        write_prices_csv(ticks, buf)
        back = read_prices_csv(io.BytesIO(buf.getvalue().encode()))
        assert len(back) == 110_000
        np.testing.assert_array_equal(back.prices, ticks.prices)


class TestReturns:
    def test_arithmetic(self):
        r = returns_from_prices(TickSeries([100, 101, 100]))
        np.testing.assert_allclose(r, [0.01, -1 / 101], rtol=1e-15)

    def test_zeros_kept(self):
        np.testing.assert_array_equal(returns_from_prices(TickSeries([100, 100])), [0.0])
        assert np.all(returns_from_prices(TickSeries([7.0] * 9)) == 0)

    def test_too_short(self):
        with pytest.raises(DomainError):
            returns_from_prices(TickSeries([100]))

    def test_scale_invariance(self):
        ticks = gbm_ticks(50, 1e-5, 1e-3, 1000, seed=4)
        a = returns_from_prices(ticks)
        exact = returns_from_prices(TickSeries(ticks.prices * 8.0))
        np.testing.assert_array_equal(a, exact)
        # a generic factor rounds each price, so agreement is to an ulp of the gross return 1 + X
        b = returns_from_prices(TickSeries(ticks.prices * 37.0))
        assert np.all(np.abs(a - b) <= 1e-15 * (1 + np.abs(a)))


class TestGbm:
    def test_constant(self):
        np.testing.assert_array_equal(gbm_ticks(42, 0, 0, 5, seed=0).prices, 42.0)

    def test_deterministic_growth(self):
        t = gbm_ticks(10, math.log(1.01), 0, 50, seed=0)
        np.testing.assert_allclose(t.prices, 10 * 1.01 ** np.arange(50), rtol=1e-13)

    def test_seeded(self):
        a = gbm_ticks(100, 1e-8, 1e-4, 100, seed=3)
        b = gbm_ticks(100, 1e-8, 1e-4, 100, seed=3)
        np.testing.assert_array_equal(a.prices, b.prices)

    def test_bad_inputs(self):
        with pytest.raises(DomainError):
            gbm_ticks(0, 0, 0.1, 10, seed=1)
        with pytest.raises(DomainError):
            gbm_ticks(1, 0, 0.1, 1, seed=1)

    def test_desk_scale_sigma(self):
        r = returns_from_prices(gbm_ticks(100, 1.628e-8, 1.405e-4, 110_000, seed=12))
        assert np.all(r > -1)
        assert abs(summary_stats(r).sigma_hat / 1.405e-4 - 1) <= 0.03

    def test_matched_drift(self):
        mu = matched_drift(0.825, 1.405e-4, 20_000, seed=5)
        s = summary_stats(returns_from_prices(gbm_ticks(100, mu, 1.405e-4, 20_000, seed=5)))
        assert s.mu_hat / s.sigma_hat**2 == pytest.approx(0.825, abs=1e-6)


class TestSummaryStats:
    def test_symmetric_pair(self):
        s = summary_stats([0.01, -0.01])
        assert (s.mu_hat, s.x_min, s.x_max, s.m) == (0.0, -0.01, 0.01, 2)
        lo, hi = s.confinement
        assert lo == pytest.approx(-100) and hi == pytest.approx(100)

    def test_zeros(self):
        s = summary_stats([0, 0, 0])
        assert s.mu_hat == 0 and s.sigma_hat == 0
        assert s.confinement is None

    def test_population_convention(self):
        s = summary_stats([1.0, 2.0, 3.0, 6.0])
        assert s.sigma_hat == pytest.approx(np.std([1, 2, 3, 6], ddof=0), rel=1e-15)

    def test_bracketing(self):
        x = np.full(7, 0.1)
        s = summary_stats(x)
        assert s.x_min <= s.mu_hat <= s.x_max

    def test_empty(self):
        with pytest.raises(DomainError):
            summary_stats([])

    def test_json(self):
        out = summary_stats([0.01, -0.02]).to_json()
        assert out["confinement"] == [pytest.approx(-100), pytest.approx(50)]

    def test_small_return_expansion(self):
        mu = matched_drift(0.5, 2e-4, 30_000, seed=9)
        r = returns_from_prices(gbm_ticks(100, mu, 2e-4, 30_000, seed=9))
        s = summary_stats(r)
        k = optimize_scalar(empirical_from_samples(r)).k
        assert abs(k - s.mu_hat / s.sigma_hat**2) <= 0.05
