import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import garchquad.quadfit as qf
from garchquad import (
    EstimationError,
    GarchOrder,
    ParamVector,
    QuadraticFit,
    SearchBox,
    TimeSeries,
    diagonal_cut,
    estimate,
    fit_quadratic,
    quasi_nll,
    simulate,
    vertex,
)


def make_box(lower, upper):
    return SearchBox(lower=np.asarray(lower, dtype=float), upper=np.asarray(upper, dtype=float))


class TestDiagonalCut:
    def test_unit_box_three_points(self):
        cut = diagonal_cut(make_box([0.0, 0.0], [1.0, 1.0]), 3)
        assert np.allclose(cut, [[0.0, 0.0], [0.5, 0.5], [1.0, 1.0]])

    def test_published_box_endpoints(self):
        box = make_box([0.7751, 0.2813219], [0.8501, 0.3625687])
        cut = diagonal_cut(box, 100)
        assert cut[0] == pytest.approx([0.7751, 0.2813219])
        assert cut[-1] == pytest.approx([0.8501, 0.3625687])
        # the published table prints the first/last rows rounded to 4 decimals
        assert np.round(cut[0], 4).tolist() == [0.7751, 0.2813]
        assert np.round(cut[-1], 4).tolist() == [0.8501, 0.3626]

    @given(
        m=st.integers(3, 50),
        lo=st.floats(0.01, 1.0),
        width=st.floats(0.01, 2.0),
    )
    def test_constant_spacing(self, m, lo, width):
        cut = diagonal_cut(make_box([lo, lo], [lo + width, lo + 2 * width]), m)
        diffs = np.diff(cut, axis=0)
        assert np.allclose(diffs, diffs[0])

    def test_rejects_small_m(self):
        with pytest.raises(ValueError):
            diagonal_cut(make_box([0.0, 0.0], [1.0, 1.0]), 2)


class TestFitQuadratic:
    def test_exact_quadratic_recovery(self):
        xs = np.linspace(-2.0, 3.0, 25)
        ys = 2.0 * xs**2 - 3.0 * xs + 1.0
        fit = fit_quadratic(xs, ys)
        assert fit.a0 == pytest.approx(1.0, abs=1e-10)
        assert fit.a1 == pytest.approx(-3.0, abs=1e-10)
        assert fit.a2 == pytest.approx(2.0, abs=1e-10)
        assert fit.rss == pytest.approx(0.0, abs=1e-18)

    def test_published_cut_omega_fit(self, reference_cut):
        omegas, _, nlls = reference_cut
        fit = fit_quadratic(omegas, nlls)
        # frozen fit of the published (rounded) table; the published run
        # reports a1 = -230.1460, a2 = 143.7092
        assert fit.a1 == pytest.approx(-230.43337467556, rel=1e-9)
        assert fit.a2 == pytest.approx(143.88565441599, rel=1e-9)

    def test_published_cut_alpha_fit(self, reference_cut):
        _, alphas, nlls = reference_cut
        fit = fit_quadratic(alphas, nlls)
        assert fit.a1 == pytest.approx(-75.79750740844, rel=1e-9)
        assert fit.a2 == pytest.approx(122.60710715039, rel=1e-9)

    def test_rank_deficient_designs(self):
        with pytest.raises(ValueError):
            fit_quadratic([1.0, 1.0, 1.0], [1.0, 2.0, 3.0])
        with pytest.raises(ValueError):
            fit_quadratic([1.0, 2.0], [1.0, 2.0])
        with pytest.raises(ValueError):
            fit_quadratic([1.0, 2.0, 1.0, 2.0], [1.0, 2.0, 1.0, 2.0])

    @given(seed=st.integers(0, 10_000))
    @settings(max_examples=50)
    def test_residual_orthogonality(self, seed):
        rng = np.random.default_rng(seed)
        xs = np.sort(rng.uniform(-1.0, 2.0, 20))
        if np.unique(xs).size < 3:
            return
        ys = rng.normal(size=20) + xs**2
        fit = fit_quadratic(xs, ys)
        r = ys - fit.predict(xs)
        norm = np.linalg.norm(ys)
        for basis in (np.ones_like(xs), xs, xs**2):
            assert abs(float(r @ basis)) <= 1e-8 * max(norm, 1.0)

    @given(
        c1=st.floats(0.1, 25.0),
        c0=st.floats(-100.0, 100.0),
    )
    @settings(max_examples=50)
    def test_affine_invariance_of_vertex(self, c1, c0):
        xs = np.linspace(0.5, 1.5, 30)
        ys = 4.0 * (xs - 0.9) ** 2 + 2.0 + 0.01 * np.sin(12.0 * xs)
        base = fit_quadratic(xs, ys)
        scaled = fit_quadratic(xs, c1 * ys + c0)
        assert scaled.a1 == pytest.approx(c1 * base.a1, rel=1e-9)
        assert scaled.a2 == pytest.approx(c1 * base.a2, rel=1e-9)
        assert vertex(scaled) == pytest.approx(vertex(base), rel=1e-9)


class TestVertex:
    def test_basic(self):
        assert vertex(QuadraticFit(0.0, -2.0, 1.0, 0.0)) == pytest.approx(1.0)

    def test_published_omega_coefficients(self):
        assert vertex(QuadraticFit(0.0, -230.1460, 143.7092, 0.0)) == pytest.approx(
            0.8007353, abs=5e-7
        )

    def test_published_alpha_coefficients(self):
        # -a1/(2 a2) with the published alpha coefficients; the published text
        # prints 0.3090923 for this quantity, inconsistent with its own values
        assert vertex(QuadraticFit(0.0, -75.7028, 120.8546, 0.0)) == pytest.approx(
            0.3131978, abs=5e-7
        )

    def test_rejects_concave(self):
        with pytest.raises(ValueError):
            vertex(QuadraticFit(0.0, 1.0, -2.0, 0.0))


class TestEstimate:
    def test_bundled_series_regression(self, paper_series, arch1):
        result = estimate(paper_series, arch1)
        # both vertices fall outside the bisection box on this series and are
        # clamped to it (see README caveat on the published example)
        assert result.theta_hat.to_array() == pytest.approx([0.6501, 0.96865625], abs=1e-9)
        assert any(f.startswith("clamped:omega") for f in result.flags)
        assert any(f.startswith("clamped:alpha1") for f in result.flags)
        assert result.objective_at_estimate == pytest.approx(119.336560, rel=1e-6)
        assert result.box.contains(result.theta_hat.to_array())
        assert len(result.fits) == 2

    def test_m_stability_on_bundled_series(self, paper_series, arch1):
        t100 = estimate(paper_series, arch1, m=100).theta_hat.to_array()
        t200 = estimate(paper_series, arch1, m=200).theta_hat.to_array()
        assert np.abs(t100 - t200).max() < 1e-3

    def test_exact_quadratic_diagonal_recovery(self):
        # when the objective is exactly quadratic along the cut, the vertices
        # recover the per-coordinate minimizers to near machine precision
        box = make_box([0.2, 0.1], [0.8, 0.5])
        cut = diagonal_cut(box, 100)
        # diagonal parameter s in [0, 1]; objective minimized at s* = 7/12
        s = (cut[:, 0] - box.lower[0]) / (box.upper[0] - box.lower[0])
        s_star = 7.0 / 12.0
        ys = 5.0 * (s - s_star) ** 2 + 2.0
        for i in range(2):
            fit = fit_quadratic(cut[:, i], ys)
            expected = box.lower[i] + s_star * (box.upper[i] - box.lower[i])
            assert vertex(fit) == pytest.approx(expected, abs=1e-9)

    def test_diagonal_brute_force_oracle(self, arch1):
        # dense enumeration along the diagonal is an independent check of the
        # fitted vertices: the estimate tracks the diagonal minimizer
        for seed in (100, 104, 108, 112):
            series = simulate(ParamVector(1.2, (0.6,)), 300, seed=seed)
            result = estimate(series, arch1)
            box = result.box
            dense = np.linspace(box.lower, box.upper, 2000)
            vals = np.array(
                [quasi_nll(series, ParamVector(row[0], (row[1],))).value for row in dense]
            )
            best = dense[int(np.argmin(vals))]
            cell = box.widths / 199.0
            assert np.all(np.abs(result.theta_hat.to_array() - best) <= 2.0 * cell)

    def test_alpha_within_grid_oracle_tolerance(self, paper_series, arch1):
        result = estimate(paper_series, arch1)
        box = result.box
        # 400x400 brute-force grid over the box
        omegas = np.linspace(box.lower[0], box.upper[0], 400)
        alphas = np.linspace(box.lower[1], box.upper[1], 400)
        x = paper_series.values
        lag, lead = x[:-1] ** 2, x[1:] ** 2
        best = (np.inf, None)
        for w in omegas:
            sig = w + alphas[:, None] * lag[None, :]
            vals = (np.log(sig) + lead[None, :] / sig).sum(axis=1)
            j = int(vals.argmin())
            if vals[j] < best[0]:
                best = (vals[j], alphas[j])
        assert abs(result.theta_hat.alphas[0] - best[1]) <= 0.02

    def test_zero_series_raises(self, arch1):
        with pytest.raises(EstimationError):
            estimate(TimeSeries(np.zeros(40)), arch1)

    def test_short_series_flagged(self, arch1):
        series = simulate(ParamVector(0.8, (0.3,)), 15, seed=5)
        result = estimate(series, arch1)
        assert any(f.startswith("short-series") for f in result.flags)

    def test_concave_fit_raises_with_coordinate_name(self, paper_series, arch1, monkeypatch):
        def concave_fit(xs, ys):
            return QuadraticFit(a0=0.0, a1=1.0, a2=-1.0, rss=0.0)

        monkeypatch.setattr(qf, "fit_quadratic", concave_fit)
        with pytest.raises(EstimationError, match="omega"):
            estimate(paper_series, arch1)
