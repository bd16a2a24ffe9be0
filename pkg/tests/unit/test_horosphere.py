"""Unit tests for horosphere analysis"""

import numpy as np
import pytest

from horocurv.core.errors import FrameError
from horocurv.core.horosphere import gauss_scalar, lemma_gap, sectional_spread, umbilicity_deviation
from horocurv.infrastructure.metrics import HyperbolicSpace
from horocurv.models.geometry import Point, ShapeOperator, TangentVector
from tests.helpers import unit_vector


def _expanded_gap(lam: np.ndarray) -> float:
    n = lam.size + 1
    cross = np.sum(lam) ** 2 - np.sum(lam**2)
    return float(np.sum(lam**2) - cross / (n - 2))


@pytest.mark.unit
class TestLemmaGap:
    """Pairwise principal-curvature gap"""

    def test_small_examples(self):
        assert lemma_gap([1.0, 1.0]) == 0.0
        assert lemma_gap([1.0, 1.0, 2.0]) == pytest.approx(1.0)
        assert lemma_gap([0.0, 3.0]) == pytest.approx(9.0)

    def test_rejects_single_curvature(self):
        """n = 2 leaves one principal curvature"""
        with pytest.raises(ValueError):
            lemma_gap([1.0])

    def test_equal_tuples_vanish(self, rng):
        """Constant tuples give exactly zero"""
        for _ in range(1000):
            size = int(rng.integers(2, 9))
            value = float(rng.uniform(-5.0, 5.0))
            assert lemma_gap([value] * size) == 0.0

    def test_random_tuples(self, rng):
        """Non-negative, zero only when equal, and matches the expanded form"""
        for _ in range(10000):
            lam = rng.uniform(-3.0, 3.0, size=int(rng.integers(2, 9)))
            gap = lemma_gap(lam)
            assert gap >= 0.0
            assert gap > 0.0 or np.ptp(lam) == 0.0
            assert gap == pytest.approx(_expanded_gap(lam), abs=1e-10)

    def test_normalized_equality_case(self, rng):
        """On tuples with max 1: tiny gap forces near-umbilicity and a visible spread forces a gap"""
        for _ in range(10000):
            lam = rng.uniform(0.0, 1.0, size=int(rng.integers(2, 8)))
            if rng.uniform() < 0.3:
                lam = np.full_like(lam, lam[0]) + rng.uniform(0.0, 1e-7, size=lam.size)
            lam = lam / lam.max()
            gap = lemma_gap(lam)
            deviation = umbilicity_deviation(np.diag(lam))
            if gap < 1e-10:
                assert deviation < 1e-4
            if deviation > 0.1:
                assert gap > 1e-4

    def test_order_invariant(self, rng):
        lam = rng.standard_normal(5)
        assert lemma_gap(lam) == pytest.approx(lemma_gap(lam[::-1]), abs=1e-12)


@pytest.mark.unit
class TestUmbilicity:
    def test_umbilic(self):
        assert umbilicity_deviation(3.0 * np.eye(4)) == pytest.approx(0.0, abs=1e-14)

    def test_scales_linearly(self, rng):
        """Deviation of cS is |c| times the deviation of S"""
        a = rng.standard_normal((3, 3))
        s = ShapeOperator(a + a.T)
        base = umbilicity_deviation(s)
        assert umbilicity_deviation(s.scaled(2.5)) == pytest.approx(2.5 * base)
        assert umbilicity_deviation(s.scaled(-2.0)) == pytest.approx(2.0 * base)

    def test_diagonal(self):
        assert umbilicity_deviation(np.diag([2.0, 1.0, 1.0])) == pytest.approx(1.0)


@pytest.mark.unit
class TestGaussScalar:
    """s = tr(S)^2 - tr(S^2) - 2 Ric(v) + Scal"""

    @pytest.mark.parametrize("dimension,k", [(3, 1.0), (4, 1.0), (5, 0.5), (3, 2.0)])
    def test_flat_horospheres_in_real_hyperbolic_space(self, dimension, k):
        """S = k Id gives s = 0"""
        model = HyperbolicSpace(dimension=dimension, k=k)
        x = np.zeros(dimension)
        x[-1] = 1.3
        direction = np.arange(1.0, dimension + 1.0)
        report = gauss_scalar(model, unit_vector(model, x, direction), k * np.eye(dimension - 1))
        assert report.s == pytest.approx(0.0, abs=1e-10)
        assert report.lemma_gap == pytest.approx(0.0, abs=1e-12)
        assert report.ric_v == pytest.approx(-(dimension - 1) * k**2)

    def test_complex_hyperbolic_horosphere(self, ch2):
        """S = diag(2, 1, 1) gives s = -2"""
        v = unit_vector(ch2, [0.1, -0.2, 0.05, 0.3], [0.2, 0.4, -0.1, 0.7])
        report = gauss_scalar(ch2, v, np.diag([2.0, 1.0, 1.0]))
        assert report.s == pytest.approx(-2.0, abs=1e-10)
        assert report.trace_S == pytest.approx(4.0)
        assert report.trace_S2 == pytest.approx(6.0)
        assert report.ric_v == pytest.approx(-6.0, abs=1e-10)
        assert report.scal == pytest.approx(-24.0, abs=1e-10)
        assert report.umbilicity_deviation == pytest.approx(1.0)
        assert report.lemma_gap == pytest.approx(1.0)

    def test_rotation_invariance(self, h3, rng):
        """Conjugating S by an orthogonal matrix leaves the report's scalars unchanged"""
        v = unit_vector(h3, [0.0, 0.0, 1.0], [1.0, 1.0, 0.0])
        a = rng.standard_normal((2, 2))
        s = ShapeOperator(a + a.T)
        q, _ = np.linalg.qr(rng.standard_normal((2, 2)))
        first = gauss_scalar(h3, v, s)
        second = gauss_scalar(h3, v, s.conjugated(q))
        assert second.s == pytest.approx(first.s, abs=1e-12)
        assert second.principal_curvatures == pytest.approx(first.principal_curvatures, abs=1e-12)

    def test_non_unit_normal_rejected(self, h3):
        v = TangentVector(Point(np.array([0.0, 0.0, 1.0])), np.array([2.0, 0.0, 0.0]))
        with pytest.raises(FrameError):
            gauss_scalar(h3, v, np.eye(2))

    def test_wrong_size_rejected(self, h3):
        v = unit_vector(h3, [0.0, 0.0, 1.0], [1.0, 0.0, 0.0])
        with pytest.raises(ValueError):
            gauss_scalar(h3, v, np.eye(3))

    def test_csv_row(self, h3):
        v = unit_vector(h3, [0.0, 0.0, 1.0], [0.0, 0.0, 1.0])
        row = gauss_scalar(h3, v, np.eye(2)).csv_row()
        assert list(row)[:4] == ["v1", "v2", "v3", "s"]
        assert {"lambda1", "lambda2", "umbilicity_deviation", "lemma_gap", "ric_v", "scal"} <= set(row)


@pytest.mark.unit
class TestSectionalSpread:
    """max - min sectional curvature at a point"""

    def test_real_hyperbolic_is_isotropic(self, h3):
        assert sectional_spread(h3, h3.reference_point(), 32) < 1e-8

    def test_planes_method_isotropic(self, h3):
        assert sectional_spread(h3, h3.reference_point(), 32, method="planes") < 1e-8

    def test_complex_hyperbolic_spread(self, ch2):
        """Curvatures fill [-4, -1]"""
        spread = sectional_spread(ch2, ch2.reference_point(), 16)
        assert spread == pytest.approx(3.0, abs=1e-6)

    def test_perturbed_is_anisotropic(self, perturbed):
        assert sectional_spread(perturbed, perturbed.base_point(), 64) > 1e-4

    def test_deterministic_in_seed(self, perturbed):
        p = perturbed.base_point()
        a = sectional_spread(perturbed, p, 16, rng_seed=7, method="planes")
        b = sectional_spread(perturbed, p, 16, rng_seed=7, method="planes")
        assert a == b

    def test_rejects_too_few_samples(self, h3):
        with pytest.raises(ValueError):
            sectional_spread(h3, h3.reference_point(), 1)

    def test_rejects_unknown_method(self, h3):
        with pytest.raises(ValueError):
            sectional_spread(h3, h3.reference_point(), 8, method="grid")
