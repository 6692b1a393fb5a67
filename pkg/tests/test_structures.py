from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import strategies as S
from gstruct import sampling
from gstruct.jets import SubgroupTag, eta, factor_sl_co, subgroup_member
from gstruct.linalg import DegenerateError, GStructError, Matrix, max_rel_error
from gstruct.structures import (
    ConformalRep,
    MetricValue,
    VolumeDensityValue,
    conformal_equivalent,
    decompose_metric,
    metric_signature,
    recompose_metric,
    volume_equivariant_value,
)


class TestSignature:
    def test_minkowski(self):
        assert metric_signature(eta(4, 1)) == (1, 3)

    def test_identity(self):
        assert metric_signature(Matrix.identity(3)) == (0, 3)

    def test_off_diagonal(self):
        assert metric_signature(Matrix.from_rows([[0, 1], [1, 0]])) == (1, 1)

    def test_degenerate(self):
        with pytest.raises(DegenerateError):
            metric_signature(Matrix.from_rows([[1, 0], [0, 0]]))

    def test_declared_signature_checked(self):
        with pytest.raises(GStructError):
            MetricValue(eta(2, 1), q=0)


class TestDecompose:
    def test_unit_det(self):
        rep, vol = decompose_metric(eta(4, 1))
        assert rep.r == eta(4, 1) and vol.exact == 1

    def test_diag(self):
        rep, vol = decompose_metric(Matrix.diag([-4, 1]))
        assert vol.exact == 2
        assert rep.r == Matrix.diag([-2, F(1, 2)])

    def test_scalar(self):
        rep, vol = decompose_metric(Matrix.identity(2).scale(4))
        assert vol.exact == 4 and rep.r == Matrix.identity(2)

    def test_inexact(self):
        rep, vol = decompose_metric(Matrix.diag([2, 1, 1]))
        assert vol.exact is None and vol.v2 == 2
        assert abs(abs(rep.r.det()) - 1) < 1e-12

    def test_degenerate(self):
        with pytest.raises(DegenerateError):
            decompose_metric(Matrix.from_rows([[1, 1], [1, 1]]))


class TestRecompose:
    def test_round_trip_example(self):
        g = recompose_metric(Matrix.diag([-2, F(1, 2)]), VolumeDensityValue.from_value(2))
        assert g == Matrix.diag([-4, 1])

    def test_eta(self):
        assert recompose_metric(eta(2, 1), VolumeDensityValue.from_value(1)) == eta(2, 1)

    def test_representative_independence(self):
        g = recompose_metric(Matrix.diag([-6, F(3, 2)]), VolumeDensityValue.from_value(2))
        assert g == Matrix.diag([-4, 1])

    @settings(max_examples=60, deadline=None)
    @given(st.integers(1, 5), st.data())
    def test_round_trip(self, n, data):
        q = data.draw(st.integers(0, n))
        rng = sampling.random.Random(data.draw(st.integers(0, 10**6)))
        g = sampling.metric(rng, n, q)
        rep, vol = decompose_metric(g)
        back = recompose_metric(rep, vol)
        assert max_rel_error(back, g) <= 1e-12
        if rep.r.is_exact:
            assert back == g
        assert max_rel_error(recompose_metric(rep.rescaled(F(7, 3)), vol), g) <= 1e-12
        # a bare float representative has rounded entries, so its class is only
        # approximately that of g; the error grows with the conditioning of g
        assert max_rel_error(recompose_metric(rep.r, vol), g) <= 1e-9
        assert metric_signature(g) == (q, n - q)

    @settings(max_examples=40, deadline=None)
    @given(st.integers(1, 4), st.data())
    def test_rescaling_invariance(self, n, data):
        g = data.draw(S.symmetric(n).filter(lambda m: m.det() != 0))
        lam = data.draw(S.rationals(5, 4).filter(lambda x: x > 0))
        v = VolumeDensityValue.from_square(data.draw(S.rationals(5, 4).filter(lambda x: x > 0)))
        a, b = recompose_metric(g, v), recompose_metric(g.scale(lam), v)
        assert max_rel_error(b, a) <= 1e-12
        assert conformal_equivalent(g, a) is not None


class TestConformalRep:
    def test_rescaled_same_class(self):
        rep, _ = decompose_metric(Matrix.diag([2, 1, 1]))
        assert rep.rescaled(3).base == rep.base
        assert conformal_equivalent(rep.r, rep.rescaled(3).r) == pytest.approx(3, rel=1e-12)

    def test_rejects_degenerate(self):
        with pytest.raises(DegenerateError):
            ConformalRep(Matrix.diag([1, 0]))

    def test_rejects_nonpositive_scale(self):
        with pytest.raises(GStructError):
            ConformalRep(Matrix.identity(2), -1)


class TestConformal:
    def test_multiple(self, rng):
        g = sampling.metric(rng, 3, 1)
        assert conformal_equivalent(g, g.scale(5)) == 5

    def test_signature_mismatch(self):
        assert conformal_equivalent(Matrix.diag([-1, 1]), Matrix.identity(2)) is None

    def test_example(self):
        assert conformal_equivalent(Matrix.diag([-2, F(1, 2)]), Matrix.diag([-4, 1])) == 2

    def test_negative_factor(self):
        assert conformal_equivalent(eta(2, 1), -eta(2, 1)) is None


class TestEquivariantValue:
    def test_unit(self):
        assert volume_equivariant_value(VolumeDensityValue.from_value(1), Matrix.identity(3)) == 1

    def test_density(self):
        assert volume_equivariant_value(VolumeDensityValue.from_value(16), Matrix.identity(2)) == F(1, 4)

    def test_law_example(self):
        vol = VolumeDensityValue.from_value(1)
        l, a = Matrix.identity(2).scale(2), Matrix.diag([1, 4])
        lhs = volume_equivariant_value(vol, l @ a)
        assert lhs == F(1, 4)
        assert lhs == F(1, 2) * volume_equivariant_value(vol, l)

    def test_law_random(self, rng):
        for _ in range(50):
            n = rng.randint(1, 5)
            vol = VolumeDensityValue.from_square(sampling.positive_rational(rng, 9, 4))
            l, a = sampling.invertible(rng, n), sampling.invertible(rng, n)
            lhs = volume_equivariant_value(vol, l @ a)
            rhs = float(abs(a.det())) ** (-1 / n) * float(volume_equivariant_value(vol, l))
            assert float(lhs) == pytest.approx(rhs, rel=1e-12)


def test_factorization_mechanism(rng):
    for _ in range(30):
        n = rng.randint(1, 4)
        q = rng.randint(0, n)
        a = sampling.invertible(rng, n)
        s, c = factor_sl_co(a, q)
        assert abs(float(abs(s.det())) - 1) <= 1e-12
        if c.is_exact:
            assert subgroup_member(c, SubgroupTag("CO", n, q)).member
        else:
            assert c == Matrix.identity(n).scale(c[0, 0]) and c[0, 0] > 0
