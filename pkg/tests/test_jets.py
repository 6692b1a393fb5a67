from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import strategies as S
from oracles import dense_transport
from gstruct import sampling
from gstruct.jets import (
    Jet2,
    SubgroupTag,
    factor_sl_co,
    jet2_inv,
    jet2_mul,
    sl_co_intersection_check,
    subgroup_member,
    sym2_transport,
)
from gstruct.linalg import DegenerateError, GStructError, Matrix, exact_root
from gstruct.tensors import Sym2Tensor

BOOST = Matrix.from_rows([["5/4", "3/4"], ["3/4", "5/4"]])


def s111(n=2, v=1):
    return Sym2Tensor.from_components(n, {(0, 0, 0): v})


class TestTransport:
    def test_identity(self, rng):
        s = sampling.sym2(rng, 3)
        assert sym2_transport(Matrix.identity(3), s) == s

    def test_scalar(self):
        out = sym2_transport(Matrix.identity(2).scale(2), s111())
        assert out == s111(v=2)

    def test_diagonal(self):
        s = Sym2Tensor.from_components(2, {(0, 1, 1): 1})
        out = sym2_transport(Matrix.diag([1, 3]), s)
        assert out == Sym2Tensor.from_components(2, {(0, 1, 1): 9})

    @settings(max_examples=25, deadline=None)
    @given(st.integers(1, 3), st.data())
    def test_matches_dense_oracle(self, n, data):
        b = data.draw(S.invertible(n, bound=3, den=2))
        s = data.draw(S.sym2(n, bound=3, den=2))
        expected = dense_transport(b.tolist(), s.dense(), n)
        assert sym2_transport(b, s).dense() == expected

    @settings(max_examples=40, deadline=None)
    @given(st.integers(1, 4), st.data())
    def test_right_action(self, n, data):
        b1 = data.draw(S.invertible(n, bound=3))
        b2 = data.draw(S.invertible(n, bound=3))
        s = data.draw(S.sym2(n))
        assert sym2_transport(b2, sym2_transport(b1, s)) == sym2_transport(b1 @ b2, s)


class TestJet2:
    def test_pure_quadratic_parts_add(self, rng):
        s, t = sampling.sym2(rng, 3), sampling.sym2(rng, 3)
        i = Matrix.identity(3)
        assert jet2_mul(Jet2(i, s), Jet2(i, t)) == Jet2(i, s + t)

    def test_product_example(self):
        x = Jet2(Matrix.identity(2), s111())
        y = Jet2(Matrix.identity(2).scale(2), Sym2Tensor.zeros(2))
        assert jet2_mul(x, y) == Jet2(Matrix.identity(2).scale(2), s111(v=2))

    def test_right_identity(self, rng):
        x = sampling.jet2(rng, 3)
        assert x * Jet2.identity(3) == x
        assert Jet2.identity(3) * x == x

    def test_inverse_examples(self):
        s = s111()
        assert jet2_inv(Jet2(Matrix.identity(2), s)) == Jet2(Matrix.identity(2), -s)
        two = Jet2(Matrix.identity(2).scale(2), Sym2Tensor.zeros(2))
        assert jet2_inv(two) == Jet2(Matrix.identity(2).scale(F(1, 2)), Sym2Tensor.zeros(2))

    def test_singular_linear_part_rejected(self):
        with pytest.raises(DegenerateError):
            Jet2(Matrix.zeros(2, 2), Sym2Tensor.zeros(2))

    @settings(max_examples=30, deadline=None)
    @given(st.integers(1, 3), st.data())
    def test_group_axioms(self, n, data):
        def jet():
            return Jet2(data.draw(S.invertible(n, bound=3)), data.draw(S.sym2(n, bound=3)))

        x, y, z = jet(), jet(), jet()
        e = Jet2.identity(n)
        assert (x * y) * z == x * (y * z)
        assert x * e == x == e * x
        assert x * x.inverse() == e == x.inverse() * x


class TestMembership:
    def test_identity_in_everything(self):
        i = Matrix.identity(2)
        for tag in ("SLpm", "O", "CO", "H"):
            v = subgroup_member(i, SubgroupTag(tag, 2, 1))
            assert v.member
        assert subgroup_member(i, SubgroupTag("CO", 2, 1)).certificate == 1
        assert subgroup_member(i, SubgroupTag("H", 2)).certificate == 1

    def test_rational_boost(self):
        assert subgroup_member(BOOST, SubgroupTag("O", 2, 1)).member

    def test_scaled_boost(self):
        a = BOOST.scale(2)
        co = subgroup_member(a, SubgroupTag("CO", 2, 1))
        assert co.member and co.certificate == 4
        assert not subgroup_member(a, SubgroupTag("O", 2, 1)).member
        assert not subgroup_member(a, SubgroupTag("SLpm", 2)).member
        assert abs(a.det()) == 4

    def test_negative_factor_is_not_conformal(self):
        # a^T eta a = -eta is an anti-isometry, not in CO
        swap = Matrix.from_rows([[0, 1], [1, 0]])
        assert not subgroup_member(swap, SubgroupTag("CO", 2, 1)).member

    def test_bad_signature(self):
        with pytest.raises(GStructError):
            SubgroupTag("O", 2, 3)

    def test_intersection_examples(self):
        assert sl_co_intersection_check(BOOST, 1)
        assert not sl_co_intersection_check(BOOST.scale(2), 1)
        assert sl_co_intersection_check(Matrix.identity(2), 1)

    def test_co_certificate_is_det_power(self, rng):
        for n, q in [(2, 1), (3, 0), (4, 1)]:
            for _ in range(10):
                a = sampling.group_member(rng, SubgroupTag("CO", n, q))
                k = subgroup_member(a, SubgroupTag("CO", n, q)).certificate
                # k^n = |det a|^2
                assert k**n == abs(a.det()) ** 2
                root = exact_root(abs(a.det()) ** 2, n)
                if root is not None:
                    assert k == root

    @pytest.mark.parametrize("tag", ["O", "CO", "SLpm", "H"])
    def test_samplers_produce_members(self, rng, tag):
        for n, q in [(2, 1), (3, 1), (4, 2)]:
            t = SubgroupTag(tag, n, q)
            for _ in range(5):
                assert subgroup_member(sampling.group_member(rng, t), t).member


class TestFactor:
    def test_scalar(self):
        s, c = factor_sl_co(Matrix.identity(2).scale(3), 1)
        assert s == Matrix.identity(2) and c == Matrix.identity(2).scale(3)

    def test_unimodular(self):
        s, c = factor_sl_co(BOOST, 1)
        assert s == BOOST and c == Matrix.identity(2)

    def test_diag(self):
        s, c = factor_sl_co(Matrix.diag([4, 1]), 0)
        assert c == Matrix.identity(2).scale(2)
        assert s == Matrix.diag([2, F(1, 2)])
        assert abs(s.det()) == 1

    def test_inexact_scale(self):
        a = Matrix.diag([2, 1])
        s, c = factor_sl_co(a, 0)
        assert abs(abs(s.det()) - 1) < 1e-12
        assert c[0, 0] == pytest.approx(2**0.5, rel=1e-15) and c[0, 0] == c[1, 1] and c[0, 1] == 0
        assert all(abs(float(x) - float(y)) < 1e-12 for x, y in zip((s @ c).entries, a.entries))
