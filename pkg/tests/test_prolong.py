from fractions import Fraction as F

import pytest

from oracles import count_multisets, sympy_rank
from gstruct import sampling
from gstruct.jets import SubgroupTag
from gstruct.linalg import GStructError, Matrix, intersection_dim
from gstruct.prolong import (
    LieSubalgebra,
    algebra_for_tag,
    builtin_algebra,
    co1_formula_basis,
    finite_type_order,
    first_prolongation,
    kth_prolongation,
    projective_subspace,
    semidirect_closure_check,
)
from gstruct.tensors import Sym2Tensor

SIGNATURES = [(q, n) for n in range(1, 7) for q in range(n + 1)]


class TestBuiltins:
    def test_o11(self):
        g = builtin_algebra("o", 2, 1)
        assert g.dim == 1
        assert g.basis[0] == Matrix.from_rows([[0, 1], [1, 0]])

    def test_co11(self):
        assert builtin_algebra("co", 2, 1).dim == 2

    def test_sl2(self):
        assert builtin_algebra("sl", 2).dim == 3

    @pytest.mark.parametrize("q,n", [(q, n) for n in range(1, 6) for q in range(n + 1)])
    def test_dimensions(self, q, n):
        assert builtin_algebra("sl", n).dim == n * n - 1
        assert builtin_algebra("o", n, q).dim == n * (n - 1) // 2
        assert builtin_algebra("co", n, q).dim == n * (n - 1) // 2 + 1

    def test_other_algebras(self):
        assert builtin_algebra("gl", 3).dim == 9
        assert builtin_algebra("glw", 4).dim == 16 - 3
        assert builtin_algebra("glwc", 4, c=F(1, 3)).dim == 12
        assert builtin_algebra("csp", 4).dim == 11  # sp(4) plus scalars

    def test_glwc_alternative_coupling(self):
        # M_11 = 0 instead of M_11 = c tr M
        def coupling(n, c):
            row = [0] * (n * n)
            row[0] = 1
            return row

        g = builtin_algebra("glwc", 3, coupling=coupling)
        assert g.dim == 6 and all(m[0, 0] == 0 for m in g.basis)

    def test_csp_only_in_dim_4(self):
        with pytest.raises(GStructError):
            builtin_algebra("csp", 3)

    def test_unknown(self):
        with pytest.raises(GStructError):
            builtin_algebra("e8", 8)

    def test_custom_rejects_dependent_basis(self):
        m = Matrix.identity(2)
        with pytest.raises(GStructError):
            LieSubalgebra(2, (m, m.scale(2)))

    @pytest.mark.parametrize("name,n,q", [("gl", 3, 0), ("sl", 4, 0), ("o", 4, 1), ("co", 5, 2), ("glw", 4, 0), ("glwc", 4, 0), ("csp", 4, 0)])
    def test_closed(self, name, n, q):
        assert builtin_algebra(name, n, q, c=F(2, 5)).is_closed()

    def test_non_closed_custom(self):
        e12 = Matrix.from_rows([[0, 1], [0, 0]])
        e21 = Matrix.from_rows([[0, 0], [1, 0]])
        assert not LieSubalgebra(2, (e12, e21)).is_closed()


class TestFirstProlongation:
    @pytest.mark.parametrize("q,n", SIGNATURES)
    def test_orthogonal_vanishes(self, q, n):
        assert first_prolongation(builtin_algebra("o", n, q)).dim == 0

    def test_co13(self):
        assert first_prolongation(builtin_algebra("co", 4, 1)).dim == 4

    def test_sl2(self):
        # 2 * 3 packed unknowns, 2 independent trace conditions
        assert first_prolongation(builtin_algebra("sl", 2)).dim == 6 - 2

    @pytest.mark.parametrize("n", [1, 2, 3, 4])
    def test_gl_is_everything(self, n):
        assert first_prolongation(builtin_algebra("gl", n)).dim == n * count_multisets(n, 2)

    @pytest.mark.parametrize("n", [2, 3, 4, 5])
    def test_sl_trace_condition(self, n):
        g1 = first_prolongation(builtin_algebra("sl", n))
        assert g1.dim == n * n * (n + 1) // 2 - n
        for s in g1.tensors():
            assert s.trace_form() == [0] * n

    def test_slices_lie_in_algebra(self):
        g = builtin_algebra("co", 3, 1)
        for s in first_prolongation(g).tensors():
            for j in range(3):
                assert g.contains(s.slice(j))


class TestHigherProlongation:
    def test_co13_second_vanishes(self):
        assert kth_prolongation(builtin_algebra("co", 4, 1), 2).dim == 0

    def test_o11_second_vanishes(self):
        assert kth_prolongation(builtin_algebra("o", 2, 1), 2).dim == 0

    def test_gl2_second(self):
        assert kth_prolongation(builtin_algebra("gl", 2), 2).dim == 2 * count_multisets(2, 3) == 8

    def test_degree_one_agrees(self):
        g = builtin_algebra("sl", 3)
        assert kth_prolongation(g, 1) == first_prolongation(g)

    @pytest.mark.parametrize("name,n,q", [("o", 3, 1), ("co", 3, 0), ("co", 4, 2), ("glw", 3, 0)])
    def test_monotone_vanishing(self, name, n, q):
        g = builtin_algebra(name, n, q)
        dims = [kth_prolongation(g, k).dim for k in range(1, 4)]
        for a, b in zip(dims, dims[1:]):
            assert not (a == 0 and b != 0)

    def test_bad_degree(self):
        with pytest.raises(GStructError):
            kth_prolongation(builtin_algebra("gl", 2), 0)


class TestFiniteType:
    def test_o13(self):
        r = finite_type_order(builtin_algebra("o", 4, 1))
        assert r.dims == (0,) and r.verdict == "finite-type-1"

    def test_co13(self):
        r = finite_type_order(builtin_algebra("co", 4, 1))
        assert r.dims == (4, 0) and r.verdict == "finite-type-2"

    def test_sl3_lower_bound(self):
        r = finite_type_order(builtin_algebra("sl", 3), k_max=3)
        assert r.verdict == "type>3" and len(r.dims) == 3 and all(r.dims)

    @pytest.mark.parametrize("name", ["glw", "glwc", "csp"])
    def test_remaining_admissible_algebras_are_infinite(self, name):
        # each contains a rank-one endomorphism, so prolongations never vanish
        assert finite_type_order(builtin_algebra(name, 4), 3).finite_type is None


class TestFormulaBases:
    def test_co1_example(self):
        s = Sym2Tensor(2, co1_formula_basis(1, 1).basis[0])
        assert s == Sym2Tensor.from_components(2, {(0, 0, 0): 1, (0, 1, 1): 1, (1, 0, 1): 1})

    def test_projective_example(self):
        s = Sym2Tensor(2, projective_subspace(2).basis[0])
        assert s == Sym2Tensor.from_components(2, {(0, 0, 0): 2, (1, 0, 1): 1})
        assert s(1, 1, 0) == 1

    @pytest.mark.parametrize("n", [2, 3, 5, 7])
    def test_projective_dim(self, n):
        assert projective_subspace(n).dim == n == sympy_rank(projective_subspace(n).basis)

    @pytest.mark.parametrize("q,n", [(q, n) for n in range(2, 6) for q in range(n + 1)])
    def test_co1_nullspace_equals_formula(self, q, n):
        computed = first_prolongation(builtin_algebra("co", n, q))
        formula = co1_formula_basis(q, n - q)
        assert computed.dim == formula.dim == n
        assert computed.same_span(formula)
        # independent route: ranks via sympy
        assert sympy_rank(list(computed.basis) + list(formula.basis)) == n

    @pytest.mark.parametrize("q,n", [(q, n) for n in range(2, 6) for q in range(n + 1)])
    def test_projective_meets_co1_trivially(self, q, n):
        p = projective_subspace(n).basis
        c = co1_formula_basis(q, n - q).basis
        assert intersection_dim(p, c) == 0
        assert sympy_rank(list(p) + list(c)) == 2 * n


class TestClosure:
    def test_co11_boost(self):
        boost = Matrix.from_rows([["5/4", "3/4"], ["3/4", "5/4"]])
        tag = SubgroupTag("CO", 2, 1)
        assert semidirect_closure_check(tag, co1_formula_basis(1, 1), [boost]).ok

    def test_identity_fixes(self):
        g1 = co1_formula_basis(1, 1)
        r = semidirect_closure_check(SubgroupTag("CO", 2, 1), g1, [Matrix.identity(2)])
        assert r.ok and r.checked == 2

    def test_orthogonal_vacuous(self, rng):
        tag = SubgroupTag("O", 2, 1)
        g1 = first_prolongation(builtin_algebra("o", 2, 1))
        r = semidirect_closure_check(tag, g1, [sampling.group_member(rng, tag)])
        assert r.ok and r.checked == 0

    def test_non_member_flagged(self):
        tag = SubgroupTag("CO", 2, 1)
        r = semidirect_closure_check(tag, co1_formula_basis(1, 1), [Matrix.diag([1, 2])])
        assert not r.ok and r.failures == ((0, -1),)

    def test_wrong_group_breaks_closure(self, rng):
        # co_1 is not stable under a generic GL element
        tag = SubgroupTag("GL", 3)
        r = semidirect_closure_check(tag, co1_formula_basis(1, 2), [sampling.invertible(rng, 3) for _ in range(3)])
        assert not r.ok

    @pytest.mark.parametrize("tag", [SubgroupTag("CO", 3, 1), SubgroupTag("CO", 4, 0), SubgroupTag("SLpm", 3)])
    def test_sampled(self, rng, tag):
        g1 = first_prolongation(algebra_for_tag(tag))
        samples = [sampling.group_member(rng, tag) for _ in range(4)]
        assert semidirect_closure_check(tag, g1, samples).ok
