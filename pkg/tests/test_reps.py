import pytest

from uqso import branch, pbw, reps, weights
from uqso.linalg import DimensionMismatch, Matrix
from uqso.reps import AutomorphismG, InvalidParameter, InvalidSubset
from uqso.scalar import I, HalfInt, Scalar, q_number, q_plus_number
from _scope import SIGNS2, SIGNS3, all_so3, all_so4, so4_classical_params, so4_nonclassical_params

H = HalfInt


def relations_hold(rep):
    return branch.verify_defining_relations(rep).passed


def entrywise(m, f):
    """Apply ``f(row, col, value)`` to every nonzero entry of ``m``."""
    return Matrix.from_entries(m.rows, m.cols, {(i, j): f(i, j, v) for (i, j), v in m.nonzero_items()})


# -- oracles: the defining relations, computed independently --------------------

def trilinear_residuals(a, b, q):
    two = q + 1 / q
    yield a @ a @ b - (a @ b @ a).scale(two) + b @ a @ a + b
    yield a @ b @ b - (b @ a @ b).scale(two) + b @ b @ a + a


def test_so3_families_satisfy_trilinear_relations(param):
    for rep in all_so3(param):
        a, b = rep.mats
        assert all(r.is_zero() for r in trilinear_residuals(a, b, Scalar(param.q))), rep.params


def test_so4_families_satisfy_all_relations(param):
    for rep in all_so4(param):
        a, b, c = rep.mats
        q = Scalar(param.q)
        assert all(r.is_zero() for r in trilinear_residuals(a, b, q))
        assert all(r.is_zero() for r in trilinear_residuals(b, c, q))
        assert (a @ c - c @ a).is_zero()


# -- so_3 ------------------------------------------------------------------------

def test_spin_zero_is_the_zero_representation(param):
    rep = reps.classical_so3(0, param)
    assert rep.dim == 1 and all(m.is_zero() for m in rep.mats)


def test_spin_half_diagonal(param):
    rep = reps.classical_so3(H(1), param)
    h = q_number(H(1), param)
    assert rep.simple(2) == Matrix.diagonal([-I * h, I * h])


def test_spin_one_relations_at_every_p(param):
    assert relations_hold(reps.classical_so3(1, param))


@pytest.mark.parametrize("e1,e2", SIGNS2)
def test_one_dimensional_nonclassical(param, e1, e2):
    rep = reps.nonclassical_so3(1, e1, e2, param)
    assert rep.simple(2)[0, 0] == e1 * q_plus_number(H(1), param)
    assert rep.simple(3)[0, 0] == e2 * q_number(1, param) / Scalar(param.p - 1 / param.p)


def test_exactly_four_one_dimensional_nonclassical(param):
    reps_1 = [reps.nonclassical_so3(1, e1, e2, param) for e1, e2 in SIGNS2]
    pairs = {(r.simple(2)[0, 0], r.simple(3)[0, 0]) for r in reps_1}
    assert len(pairs) == 4


@pytest.mark.parametrize("size", [1, 2, 3, 5])
@pytest.mark.parametrize("e1,e2", SIGNS2)
def test_nonclassical_trace(param, size, e1, e2):
    rep = reps.nonclassical_so3(size, e1, e2, param)
    want = e1 * sum((q_plus_number(H(2 * k - 1), param) for k in range(1, size + 1)), Scalar())
    assert rep.simple(2).trace() == want != 0


def test_nonclassical_size_two(param):
    assert relations_hold(reps.nonclassical_so3(2, 1, -1, param))


def test_minus_i_variant_of_nonclassical_so3_fails(param):
    for size in (2, 3, 4):
        rep = reps.nonclassical_so3(size, 1, 1, param)
        flipped = entrywise(rep.simple(3), lambda i, j, v: -v if i < j else v)
        assert not relations_hold(rep.with_mats((rep.simple(2), flipped)))


# -- so_4 ------------------------------------------------------------------------

def test_so4_trivial(param):
    rep = reps.classical_so4(0, 0, param)
    assert rep.dim == 1 and all(m.is_zero() for m in rep.mats)


def test_so4_one_zero_spectrum(param):
    rep = reps.classical_so4(1, 0, param)
    diag = sorted((rep.simple(2)[i, i].im for i in range(rep.dim)))
    assert diag == sorted([-q_number(1, param).re, 0, 0, q_number(1, param).re])


def test_so4_one_one_includes_mixed_relation(param):
    report = branch.verify_defining_relations(reps.classical_so4(1, 1, param))
    ids = [c["id"] for c in report.checks]
    assert "so4:[I42,I31]=(q-1/q)(I21I43-I32I41)" in ids
    assert report.passed


def test_nonclassical_so4_smallest(param):
    rep = reps.nonclassical_so4(H(1), H(1), 1, 1, 1, param)
    assert rep.dim == 1
    assert relations_hold(rep)


def test_nonclassical_so4_spectrum_is_plus_numbers(param):
    plus = {q_plus_number(H(t), param) for t in range(1, 12, 2)}
    for rep in reps.nonclassical_so4(H(3), H(1), *SIGNS3[5], param), reps.nonclassical_so4(H(5), H(3), 1, 1, 1, param):
        for i in range(rep.dim):
            v = rep.simple(2)[i, i]
            assert v.is_real and abs(v.re) in plus


def test_documented_nonclassical_so4_instances(param):
    assert relations_hold(reps.nonclassical_so4(H(3), H(1), 1, 1, 1, param))
    assert relations_hold(reps.nonclassical_so4(H(3), H(1), -1, 1, -1, param))


def test_boundary_term_with_factor_i_fails(param):
    # j' = 1 is integral, so the reflected term sits on the k = 1/2 row alone
    rep = reps.nonclassical_so4(H(5), H(1), 1, 1, 1, param)
    ix = {lab: n for n, lab in enumerate(rep.labels)}
    half = H(1)
    reflected = {(ix[(half, -l)], ix[(half, l)]) for k, l in rep.labels if k == half}
    bad = entrywise(rep.simple(3), lambda i, j, v: I * v if (i, j) in reflected else v)
    assert bad != rep.simple(3)
    assert not relations_hold(rep.with_mats((rep.simple(2), bad, rep.simple(4))))


def test_dimensions(param):
    for rep in all_so3(param) + all_so4(param):
        assert rep.dim == reps.dim_formula(rep)
    for r, s in so4_classical_params():
        j, jp = (r + s).twice // 2, (r - s).twice // 2  # doubled j and j'
        assert reps.classical_so4(r, s, param).dim == (j + 1) * (jp + 1)
    for r, s in so4_nonclassical_params():
        j, jp = (r + s).twice // 2, (r - s).twice // 2
        assert reps.nonclassical_so4(r, s, 1, 1, 1, param).dim == (j + 1) * (jp + 1) // 2


def test_invalid_parameters(param):
    for bad in (lambda: reps.classical_so3(-1, param),
                lambda: reps.nonclassical_so3(0, 1, 1, param),
                lambda: reps.nonclassical_so3(2, 2, 1, param),
                lambda: reps.classical_so4(1, H(1), param),
                lambda: reps.classical_so4(1, 2, param),
                lambda: reps.nonclassical_so4(2, 0, 1, 1, 1, param),
                lambda: reps.nonclassical_so4(H(1), H(3), 1, 1, 1, param)):
        with pytest.raises(InvalidParameter):
            bad()


def test_irreducible(param):
    sample = all_so3(param)[:4] + all_so3(param)[7:12] + all_so4(param)[:6]
    for rep in sample:
        assert reps.commutant_dimension(rep) == 1


def test_direct_sum_is_reducible(param):
    a = reps.classical_so3(1, param)
    b = reps.nonclassical_so3(1, 1, 1, param)
    blocks = []
    for x, y in zip(a.mats, b.mats):
        e = dict(x.nonzero_items())
        e.update({(i + a.dim, j + a.dim): v for (i, j), v in y.nonzero_items()})
        blocks.append(Matrix.from_entries(a.dim + b.dim, a.dim + b.dim, e))
    s = a.with_mats(blocks)
    assert relations_hold(s) and reps.commutant_dimension(s) == 2


# -- automorphisms and derived representations ---------------------------------

@pytest.mark.parametrize("n", [3, 4, 5])
def test_group_order(n):
    group = AutomorphismG.group(n)
    assert len(group) == 2 ** (n - 1) == len(set(group))
    e = AutomorphismG.identity(n)
    assert all(g * g == e and g * e == g for g in group)


def test_twist_by_identity(param):
    rep = reps.classical_so4(1, 1, param)
    assert reps.twist(rep, AutomorphismG.identity(4)).mats == rep.mats


def test_twist_is_a_representation(param):
    for rep in all_so3(param)[::5] + all_so4(param)[::9]:
        for g in AutomorphismG.group(rep.n):
            t = reps.twist(rep, g)
            assert relations_hold(t)
            assert t.simple(2).trace() == rep.simple(2).trace() * g.eps[0]


def test_twist_keeps_nonclassical_type(param):
    rep = reps.nonclassical_so4(H(3), H(1), 1, -1, 1, param)
    for g in AutomorphismG.group(4):
        assert weights.classify_type(reps.twist(rep, g)) == weights.NONCLASSICAL


def test_twist_rejects_wrong_rank(param):
    with pytest.raises(ValueError):
        reps.twist(reps.classical_so3(1, param), AutomorphismG.identity(4))


def test_restrict_to_so3(param):
    res = reps.restrict(reps.classical_so4(1, 0, param), (2, 3))
    assert res.n == 3 and relations_hold(res)
    upper = reps.restrict(reps.classical_so4(2, 1, param), (3, 4))
    assert upper.n == 3 and relations_hold(upper)
    with pytest.raises(InvalidSubset):
        reps.restrict(reps.classical_so4(1, 0, param), (2, 4))


def test_image_of_composite_generator(param):
    for rep in all_so3(param)[:5]:
        m21, m32 = rep.mats
        want = (m21 @ m32).scale(param.p) - (m32 @ m21).scale(1 / param.p)
        assert reps.image_of(rep, pbw.generator(3, param, 3, 1)) == want == rep.generator_image(3, 1)


def test_image_of_unit_and_wrong_rank(param):
    rep = reps.classical_so3(H(3), param)
    assert reps.image_of(rep, pbw.AlgebraElement.one(3, param)) == Matrix.identity(rep.dim)
    with pytest.raises(DimensionMismatch):
        reps.image_of(rep, pbw.AlgebraElement.one(4, param))


def test_constructor_checks_its_output(param):
    # a hand-made pair of matrices that is not a representation
    rep = reps.classical_so3(1, param)
    broken = rep.with_mats((rep.simple(2), rep.simple(3).scale(2)))
    with pytest.raises(reps.RelationCheckFailed):
        reps._checked(broken)


def test_json_has_exact_entries(param):
    data = reps.nonclassical_so3(2, 1, -1, param).to_json()
    assert data["family"] == "so3-nonclassical"
    assert data["params"]["eps"] == ["1", "-1"]
