from collections import Counter

import pytest

from uqso import reps, weights
from uqso.linalg import Matrix, inverse
from uqso.reps import AutomorphismG
from uqso.scalar import Classical, HalfInt, Nonclassical, Scalar
from uqso.weights import CLASSICAL, NONCLASSICAL, weight_of
from _scope import SIGNS3, all_so3, all_so4

H = HalfInt


def conjugated(rep, seed=3):
    """``S T S^-1`` for a fixed dense invertible ``S``: no longer diagonal, still equivalent."""
    d = rep.dim
    s = Matrix.from_rows([[Scalar(1 if i <= j else (i * j + seed) % 5) for j in range(d)] for i in range(d)])
    si = inverse(s)
    return rep.with_mats([s @ m @ si for m in rep.mats], family=rep.family, params=rep.params)


# -- oracle: the general eigenspace path, forced by conjugation --------------------

def test_diagonal_fast_path_matches_general_path(param):
    for rep in all_so3(param)[:4] + all_so3(param)[7:10] + all_so4(param)[:5] + all_so4(param)[-3:]:
        fast = weights.weight_decomposition(rep)
        slow = weights.weight_decomposition(conjugated(rep))
        assert [(w, b.cols) for w, b in fast.entries] == [(w, b.cols) for w, b in slow.entries]


def test_eigenbasis_vectors_are_eigenvectors(param):
    rep = conjugated(reps.classical_so4(2, 1, param))
    d = weights.weight_decomposition(rep)
    for w, basis in d.entries:
        for i, lab in enumerate(w.labels, start=1):
            m = rep.simple(2 * i)
            assert m @ basis == basis.scale(lab.value(param))


# -- documented diagrams -----------------------------------------------------------

def test_spin_one_diagram(param):
    d = weights.weight_decomposition(reps.classical_so3(1, param))
    assert d.as_dict().keys() == {weight_of([m]) for m in (-1, 0, 1)}
    assert all(d.multiplicity(w) == 1 for w in d.weights())


def test_so4_one_zero_diagram(param):
    d = weights.weight_decomposition(reps.classical_so4(1, 0, param))
    assert set(d.weights()) == {weight_of(m) for m in [(1, 0), (0, 1), (0, -1), (-1, 0)]}
    assert d.total() == 4


def test_nonclassical_so3_diagram(param):
    for e2 in (1, -1):
        d = weights.weight_decomposition(reps.nonclassical_so3(2, 1, e2, param))
        assert set(d.weights()) == {weight_of([H(1)], [1]), weight_of([H(3)], [1])}


def test_so3_classical_weights_are_minus_l_to_l(param):
    for t in range(7):
        d = weights.weight_decomposition(reps.classical_so3(H(t), param))
        assert sorted(w.m[0].twice for w in d.weights()) == list(range(-t, t + 1, 2))


def test_so4_classical_multiset_is_symmetric(param):
    for rep in all_so4(param):
        if rep.family != "so4-classical":
            continue
        ms = Counter(w.m for w, b in weights.weight_decomposition(rep).entries for _ in range(b.cols))
        assert ms == Counter((b, a) for a, b in ms.elements())
        assert ms == Counter((-a, -b) for a, b in ms.elements())


# -- types ---------------------------------------------------------------------------

def test_types(param):
    for rep in all_so3(param) + all_so4(param):
        want = NONCLASSICAL if "nonclassical" in rep.family else CLASSICAL
        assert weights.classify_type(rep) == want


def test_twisted_nonclassical_so4_stays_nonclassical(param):
    rep = reps.nonclassical_so4(H(3), H(3), 1, 1, 1, param)
    for g in AutomorphismG.group(4):
        assert weights.classify_type(reps.twist(rep, g)) == NONCLASSICAL


def test_mixed_types_are_detected(param):
    # block sum of a classical and a nonclassical so_3 representation
    a, b = reps.classical_so3(H(1), param), reps.nonclassical_so3(1, 1, 1, param)
    mats = []
    for x, y in zip(a.mats, b.mats):
        e = dict(x.nonzero_items())
        e.update({(i + a.dim, j + a.dim): v for (i, j), v in y.nonzero_items()})
        mats.append(Matrix.from_entries(3, 3, e))
    with pytest.raises(weights.MixedTypes):
        weights.classify_type(a.with_mats(mats))


def test_unclassified_eigenvalue(param):
    rep = reps.classical_so3(0, param)
    odd = rep.with_mats([Matrix.diagonal([Scalar(7)]), rep.simple(3)])
    with pytest.raises(weights.UnclassifiedEigenvalue):
        weights.weight_decomposition(odd)


def test_not_diagonalizable(param):
    rep = reps.classical_so3(H(1), param)
    jordan = Matrix.from_rows([[Scalar(0), Scalar(1)], [Scalar(0), Scalar(0)]])
    with pytest.raises(weights.NotDiagonalizable):
        weights.weight_decomposition(rep.with_mats([jordan, rep.simple(3)]))


# -- Weyl symmetry -----------------------------------------------------------------

def test_weyl_group_orders():
    assert len(weights.weyl_group(3)) == 2
    assert len(weights.weyl_group(4)) == 4
    assert len(weights.weyl_group(5)) == 8


def test_classical_diagrams_are_invariant(param):
    for rep in all_so3(param)[:7] + [r for r in all_so4(param) if r.family == "so4-classical"]:
        assert weights.weyl_invariance_check(weights.weight_decomposition(rep), rep.n).invariant


def test_so4_one_one_invariant(param):
    d = weights.weight_decomposition(reps.classical_so4(1, 1, param))
    assert weights.weyl_invariance_check(d, 4).invariant


def test_nonclassical_so3_is_not_invariant(param):
    d = weights.weight_decomposition(reps.nonclassical_so3(2, 1, 1, param))
    report = weights.weyl_invariance_check(d, 3)
    assert not report.invariant
    assert report.weight in d.as_dict()
    assert d.multiplicity(report.element.act(report.weight)) != d.multiplicity(report.weight)


def test_nonclassical_so4_is_not_invariant(param):
    for e in SIGNS3:
        d = weights.weight_decomposition(reps.nonclassical_so4(H(3), H(1), *e, param))
        assert not weights.weyl_invariance_check(d, 4).invariant


def test_weyl_action_on_labels():
    g = weights.WeylElement((1, 0), (True, True))
    assert g.act(weight_of([1, 2])) == weight_of([-2, -1])
    flip = weights.WeylElement((0,), (True,))
    assert flip.act(weight_of([H(3)], [1])) == weights.Weight((Nonclassical(H(3), -1),))


def test_weight_json():
    assert weight_of([H(1)], [-1]).to_json() == [{"type": "nonclassical", "m": "1/2", "sign": -1}]
    assert weight_of([0]).labels == (Classical(H(0)),)


def test_type_mismatch_in_weyl_check(param):
    mixed = weights.WeightDiagram(3, 2, ((weight_of([0]), Matrix.identity(1)),
                                         (weight_of([H(1)], [1]), Matrix.identity(1))))
    with pytest.raises(weights.TypeMismatch):
        weights.weyl_invariance_check(mixed, 3)
