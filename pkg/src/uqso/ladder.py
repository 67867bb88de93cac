"""Weight-dependent raising and lowering operators.

Every so_4-type ladder operator is a four-term combination on the so_4
subalgebra spanned by ``I_{a+1,a}, I_{a+2,a+1}, I_{a+3,a+2}`` (``a`` odd).
Writing ``W41, W31, W42, W32`` for ``T(I_{a+3,a}), T(I_{a+2,a}),
T(I_{a+3,a+1}), T(I_{a+2,a+1})`` the operator is

    s * (W41 + x_b W31 + x_a W42 + x_a x_b W32)

where ``s`` is the sign of the leading term and ``x_a``, ``x_b`` depend on
the two weight coordinates.  The coefficient of ``W32`` is the product of the
other two, so its exponent is the full sum ``m_i + m_{i+1}`` (or difference).
The so_3-type operator at the end of an odd chain is ``W31 + x W32``.

Nonclassical operators carry the sign ``eps`` of each coordinate's
eigenvalue ``eps [m]_+``.
"""

from __future__ import annotations

from dataclasses import dataclass

from .linalg import Matrix, solve
from .pbw import casimir_so4_element
from .report import Report
from .reps import Representation, image_of
from .scalar import I, HalfInt, Scalar, q_number, q_plus_number
from .weights import CLASSICAL, NONCLASSICAL, Weight, classify_type, weight_decomposition, weight_of


class WeightNotInDiagram(KeyError):
    pass


class UnsupportedIndex(ValueError):
    pass


class ShiftViolation(RuntimeError):
    pass


class NoHighestWeight(RuntimeError):
    pass


class MultipleHighestWeights(RuntimeError):
    pass


class RelationViolation(RuntimeError):
    pass


RAISING = "raising"
LOWERING = "lowering"
HALF = HalfInt(1)


@dataclass(frozen=True)
class SimpleRootShift:
    i: int
    delta: tuple


def simple_root(n: int, i: int) -> SimpleRootShift:
    """``e_i - e_{i+1}`` for ``i < k``; ``e_k`` (odd ``n``) or ``e_{k-1} + e_k`` (even ``n``)."""
    k = n // 2
    if not 1 <= i <= k:
        raise UnsupportedIndex(f"no simple root {i} for so_{n}")
    delta = [0] * k
    if i < k:
        delta[i - 1], delta[i] = 1, -1
    elif n % 2:
        delta[k - 1] = 1
    else:
        if k < 2:
            raise UnsupportedIndex("so_2 has no ladder operators")
        delta[k - 2], delta[k - 1] = 1, 1
    return SimpleRootShift(i, tuple(delta))


@dataclass(frozen=True)
class LadderOperator:
    kind: str
    i: int
    at_weight: Weight
    mat: Matrix


def _mult(param, kind, eps, m, which):
    """Eigenvalue ratio attached to the move ``which`` on one coordinate."""
    q = lambda e: Scalar(param.qpow(e))
    if kind == CLASSICAL:
        return {
            "Aup": I * q(m + HALF),
            "Adown": -I * q(HALF - m),
            "Bup": -I * q(-m - HALF),
            "Bdown": I * q(m - HALF),
        }[which]
    return Scalar(eps) * {
        "Aup": q(m + HALF),
        "Adown": q(HALF - m),
        "Bup": q(-m - HALF),
        "Bdown": q(m - HALF),
    }[which]


def _four_term(rep, a, kind, ma, mb, ea, eb, keep_a, keep_b, lead):
    kill_a = "Adown" if keep_a == "up" else "Aup"
    kill_b = "Bdown" if keep_b == "up" else "Bup"
    xa = -_mult(rep.param, kind, ea, ma, kill_a)
    xb = -_mult(rep.param, kind, eb, mb, kill_b)
    g = rep.generator_image
    out = g(a + 3, a) + g(a + 2, a).scale(xb) + g(a + 3, a + 1).scale(xa) + g(a + 2, a + 1).scale(xa * xb)
    return out if lead > 0 else -out


def _three_term(rep, a, kind, m, e, keep):
    x = -_mult(rep.param, kind, e, m, "Adown" if keep == "up" else "Aup")
    return rep.generator_image(a + 2, a) + rep.generator_image(a + 2, a + 1).scale(x)


def ladder_matrix(rep: Representation, kind: str, m, signs, i: int, direction: str) -> Matrix:
    """Ladder matrix at raw coordinates ``m`` (need not be a weight of ``rep``)."""
    n = rep.n
    k = n // 2
    simple_root(n, i)
    up = direction == RAISING
    m = [HalfInt.of(x) for x in m]
    signs = signs or (None,) * k
    if i < k:
        a = 2 * i - 1
        return _four_term(rep, a, kind, m[i - 1], m[i], signs[i - 1], signs[i],
                          "up" if up else "down", "down" if up else "up", -1)
    if n % 2:
        a = 2 * k - 1
        return _three_term(rep, a, kind, m[k - 1], signs[k - 1], "up" if up else "down")
    a = 2 * k - 3
    return _four_term(rep, a, kind, m[k - 2], m[k - 1], signs[k - 2], signs[k - 1],
                      "up" if up else "down", "up" if up else "down", 1 if up else -1)


def _coords(w: Weight, kind):
    return list(w.m), (list(w.signs) if kind == NONCLASSICAL else None)


def ladder_operator(rep: Representation, w: Weight, i: int, kind: str) -> LadderOperator:
    diagram = weight_decomposition(rep)
    if diagram.multiplicity(w) == 0:
        raise WeightNotInDiagram(str(w))
    rtype = classify_type(rep)
    m, signs = _coords(w, rtype)
    return LadderOperator(kind, i, w, ladder_matrix(rep, rtype, m, signs, i, kind))


def shifted(w: Weight, n: int, i: int, direction: str) -> Weight:
    """The weight ``w +- alpha_i``; nonclassical coordinates are taken in absolute value."""
    delta = simple_root(n, i).delta
    sgn = 1 if direction == RAISING else -1
    m = [x + HalfInt(2 * sgn * d) for x, d in zip(w.m, delta)]
    if w.kind == NONCLASSICAL:
        return weight_of(m, w.signs)
    return weight_of(m)


@dataclass(frozen=True)
class ShiftReport:
    weight: Weight
    target: Weight
    i: int
    kind: str
    induced: Matrix | None  # coordinates of the images in the target eigenbasis

    def to_json(self) -> dict:
        return {
            "weight": self.weight.to_json(),
            "target": self.target.to_json(),
            "i": self.i,
            "kind": self.kind,
            "induced": None if self.induced is None else self.induced.to_json(),
        }


def ladder_shift_check(rep: Representation, w: Weight, i: int, kind: str) -> ShiftReport:
    """Check that the ladder operator maps the weight space of ``w`` into that of ``w +- alpha_i``."""
    op = ladder_operator(rep, w, i, kind)
    diagram = weight_decomposition(rep)
    src = diagram.basis(w)
    target = shifted(w, rep.n, i, kind)
    images = op.mat @ src
    if diagram.multiplicity(target) == 0:
        if not images.is_zero():
            raise ShiftViolation(f"{kind} {i} at {w} leaves the zero target {target}")
        return ShiftReport(w, target, i, kind, None)
    tb = diagram.basis(target)
    cols = []
    for j in range(images.cols):
        x = solve(tb, images.column_vector(j))
        if x is None:
            raise ShiftViolation(f"{kind} {i} at {w}: image of basis vector {j} escapes {target}")
        cols.append(x)
    return ShiftReport(w, target, i, kind, Matrix.hstack(cols))


def highest_weight_vectors(rep: Representation) -> list:
    """All ``(weight, kernel basis)`` annihilated by every raising operator."""
    from .linalg import nullspace

    diagram = weight_decomposition(rep)
    k = rep.n // 2
    out = []
    for w, basis in diagram.entries:
        stacked = [ladder_operator(rep, w, i, RAISING).mat @ basis for i in range(1, k + 1)]
        big = _vstack(stacked)
        ker = nullspace(big)
        if ker.cols:
            out.append((w, basis @ ker))
    return out


def highest_weight(rep: Representation):
    """The unique highest weight and its vector."""
    hit = rep._cache.get("highest")
    if hit is not None:
        return hit
    found = highest_weight_vectors(rep)
    if not found:
        raise NoHighestWeight(rep.family)
    if len(found) > 1 or found[0][1].cols != 1:
        raise MultipleHighestWeights([str(w) for w, _ in found])
    rep._cache["highest"] = found[0]
    return found[0]


def _vstack(blocks) -> Matrix:
    cols = blocks[0].cols
    entries = {}
    off = 0
    for b in blocks:
        for (i, j), v in b.nonzero_items():
            entries[(i + off, j)] = v
        off += b.rows
    return Matrix.from_entries(off, cols, entries)


# -- commutation relations -----------------------------------------------------

def casimir_rhs(rep, rtype, i, m, signs, c4):
    """Right-hand side factor of the ``[R, L]`` relation for an so_4-type root.

    ``[2l] {sigma (q - 1/q)^2 C4 - tau (q + 1/q)(q^{2l} + q^{-2l})}`` with the
    signs fixed by the leading terms of the operators and, for the
    nonclassical type, the product of the two coordinate signs.
    """
    n = rep.n
    k = n // 2
    P = rep.param
    q = Scalar(P.q)
    last = n % 2 == 0 and i == k
    if last:
        ma, mb = m[k - 2], m[k - 1]
        l2 = ma + mb
    else:
        ma, mb = m[i - 1], m[i]
        l2 = ma - mb
    l2 = HalfInt.of(l2)
    sigma = 1
    tau = -1 if last else 1
    if rtype == NONCLASSICAL:
        ea, eb = (signs[k - 2], signs[k - 1]) if last else (signs[i - 1], signs[i])
        sigma = ea * eb * (-1 if last else 1)
    t = q - 1 / q
    s = Scalar(P.qpow(l2) + P.qpow(-l2))
    return q_number(l2, P) * (c4.scale(sigma * t * t) - Matrix.identity(c4.rows).scale(tau * (q + 1 / q) * s))


def last_root_rhs(rep, rtype, m_last):
    """``kappa q [m]_q [m]_+ (q - 1/q)`` with ``kappa = -1`` (classical) or ``+1``."""
    P = rep.param
    q = Scalar(P.q)
    kappa = -1 if rtype == CLASSICAL else 1
    return q * q_number(m_last, P) * q_plus_number(m_last, P) * (q - 1 / q) * kappa


def _shift_raw(m, delta, sgn):
    return [x + HalfInt(2 * sgn * d) for x, d in zip(m, delta)]


def verify_ladder_commutation(rep: Representation) -> Report:
    """Exact ``[R, L]`` relations at every weight vector."""
    n = rep.n
    k = n // 2
    rtype = classify_type(rep)
    diagram = weight_decomposition(rep)
    report = Report(f"ladder commutation so_{n}")
    lm = lambda m, signs, i, d: ladder_matrix(rep, rtype, m, signs, i, d)
    casimirs = {}
    for i in range(1, k + 1):
        if n % 2 == 0 or i < k:
            ci = k - 1 if (n % 2 == 0 and i == k) else i
            casimirs[i] = image_of(rep, casimir_so4_element(ci, n, rep.param))
    for i in range(1, k + 1):
        di = simple_root(n, i).delta
        for j in range(1, k + 1):
            dj = simple_root(n, j).delta
            if i == j:
                eq = "last-root" if (n % 2 and i == k) else "casimir"
            else:
                eq = "cross"
            cid = f"{eq}[i={i}]" if i == j else f"{eq}[i={i},j={j}]"
            witness = None
            for w, basis in diagram.entries:
                m, signs = _coords(w, rtype)
                lhs_op = (lm(_shift_raw(m, dj, -1), signs, i, RAISING) @ lm(m, signs, j, LOWERING)
                          - lm(_shift_raw(m, di, 1), signs, j, LOWERING) @ lm(m, signs, i, RAISING))
                if eq == "cross":
                    rhs_op = Matrix.zeros(rep.dim)
                elif eq == "last-root":
                    rhs_op = Matrix.identity(rep.dim).scale(last_root_rhs(rep, rtype, m[k - 1]))
                else:
                    rhs_op = casimir_rhs(rep, rtype, i, m, signs, casimirs[i])
                diff = (lhs_op - rhs_op) @ basis
                if not diff.is_zero():
                    (r, c), v = diff.max_entry()
                    witness = {"weight": w.to_json(), "row": r, "vector": c, "residual": v.to_json()}
                    break
            report.add(cid, witness is None, witness)
    return report
