"""Explicit finite-dimensional representations of U'_q(so_3) and U'_q(so_4).

Every constructor runs the defining relations on its own output and raises
:class:`RelationCheckFailed` if they do not hold exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .linalg import DimensionMismatch, Matrix
from .pbw import AlgebraElement, decode
from .scalar import (
    I,
    DeformationParameter,
    HalfInt,
    Scalar,
    half_range,
    q_number,
    q_plus_number,
)


class InvalidParameter(ValueError):
    pass


class InvalidSubset(ValueError):
    pass


class RelationCheckFailed(RuntimeError):
    pass


@dataclass(frozen=True)
class AutomorphismG:
    """Sign flips ``I_{j,j-1} -> eps_j I_{j,j-1}``, stored as ``(eps_2, ..., eps_n)``."""

    eps: tuple

    def __post_init__(self):
        eps = tuple(int(e) for e in self.eps)
        if any(e not in (1, -1) for e in eps):
            raise ValueError("automorphism signs must be +1 or -1")
        object.__setattr__(self, "eps", eps)

    @property
    def n(self) -> int:
        return len(self.eps) + 1

    @classmethod
    def identity(cls, n: int) -> "AutomorphismG":
        return cls((1,) * (n - 1))

    def __mul__(self, other: "AutomorphismG") -> "AutomorphismG":
        if len(self.eps) != len(other.eps):
            raise ValueError("automorphisms over different n")
        return AutomorphismG(tuple(a * b for a, b in zip(self.eps, other.eps)))

    def is_identity(self) -> bool:
        return all(e == 1 for e in self.eps)

    @classmethod
    def group(cls, n: int) -> list["AutomorphismG"]:
        from itertools import product

        return [cls(e) for e in product((1, -1), repeat=n - 1)]

    def __str__(self):
        return "(" + ",".join("+" if e > 0 else "-" for e in self.eps) + ")"


@dataclass(frozen=True, eq=False)
class Representation:
    """Matrices ``mats[j-2] = T(I_{j,j-1})`` for ``j = 2..n``."""

    n: int
    family: str
    params: dict
    mats: tuple
    labels: tuple
    param: DeformationParameter
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        if len(self.mats) != self.n - 1:
            raise DimensionMismatch(f"need {self.n - 1} matrices, got {len(self.mats)}")
        d = self.dim
        for m in self.mats:
            if m.shape != (d, d):
                raise DimensionMismatch(f"matrix of shape {m.shape} in a {d}-dim representation")

    @property
    def dim(self) -> int:
        return self.mats[0].rows if self.mats else 1

    def simple(self, j: int) -> Matrix:
        """``T(I_{j,j-1})``."""
        return self.mats[j - 2]

    def generator_image(self, k: int, l: int, sign: str = "plus") -> Matrix:
        """``T(I+-_kl)`` following the recursive q-commutator definition."""
        if not 1 <= l < k <= self.n:
            raise DimensionMismatch(f"I_{k},{l} is not in U'_q(so_{self.n})")
        if k == l + 1:
            return self.simple(k)
        key = ("gen", k, l, sign)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        a = self.simple(l + 1)
        b = self.generator_image(k, l + 1, sign)
        p = self.param.p if sign == "plus" else 1 / self.param.p
        out = (a @ b).scale(p) - (b @ a).scale(1 / p)
        self._cache[key] = out
        return out

    def with_mats(self, mats: Sequence[Matrix], family: str = "custom", params: dict | None = None):
        return Representation(self.n, family, dict(params or {}), tuple(mats), self.labels, self.param)

    def descriptor(self) -> dict:
        return {"n": self.n, "family": self.family, "params": _json_params(self.params)}

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "family": self.family,
            "params": _json_params(self.params),
            "p": str(self.param),
            "dim": self.dim,
            "basis": [[str(x) for x in lab] for lab in self.labels],
            "matrices": {f"I{j}{j - 1}": self.simple(j).to_json() for j in range(2, self.n + 1)},
        }


def _json_params(params: dict) -> dict:
    out = {}
    for k, v in params.items():
        if isinstance(v, Representation):
            out[k] = v.descriptor()
        elif isinstance(v, AutomorphismG):
            out[k] = list(v.eps)
        elif isinstance(v, (tuple, list)):
            out[k] = [str(x) for x in v]
        else:
            out[k] = str(v) if isinstance(v, HalfInt) else v
    return out


def _sign(e) -> int:
    e = int(e)
    if e not in (1, -1):
        raise InvalidParameter(f"sign must be +1 or -1, got {e}")
    return e


def _parity(x: HalfInt) -> int:
    """``(-1)^x`` for integral ``x``."""
    return 1 if (x.twice // 2) % 2 == 0 else -1


def _index(labels) -> dict:
    return {lab: i for i, lab in enumerate(labels)}


def _checked(rep: Representation) -> Representation:
    from .branch import verify_defining_relations

    report = verify_defining_relations(rep)
    if not report.passed:
        raise RelationCheckFailed(f"{rep.family} {rep.params}: {report.failures()}")
    return rep


# -- so_3 ---------------------------------------------------------------------

def classical_so3(l, param: DeformationParameter, check: bool = True) -> Representation:
    """``T_l`` on ``|m>, m = -l..l``."""
    l = HalfInt.of(l)
    if l < 0:
        raise InvalidParameter("l must be nonnegative")
    ms = half_range(-l, l)
    ix = {m: i for i, m in enumerate(ms)}
    d = len(ms)
    a = Matrix.diagonal([I * q_number(m, param) for m in ms])
    entries = {}
    for m in ms:
        c = 1 / Scalar(param.qpow(m) + param.qpow(-m))
        if m + 1 in ix:
            entries[(ix[m + 1], ix[m])] = c * q_number(l - m, param)
        if m - 1 in ix:
            entries[(ix[m - 1], ix[m])] = -c * q_number(l + m, param)
    rep = Representation(3, "so3-classical", {"l": l}, (a, Matrix.from_entries(d, d, entries)),
                         tuple((m,) for m in ms), param)
    return _checked(rep) if check else rep


def nonclassical_so3(size: int, eps1, eps2, param: DeformationParameter, check: bool = True) -> Representation:
    """``T^{eps1,eps2}_size`` on ``|k>, k = 1..size``."""
    if not isinstance(size, int) or size < 1:
        raise InvalidParameter("size must be a positive integer")
    e1, e2 = _sign(eps1), _sign(eps2)
    half = HalfInt(1)
    a = Matrix.diagonal([e1 * q_plus_number(HalfInt(2 * k) - half, param) for k in range(1, size + 1)])
    entries = {}
    for k in range(1, size + 1):
        x = HalfInt(2 * k) - half
        c = 1 / Scalar(param.qpow(x) - param.qpow(-x))
        col = k - 1
        if k == 1:
            entries[(0, 0)] = c * e2 * q_number(size, param)
        else:
            entries[(k - 2, col)] = c * I * q_number(size + k - 1, param)
        if k < size:
            entries[(k, col)] = c * I * q_number(size - k, param)
    rep = Representation(3, "so3-nonclassical", {"size": size, "eps": (e1, e2)},
                         (a, Matrix.from_entries(size, size, entries)),
                         tuple((k,) for k in range(1, size + 1)), param)
    return _checked(rep) if check else rep


# -- so_4 ---------------------------------------------------------------------

def _jj(r, s):
    r, s = HalfInt.of(r), HalfInt.of(s)
    if (r.twice - s.twice) % 2:
        raise InvalidParameter("r and s must be both integral or both half-integral")
    return r, s, HalfInt((r.twice + s.twice) // 2), HalfInt((r.twice - s.twice) // 2)


def classical_so4(r, s, param: DeformationParameter, check: bool = True) -> Representation:
    """``T_{jj'}`` with ``j = (r+s)/2``, ``j' = (r-s)/2`` on ``|k,l>``."""
    r, s, j, jp = _jj(r, s)
    if r < abs(s):
        raise InvalidParameter("need r >= |s|")
    labels = [(k, l) for k in half_range(-j, j) for l in half_range(-jp, jp)]
    ix = _index(labels)
    d = len(labels)
    qn = lambda m: q_number(m, param)
    qs = lambda m: Scalar(param.qpow(m) + param.qpow(-m))
    a = Matrix.diagonal([I * qn(k + l) for k, l in labels])
    c = Matrix.diagonal([I * qn(k - l) for k, l in labels])
    entries = {}

    def put(target, src, val):
        if target in ix and val:
            entries[(ix[target], ix[src])] = val

    for k, l in labels:
        pre = 1 / (qs(k + l) * qs(k - l))
        put((k, l + 1), (k, l), -pre * qs(j - l) * qn(jp - l))
        put((k, l - 1), (k, l), pre * qs(j + l) * qn(jp + l))
        put((k + 1, l), (k, l), pre * qs(jp - k) * qn(j - k))
        put((k - 1, l), (k, l), -pre * qs(jp + k) * qn(j + k))
    rep = Representation(4, "so4-classical", {"r": r, "s": s},
                         (a, Matrix.from_entries(d, d, entries), c), tuple(labels), param)
    return _checked(rep) if check else rep


def nonclassical_so4(r, s, eps1, eps2, eps3, param: DeformationParameter, check: bool = True) -> Representation:
    """``T^{eps1,eps2,eps3}_{jj'}`` on the truncated basis ``|k,l>``.

    When ``j'`` is integral ``k`` runs over ``1/2..j``; otherwise ``l`` runs over
    ``1/2..j'``.  The boundary row reflects ``l -> -l`` (resp. ``k -> -k``)
    with the sign ``eps3 (-1)^l`` (resp. ``eps3 (-1)^k``).
    """
    r, s, j, jp = _jj(r, s)
    if r.is_integral or not (r >= s > 0):
        raise InvalidParameter("need half-integral r >= s > 0")
    e1, e2, e3 = _sign(eps1), _sign(eps2), _sign(eps3)
    half = HalfInt(1)
    if jp.is_integral:
        labels = [(k, l) for k in half_range(half, j) for l in half_range(-jp, jp)]
    else:
        labels = [(k, l) for k in half_range(-j, j) for l in half_range(half, jp)]
    ix = _index(labels)
    d = len(labels)
    qn = lambda m: q_number(m, param)
    a = Matrix.diagonal([e1 * q_plus_number(k + l, param) for k, l in labels])
    c = Matrix.diagonal([e2 * q_plus_number(k - l, param) for k, l in labels])
    t = Scalar(param.q - 1 / param.q)
    entries = {}

    def put(target, src, val):
        if val:
            key = (ix[target], ix[src])
            entries[key] = entries.get(key, Scalar()) + val

    for k, l in labels:
        pre = 1 / (qn(k + l) * qn(k - l) * t)
        put((k, l + 1), (k, l), -pre * I * qn(jp - l) * qn(j - l))
        if not jp.is_integral and l == half:
            put((-k, l), (k, l), pre * qn(jp + l) * qn(j + l) * (e3 * _parity(k)))
        else:
            put((k, l - 1), (k, l), pre * I * qn(jp + l) * qn(j + l))
        put((k + 1, l), (k, l), -pre * I * qn(jp - k) * qn(j - k))
        if jp.is_integral and k == half:
            put((k, -l), (k, l), pre * qn(jp + k) * qn(j + k) * (e3 * _parity(l)))
        else:
            put((k - 1, l), (k, l), pre * I * qn(jp + k) * qn(j + k))
    rep = Representation(4, "so4-nonclassical", {"r": r, "s": s, "eps": (e1, e2, e3)},
                         (a, Matrix.from_entries(d, d, entries), c), tuple(labels), param)
    return _checked(rep) if check else rep


# -- derived representations --------------------------------------------------

def twist(rep: Representation, g: AutomorphismG) -> Representation:
    """``T o g``: scale ``T(I_{j,j-1})`` by ``eps_j``."""
    if g.n != rep.n:
        raise ValueError(f"automorphism over n={g.n} applied to n={rep.n}")
    mats = tuple(m if e == 1 else -m for m, e in zip(rep.mats, g.eps))
    return Representation(rep.n, "twisted", {"parent": rep, "g": g}, mats, rep.labels, rep.param)


def restrict(rep: Representation, gens: Sequence[int]) -> Representation:
    """Restrict to the chain ``I_{j,j-1}, j in gens``, reindexed from ``I_21``.

    ``gens`` lists the ``j`` of a contiguous chain, e.g. ``(2, 3)`` for the
    so_3 subalgebra on ``I_21, I_32``.
    """
    gens = sorted(int(j) for j in gens)
    if not gens or any(b != a + 1 for a, b in zip(gens, gens[1:])) or gens[0] < 2 or gens[-1] > rep.n:
        raise InvalidSubset(f"{gens} is not a contiguous generator chain of so_{rep.n}")
    mats = tuple(rep.simple(j) for j in gens)
    return Representation(len(gens) + 1, "restricted", {"parent": rep, "gens": tuple(gens)},
                          mats, rep.labels, rep.param)


def image_of(rep: Representation, x: AlgebraElement) -> Matrix:
    """Substitute the representation matrices into ``x``."""
    if x.n != rep.n:
        raise DimensionMismatch(f"element of so_{x.n} evaluated in so_{rep.n}")
    d = rep.dim
    out = Matrix.zeros(d)
    words = rep._cache.setdefault("words", {(): Matrix.identity(d)})
    for w, c in x.terms.items():
        out = out + _word_image(rep, w, words).scale(c)
    return out


def _word_image(rep, w, memo) -> Matrix:
    hit = memo.get(w)
    if hit is None:
        k, l = decode(w[-1])
        hit = memo[w] = _word_image(rep, w[:-1], memo) @ rep.generator_image(k, l)
    return hit


def commutant_dimension(rep: Representation) -> int:
    """Dimension of ``{X : X T(a) = T(a) X}``; 1 for irreducible representations."""
    from .linalg import intertwiner_space

    return len(intertwiner_space(rep.mats, rep.mats))


def is_irreducible(rep: Representation) -> bool:
    return commutant_dimension(rep) == 1


def dim_formula(rep: Representation) -> int:
    """Dimension predicted by the family parameters."""
    f, ps = rep.family, rep.params
    if f == "so3-classical":
        return ps["l"].twice + 1
    if f == "so3-nonclassical":
        return ps["size"]
    if f == "so4-classical":
        _, _, j, jp = _jj(ps["r"], ps["s"])
        return (j.twice + 1) * (jp.twice + 1)
    if f == "so4-nonclassical":
        _, _, j, jp = _jj(ps["r"], ps["s"])
        return (j.twice + 1) * (jp.twice + 1) // 2
    return rep.dim


def base_family(rep: Representation) -> Representation:
    """Strip twists and restrictions down to the constructed representation."""
    while rep.family in ("twisted", "restricted"):
        rep = rep.params["parent"]
    return rep


FAMILIES = ("so3-classical", "so3-nonclassical", "so4-classical", "so4-nonclassical")


def build(family: str, param: DeformationParameter, **kw) -> Representation:
    """Construct a family member by name (used by the CLI)."""
    if family == "so3-classical":
        return classical_so3(kw["l"], param)
    if family == "so3-nonclassical":
        e = kw.get("eps", (1, 1))
        return nonclassical_so3(int(kw["size"]), e[0], e[1], param)
    if family == "so4-classical":
        return classical_so4(kw["r"], kw["s"], param)
    if family == "so4-nonclassical":
        e = kw.get("eps", (1, 1, 1))
        return nonclassical_so4(kw["r"], kw["s"], e[0], e[1], e[2], param)
    raise InvalidParameter(f"unknown family {family!r}")
