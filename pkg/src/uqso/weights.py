"""Weights: joint eigenspaces of the commuting family T(I_21), T(I_43), ..."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations, product

from .linalg import Matrix, intersect_spaces, is_diagonal, nullspace
from .reps import Representation
from .scalar import (
    Classical,
    HalfInt,
    Nonclassical,
    Scalar,
    classify_eigenvalue,
)


class NotDiagonalizable(RuntimeError):
    pass


class UnclassifiedEigenvalue(RuntimeError):
    pass


class MixedTypes(RuntimeError):
    pass


class TypeMismatch(ValueError):
    pass


CLASSICAL = "classical"
NONCLASSICAL = "nonclassical"


@dataclass(frozen=True)
class Weight:
    labels: tuple

    @property
    def kind(self) -> str:
        kinds = {lab.kind for lab in self.labels}
        return kinds.pop() if len(kinds) == 1 else "mixed"

    @property
    def m(self) -> tuple:
        return tuple(lab.m for lab in self.labels)

    @property
    def signs(self) -> tuple:
        return tuple(getattr(lab, "sign", None) for lab in self.labels)

    def sort_key(self):
        return tuple(lab.sort_key() for lab in self.labels)

    def to_json(self) -> list:
        return [lab.to_json() for lab in self.labels]

    def __str__(self):
        if self.kind == NONCLASSICAL:
            return "(" + ", ".join(f"{'+' if s > 0 else '-'}{m}" for m, s in zip(self.m, self.signs)) + ")"
        return "(" + ", ".join(str(m) for m in self.m) + ")"


def weight_of(m, signs=None) -> Weight:
    """Build a weight from m-values (and signs for the nonclassical type)."""
    m = [HalfInt.of(x) for x in m]
    if signs is None:
        return Weight(tuple(Classical(x) for x in m))
    return Weight(tuple(Nonclassical(abs(x), s) for x, s in zip(m, signs)))


@dataclass(frozen=True)
class WeightDiagram:
    """Map from weights to exact eigenbases (columns of a matrix)."""

    n: int
    dim: int
    entries: tuple  # ((Weight, Matrix), ...) sorted by weight

    def as_dict(self) -> dict:
        return dict(self.entries)

    def multiplicity(self, w: Weight) -> int:
        basis = self.as_dict().get(w)
        return 0 if basis is None else basis.cols

    def weights(self) -> list:
        return [w for w, _ in self.entries]

    def basis(self, w: Weight) -> Matrix:
        return self.as_dict()[w]

    def total(self) -> int:
        return sum(b.cols for _, b in self.entries)

    def to_json(self) -> list:
        return [{"weight": w.to_json(), "multiplicity": b.cols} for w, b in self.entries]


def diagonal_family(rep: Representation) -> list[Matrix]:
    """``T(I_{2i,2i-1})`` for ``i = 1..floor(n/2)``."""
    return [rep.simple(2 * i) for i in range(1, rep.n // 2 + 1)]


def _candidates(bound: HalfInt, param):
    from .scalar import I, q_number, q_plus_number

    for t in range(-bound.twice, bound.twice + 1):
        yield I * q_number(HalfInt(t), param)
    for t in range(1, bound.twice + 1, 2):
        v = q_plus_number(HalfInt(t), param)
        yield v
        yield -v


def eigenspaces(m: Matrix, param, bound: HalfInt) -> list:
    """``[(label, basis)]`` for the eigenvalues of ``m`` of the two closed forms."""
    d = m.rows
    ident = Matrix.identity(d)
    if all(i == j for (i, j), _ in m.nonzero_items()):
        values = sorted({m[i, i] for i in range(d)}, key=str)
    else:
        values = list(_candidates(bound, param))
    found = []
    covered = 0
    for lam in values:
        ker = nullspace(m - ident.scale(lam))
        if ker.cols == 0:
            continue
        label = classify_eigenvalue(lam, bound, param)
        if label is None:
            raise UnclassifiedEigenvalue(f"eigenvalue {lam} is of neither closed form")
        found.append((label, ker, lam))
        covered += ker.cols
        if covered == d:
            break
    if covered < d:
        gen = ident
        for _, _, lam in found:
            step = m - ident.scale(lam)
            for _ in range(d):
                gen = gen @ step
        if nullspace(gen).cols == d:
            raise NotDiagonalizable(f"eigenvectors span {covered} of {d} dimensions")
        raise UnclassifiedEigenvalue("some eigenvalue is of neither closed form")
    return [(label, ker) for label, ker, _ in found]


def weight_decomposition(rep: Representation) -> WeightDiagram:
    """Simultaneous eigenspace decomposition of the diagonal family."""
    if rep.n < 3:
        raise ValueError("weights need n >= 3")
    hit = rep._cache.get("diagram")
    if hit is not None:
        return hit
    bound = HalfInt(4 * rep.dim)
    family = diagonal_family(rep)
    if all(is_diagonal(m) for m in family):
        diagram = _diagonal_decomposition(rep, family, bound)
        rep._cache["diagram"] = diagram
        return diagram
    spaces = [eigenspaces(m, rep.param, bound) for m in family]
    joint = [((), Matrix.identity(rep.dim))]
    for family in spaces:
        nxt = []
        for labels, basis in joint:
            for label, ker in family:
                both = intersect_spaces(basis, ker) if labels else ker
                if both.cols:
                    nxt.append((labels + (label,), both))
        joint = nxt
    entries = sorted(((Weight(labels), b) for labels, b in joint), key=lambda e: e[0].sort_key())
    diagram = WeightDiagram(rep.n, rep.dim, tuple(entries))
    if diagram.total() != rep.dim:
        raise NotDiagonalizable(f"joint eigenspaces span {diagram.total()} of {rep.dim}")
    rep._cache["diagram"] = diagram
    return diagram


def _diagonal_decomposition(rep, family, bound) -> WeightDiagram:
    """Joint eigenspaces of diagonal matrices are spanned by coordinate vectors."""
    labels = {}
    groups: dict = {}
    for i in range(rep.dim):
        key = []
        for m in family:
            lam = m[i, i]
            if lam not in labels:
                label = classify_eigenvalue(lam, bound, rep.param)
                if label is None:
                    raise UnclassifiedEigenvalue(f"eigenvalue {lam} is of neither closed form")
                labels[lam] = label
            key.append(labels[lam])
        groups.setdefault(Weight(tuple(key)), []).append(i)
    entries = []
    for w, idx in groups.items():
        basis = Matrix.from_entries(rep.dim, len(idx), {(i, c): Scalar(1) for c, i in enumerate(idx)})
        entries.append((w, basis))
    entries.sort(key=lambda e: e[0].sort_key())
    return WeightDiagram(rep.n, rep.dim, tuple(entries))


def classify_type(rep: Representation) -> str:
    """``"classical"`` or ``"nonclassical"``; every eigenvalue must agree."""
    kinds = {lab.kind for w in weight_decomposition(rep).weights() for lab in w.labels}
    if len(kinds) != 1:
        raise MixedTypes(f"eigenvalue types {sorted(kinds)} in one representation")
    return kinds.pop()


@dataclass(frozen=True)
class WeylElement:
    perm: tuple
    flips: tuple

    def act(self, w: Weight) -> Weight:
        labs = [w.labels[i] for i in self.perm]
        out = []
        for lab, f in zip(labs, self.flips):
            if not f:
                out.append(lab)
            elif isinstance(lab, Classical):
                out.append(Classical(-lab.m))
            else:
                out.append(Nonclassical(lab.m, -lab.sign))
        return Weight(tuple(out))

    def __str__(self):
        return f"perm={list(self.perm)} flips={[int(f) for f in self.flips]}"


def weyl_group(n: int) -> list[WeylElement]:
    """Coordinate permutations with sign flips (an even number of them when ``n`` is even)."""
    k = n // 2
    out = []
    for perm in permutations(range(k)):
        for flips in product((False, True), repeat=k):
            if n % 2 == 0 and sum(flips) % 2:
                continue
            out.append(WeylElement(perm, flips))
    return out


@dataclass(frozen=True)
class WeylReport:
    invariant: bool
    element: WeylElement | None = None
    weight: Weight | None = None

    def to_json(self) -> dict:
        if self.invariant:
            return {"status": "invariant"}
        return {"status": "not-invariant", "element": str(self.element), "weight": self.weight.to_json()}


def weyl_invariance_check(diagram: WeightDiagram, n: int) -> WeylReport:
    """Compare multiplicities along every Weyl orbit."""
    kinds = {w.kind for w in diagram.weights()}
    if len(kinds) > 1 or "mixed" in kinds:
        raise TypeMismatch("Weyl action needs a single eigenvalue type")
    mult = {w: b.cols for w, b in diagram.entries}
    for g in weyl_group(n):
        for w, c in mult.items():
            if mult.get(g.act(w), 0) != c:
                return WeylReport(False, g, w)
    return WeylReport(True)


def spectrum(rep: Representation, which: int) -> list:
    """Sorted eigenvalue labels of ``T(I_{2i,2i-1})`` with multiplicity, ``i = which``."""
    out = []
    for w, b in weight_decomposition(rep).entries:
        out.extend([w.labels[which - 1]] * b.cols)
    return sorted(out, key=lambda lab: lab.sort_key())


def eigenvalue(label, param) -> Scalar:
    return label.value(param)
