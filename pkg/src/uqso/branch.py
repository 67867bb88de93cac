"""Relation suites, so_4 -> so_3 branching, signatures and classification."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .linalg import Matrix, commutator, intertwiner_space, nullspace, solve
from .report import Report
from .reps import (
    AutomorphismG,
    Representation,
    classical_so3,
    nonclassical_so3,
    nonclassical_so4,
    restrict,
    twist,
)
from .scalar import HalfInt, Scalar, q_number
from .weights import CLASSICAL, NONCLASSICAL, classify_type, spectrum, weight_decomposition


class DecompositionIncomplete(RuntimeError):
    pass


class UnclassifiableRepresentation(RuntimeError):
    pass


# -- defining relations --------------------------------------------------------

def _qc(p, a: Matrix, b: Matrix) -> Matrix:
    return (a @ b).scale(p) - (b @ a).scale(1 / p)


def relation_residuals(rep: Representation):
    """Yield ``(relation id, residual matrix)``; every residual must vanish."""
    n = rep.n
    p = rep.param.p
    q = rep.param.q
    two = q + 1 / q
    T = rep.simple
    for i in range(2, n):
        a, b = T(i), T(i + 1)
        yield f"trilinear-1[i={i}]", a @ a @ b - (a @ b @ a).scale(two) + b @ a @ a + b
        yield f"trilinear-2[i={i}]", a @ b @ b - (b @ a @ b).scale(two) + b @ b @ a + a
    for i in range(2, n + 1):
        for j in range(i + 2, n + 1):
            yield f"commute[i={i},j={j}]", commutator(T(i), T(j))
    if n == 3:
        g = rep.generator_image
        i21, i32, i31 = T(2), T(3), g(3, 1)
        yield "so3:[I32,I31]_q=I21", _qc(p, i32, i31) - i21
        yield "so3:[I31,I21]_q=I32", _qc(p, i31, i21) - i32
    if n == 4:
        yield from _so4_relations(rep)


def _so4_relations(rep):
    p = rep.param.p
    q = rep.param.q
    g = rep.generator_image
    x = {f"I{k}{l}": g(k, l) for k, l in [(2, 1), (3, 2), (4, 3), (3, 1), (4, 2), (4, 1)]}
    triples = [
        ("I32", "I31", "I21"), ("I31", "I21", "I32"),
        ("I43", "I42", "I32"), ("I42", "I32", "I43"),
        ("I31", "I43", "I41"), ("I43", "I41", "I31"), ("I41", "I31", "I43"),
        ("I42", "I41", "I21"), ("I41", "I21", "I42"),
    ]
    for a, b, c in triples:
        yield f"so4:[{a},{b}]_q={c}", _qc(p, x[a], x[b]) - x[c]
    yield "so4:[I21,I43]=0", commutator(x["I21"], x["I43"])
    yield "so4:[I32,I41]=0", commutator(x["I32"], x["I41"])
    rhs = (x["I21"] @ x["I43"] - x["I32"] @ x["I41"]).scale(q - 1 / q)
    yield "so4:[I42,I31]=(q-1/q)(I21I43-I32I41)", commutator(x["I42"], x["I31"]) - rhs


def verify_defining_relations(rep: Representation, stop_at_first: bool = False) -> Report:
    """Each relation moved to one side must be the exact zero matrix."""
    report = Report(f"defining relations so_{rep.n}")
    for rid, res in relation_residuals(rep):
        if res.is_zero():
            report.add(rid, True)
            continue
        (i, j), v = res.max_entry()
        report.add(rid, False, {"entry": [i, j], "value": v.to_json()})
        if stop_at_first:
            break
    return report


# -- equivalence ---------------------------------------------------------------

def hom_dimension(a: Representation, b: Representation) -> int:
    """``dim Hom(b, a)``: intertwiners ``X`` with ``T_a(x) X = X T_b(x)``."""
    if a.n != b.n:
        raise ValueError("representations of different algebras")
    return len(intertwiner_space(a.mats, b.mats))


def are_equivalent(a: Representation, b: Representation) -> bool:
    if a.dim != b.dim:
        return False
    for x in intertwiner_space(a.mats, b.mats):
        if x.rank() == a.dim:
            return True
    return False


@dataclass(frozen=True)
class Signature:
    dim: int
    kind: str
    highest_weight: str
    traces: tuple
    spectra: tuple

    def to_json(self) -> dict:
        return {
            "dim": self.dim,
            "type": self.kind,
            "highest_weight": self.highest_weight,
            "traces": [t.to_json() for t in self.traces],
            "spectra": [[lab.to_json() for lab in s] for s in self.spectra],
        }


def equivalence_signature(rep: Representation) -> Signature:
    from .ladder import highest_weight

    w, _ = highest_weight(rep)
    traces = tuple(rep.simple(j).trace() for j in range(2, rep.n + 1))
    spectra = tuple(tuple(spectrum(rep, i)) for i in range(1, rep.n // 2 + 1))
    return Signature(rep.dim, classify_type(rep), str(w), traces, spectra)


# -- classification ------------------------------------------------------------

@dataclass(frozen=True)
class ClassicalLabel:
    m: tuple

    def to_json(self) -> dict:
        return {"type": CLASSICAL, "m": [str(x) for x in self.m]}


@dataclass(frozen=True)
class NonclassicalLabel:
    m: tuple
    g: AutomorphismG

    def to_json(self) -> dict:
        return {"type": NONCLASSICAL, "m": [str(x) for x in self.m], "g": list(self.g.eps)}


def _sign_of(x: Scalar) -> int:
    if not x.is_real or x.re == 0:
        raise UnclassifiableRepresentation(f"trace {x} has no real sign")
    return 1 if x.re > 0 else -1


@lru_cache(maxsize=256)
def reference_nonclassical(n: int, m: tuple, param) -> Representation:
    """The all-plus nonclassical representation with highest weight ``m``."""
    if n == 3:
        return nonclassical_so3(int(m[0] + HalfInt(1)), 1, 1, param)
    if n == 4:
        ma, mb = m
        return nonclassical_so4(ma, mb, 1, 1, 1, param)
    raise UnclassifiableRepresentation(f"no explicit nonclassical family for n={n}")


def classify_representation(rep: Representation):
    """``ClassicalLabel(m)`` or ``NonclassicalLabel(m, g)``."""
    from .ladder import highest_weight

    if rep.n not in (3, 4):
        raise UnclassifiableRepresentation(f"classification is implemented for n = 3, 4, not {rep.n}")
    try:
        w, _ = highest_weight(rep)
    except Exception as exc:  # any failure here means the input is not one of ours
        raise UnclassifiableRepresentation(str(exc)) from exc
    if classify_type(rep) == CLASSICAL:
        return ClassicalLabel(w.m)
    ref = reference_nonclassical(rep.n, w.m, rep.param)
    g = AutomorphismG(tuple(
        _sign_of(rep.simple(j).trace()) * _sign_of(ref.simple(j).trace()) for j in range(2, rep.n + 1)
    ))
    if not are_equivalent(rep, twist(ref, g)):
        raise UnclassifiableRepresentation("no twist of the reference representation matches")
    return NonclassicalLabel(w.m, g)


def representation_for_label(label, param) -> Representation:
    """A family member carrying ``label``; inverse of :func:`classify_representation`.

    For so_4 the constructor signs ``(eps1, eps2, eps3)`` multiply
    ``I_21, I_43`` and the reflected ``I_32`` term, so ``g = (eps1, eps3, eps2)``.
    """
    from .reps import classical_so4

    m = tuple(label.m)
    if isinstance(label, ClassicalLabel):
        if len(m) == 1:
            return classical_so3(m[0], param)
        return classical_so4(m[0], m[1], param)
    g = label.g.eps
    if len(m) == 1:
        return nonclassical_so3(int(m[0] + HalfInt(1)), g[0], g[1], param)
    return nonclassical_so4(m[0], m[1], g[0], g[2], g[1], param)


# -- branching -----------------------------------------------------------------

@dataclass(frozen=True)
class Component:
    family: str
    params: tuple
    multiplicity: int
    dim: int

    def to_json(self) -> dict:
        return {"family": self.family, "params": [str(x) for x in self.params],
                "multiplicity": self.multiplicity, "dim": self.dim}


@dataclass(frozen=True)
class BranchingResult:
    parent: dict
    kind: str
    components: tuple

    def to_json(self) -> dict:
        return {"parent": self.parent, "type": self.kind, "components": [c.to_json() for c in self.components]}

    def as_dict(self) -> dict:
        return {(c.family, c.params): c.multiplicity for c in self.components}


def _so3_component(kind, key, param):
    if kind == CLASSICAL:
        return classical_so3(key[0], param)
    size, e1, e2 = key
    return nonclassical_so3(size, e1, e2, param)


def branch_so4_to_so3(rep: Representation) -> BranchingResult:
    """Decompose the restriction to ``I_21, I_32`` by so_3 highest-weight vectors."""
    from .ladder import highest_weight_vectors

    if rep.n != 4:
        raise ValueError("branching is from so_4")
    kind = classify_type(rep)
    sub = restrict(rep, (2, 3))
    if classify_type(sub) != kind:
        raise DecompositionIncomplete("restriction changed the eigenvalue type")
    counts: dict = {}
    for w, vecs in highest_weight_vectors(sub):
        lab = w.labels[0]
        if kind == CLASSICAL:
            counts[(lab.m,)] = counts.get((lab.m,), 0) + vecs.cols
        else:
            size = int(lab.m + HalfInt(1))
            for e2, mult in _split_by_eps2(sub, size, lab.sign).items():
                if mult:
                    counts[(size, lab.sign, e2)] = counts.get((size, lab.sign, e2), 0) + mult
    comps = []
    total = 0
    family = "so3-classical" if kind == CLASSICAL else "so3-nonclassical"
    for key in sorted(counts, key=lambda t: tuple(x.twice if isinstance(x, HalfInt) else x for x in t)):
        d = key[0].twice + 1 if kind == CLASSICAL else key[0]
        comps.append(Component(family, key, counts[key], d))
        total += d * counts[key]
    if total != rep.dim:
        raise DecompositionIncomplete(f"components account for {total} of {rep.dim} dimensions")
    return BranchingResult(rep.descriptor(), kind, tuple(comps))


def _split_by_eps2(sub: Representation, size: int, e1: int) -> dict:
    """Multiplicities of ``T^{e1,+}_size`` and ``T^{e1,-}_size`` in ``sub``.

    Every nonclassical so_3 irreducible has one vector of weight ``(1/2)``, on
    which the compression of ``T(I_32)`` is ``eps2 [size]_q / (q^(1/2) - q^(-1/2))``.
    """
    P = sub.param
    diagram = weight_decomposition(sub)
    low = next(w for w in diagram.weights() if w.m[0] == HalfInt(1) and w.labels[0].sign == e1)
    basis = diagram.basis(low)
    image = sub.simple(3) @ basis
    # coordinates of the weight-(1/2) part: solve in the full eigenbasis
    full = Matrix.hstack([diagram.basis(w) for w in diagram.weights()])
    offset = sum(diagram.basis(w).cols for w in diagram.weights()[: diagram.weights().index(low)])
    coords = []
    for j in range(image.cols):
        x = solve(full, image.column_vector(j))
        coords.append([x[offset + i, 0] for i in range(basis.cols)])
    comp = Matrix.from_rows([[coords[j][i] for j in range(basis.cols)] for i in range(basis.cols)])
    base = q_number(size, P) / Scalar(P.p - 1 / P.p)
    out = {}
    for e2 in (1, -1):
        out[e2] = nullspace(comp - Matrix.identity(basis.cols).scale(base * e2)).cols
    return out


def branch_by_commutant(rep: Representation) -> dict:
    """Independent multiplicities ``dim Hom(V, Res rep)`` over candidate so_3 irreducibles."""
    kind = classify_type(rep)
    sub = restrict(rep, (2, 3))
    out = {}
    if kind == CLASSICAL:
        for twice in range(0, 2 * rep.dim):
            cand = classical_so3(HalfInt(twice), rep.param)
            if cand.dim > rep.dim:
                break
            mult = hom_dimension(sub, cand)
            if mult:
                out[("so3-classical", (HalfInt(twice),))] = mult
    else:
        for size in range(1, rep.dim + 1):
            for e1 in (1, -1):
                for e2 in (1, -1):
                    mult = hom_dimension(sub, nonclassical_so3(size, e1, e2, rep.param))
                    if mult:
                        out[("so3-nonclassical", (size, e1, e2))] = mult
    return out
