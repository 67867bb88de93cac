"""The algebra U'_q(so_n) and normal ordering into its PBW basis.

Generators ``I_kl`` (``k > l``) are encoded as integers ``100*l + k`` so the
natural integer order is the PBW order: second index ascending, then first
index ascending.  A word is a tuple of such codes; a PBW monomial is a
non-decreasing word.

Normal ordering is right multiplication of a PBW monomial by one generator,
memoised on ``(monomial, generator)``.  When the generator is smaller than the
last letter of the monomial the offending adjacent pair is replaced by the
right-hand side of the matching commutation rule, and the pieces are
multiplied back in recursively.
"""

from __future__ import annotations

import os
import threading
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from flint import fmpq

from .scalar import DeformationParameter, Scalar

DEFAULT_STEP_BUDGET = 10**6
ONE = fmpq(1)  # the rewriting engine works in flint rationals for speed


class NonTerminating(RuntimeError):
    """Rewriting exceeded its step budget or re-entered an open subproblem."""


class IndexOutOfRange(ValueError):
    pass


def encode(k: int, l: int) -> int:
    if not 1 <= l < k <= 99:
        raise IndexOutOfRange(f"I_{k},{l} is not a generator")
    return 100 * l + k


def decode(code: int) -> tuple[int, int]:
    return code % 100, code // 100


@dataclass(frozen=True)
class GeneratorId:
    k: int
    l: int
    sign: str = "plus"

    def __post_init__(self):
        if self.sign not in ("plus", "minus"):
            raise ValueError(f"sign must be 'plus' or 'minus', got {self.sign!r}")
        if not 1 <= self.l < self.k:
            raise IndexOutOfRange(f"I_{self.k},{self.l} is not a generator")
        if self.k == self.l + 1 and self.sign == "minus":
            object.__setattr__(self, "sign", "plus")

    def __str__(self):
        sup = "" if self.k == self.l + 1 else ("+" if self.sign == "plus" else "-")
        return f"I{sup}{self.k}{self.l}" if sup else f"I{self.k}{self.l}"


def step_budget() -> int:
    raw = os.environ.get("UQSO_STEP_BUDGET")
    return int(raw) if raw else DEFAULT_STEP_BUDGET


# -- rewriting rules --------------------------------------------------------

def _swap_rule(h: int, g: int, p: fmpq):
    """Rewrite the out-of-order product ``h*g`` (``g < h``) as ordered words.

    Returns a list of ``(coefficient, word)`` with every word already ordered.
    """
    q = p * p
    a, b = decode(h)
    c, d = decode(g)
    if len({a, b, c, d}) == 4:
        hi, x, y, lo = sorted((a, b, c, d), reverse=True)
        # three pairings of four indices hi > x > y > lo
        if {(a, b), (c, d)} == {(hi, x), (y, lo)}:
            return [(ONE, (g, h))]
        if {(a, b), (c, d)} == {(hi, lo), (x, y)}:
            return [(ONE, (g, h))]
        # I_{hi,y} I_{x,lo} = I_{x,lo} I_{hi,y} + (q - 1/q)(I_{y,lo} I_{hi,x} - I_{hi,lo} I_{x,y})
        t = q - 1 / q
        return [
            (ONE, (g, h)),
            (t, (encode(y, lo), encode(hi, x))),
            (-t, (encode(hi, lo), encode(x, y))),
        ]
    k, l, n = sorted({a, b, c, d}, reverse=True)
    pair = ((a, b), (c, d))
    if pair == ((k, l), (l, n)):
        return [(q, (g, h)), (-p, (encode(k, n),))]
    if pair == ((k, l), (k, n)):
        return [(1 / q, (g, h)), (1 / p, (encode(l, n),))]
    if pair == ((k, n), (l, n)):
        return [(1 / q, (g, h)), (1 / p, (encode(k, l),))]
    raise AssertionError(f"no rule for {decode(h)} * {decode(g)}")


class _Engine:
    """Memoised straightening for one value of ``p``."""

    def __init__(self, p: Fraction):
        self.p = fmpq(p.numerator, p.denominator)
        self.rules: dict = {}
        self.memo: dict = {}
        self.open: set = set()
        self.steps = 0
        self.budget = DEFAULT_STEP_BUDGET

    def rule(self, h, g):
        key = (h, g)
        r = self.rules.get(key)
        if r is None:
            r = self.rules[key] = _swap_rule(h, g, self.p)
        return r

    def times_gen(self, mono: tuple, g: int) -> dict:
        if not mono or mono[-1] <= g:
            return {mono + (g,): ONE}
        key = (mono, g)
        hit = self.memo.get(key)
        if hit is not None:
            return hit
        if key in self.open:
            raise NonTerminating(f"rewriting cycle at {mono} * {g}")
        self.steps += 1
        if self.steps > self.budget:
            raise NonTerminating(f"step budget {self.budget} exceeded")
        self.open.add(key)
        try:
            prefix = mono[:-1]
            out: dict = {}
            for coeff, word in self.rule(mono[-1], g):
                part = {prefix: coeff}
                for x in word:
                    part = self.times_gen_poly(part, x)
                _accumulate(out, part)
        finally:
            self.open.discard(key)
        self.memo[key] = out
        return out

    def times_gen_poly(self, poly: dict, g: int) -> dict:
        out: dict = {}
        for mono, c in poly.items():
            for m2, c2 in self.times_gen(mono, g).items():
                v = out.get(m2, 0) + c * c2
                if v:
                    out[m2] = v
                else:
                    out.pop(m2, None)
        return out

    def word(self, word: tuple) -> dict:
        poly = {(): ONE}
        for g in word:
            poly = self.times_gen_poly(poly, g)
        return poly


def _accumulate(out: dict, part: dict, scale=1):
    for m, c in part.items():
        v = out.get(m, 0) + scale * c
        if v:
            out[m] = v
        else:
            out.pop(m, None)


_engines: dict = {}
_engine_lock = threading.RLock()


def _engine(param: DeformationParameter) -> _Engine:
    with _engine_lock:
        eng = _engines.get(param.p)
        if eng is None:
            eng = _engines[param.p] = _Engine(param.p)
        return eng


def _is_ordered(word: tuple) -> bool:
    return all(a <= b for a, b in zip(word, word[1:]))


# -- algebra elements -------------------------------------------------------

class AlgebraElement:
    """Finite combination of words in the generators ``I_kl`` of U'_q(so_n).

    Products concatenate words; call :func:`normal_form` to straighten.
    """

    __slots__ = ("n", "param", "terms")

    def __init__(self, n: int, param: DeformationParameter, terms: dict | None = None):
        self.n = n
        self.param = param
        self.terms = {w: Scalar.of(c) for w, c in (terms or {}).items() if c}
        for w in self.terms:
            for code in w:
                k, l = decode(code)
                if k > n:
                    raise IndexOutOfRange(f"I_{k},{l} does not exist for n={n}")

    @classmethod
    def one(cls, n, param):
        return cls(n, param, {(): 1})

    @classmethod
    def zero(cls, n, param):
        return cls(n, param)

    @classmethod
    def word(cls, n, param, gens: Iterable[tuple[int, int]], coeff=1):
        return cls(n, param, {tuple(encode(k, l) for k, l in gens): coeff})

    def _compatible(self, other: "AlgebraElement"):
        if self.n != other.n or self.param != other.param:
            raise ValueError("elements live in different algebras")

    def __add__(self, other):
        self._compatible(other)
        out = dict(self.terms)
        for w, c in other.terms.items():
            out[w] = out.get(w, 0) + c
        return AlgebraElement(self.n, self.param, out)

    def __neg__(self):
        return AlgebraElement(self.n, self.param, {w: -c for w, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        return AlgebraElement(self.n, self.param, {w: c * v for w, v in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, AlgebraElement):
            return self.scale(other)
        self._compatible(other)
        out: dict = {}
        for w1, c1 in self.terms.items():
            for w2, c2 in other.terms.items():
                w = w1 + w2
                out[w] = out.get(w, 0) + c1 * c2
        return AlgebraElement(self.n, self.param, out)

    def __rmul__(self, other):
        return self.scale(other)

    def __eq__(self, other):
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        return self.n == other.n and self.param == other.param and self.terms == other.terms

    def __hash__(self):
        return hash((self.n, frozenset(self.terms.items())))

    def is_zero(self) -> bool:
        return not self.terms

    def is_normal(self) -> bool:
        return all(_is_ordered(w) for w in self.terms)

    def degree(self) -> int:
        return max((len(w) for w in self.terms), default=0)

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda t: (len(t[0]), t[0]))

    def to_json(self) -> list:
        return [{"monomial": monomial_exponents(w), "coeff": c.to_json()} for w, c in self.sorted_terms()]

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for w, c in self.sorted_terms():
            body = "*".join(f"I{k}{l}" for k, l in map(decode, w)) or "1"
            parts.append(f"({c})*{body}")
        return " + ".join(parts)

    __repr__ = __str__


def monomial_exponents(word: tuple) -> list[list[int]]:
    """Run-length form ``[[k, l, exponent], ...]`` of a word."""
    out: list[list[int]] = []
    for code in word:
        k, l = decode(code)
        if out and out[-1][0] == k and out[-1][1] == l:
            out[-1][2] += 1
        else:
            out.append([k, l, 1])
    return out


def normal_form(x: AlgebraElement, budget: int | None = None) -> AlgebraElement:
    """Straighten ``x`` into the PBW basis."""
    eng = _engine(x.param)
    zero = fmpq(0)
    acc: dict = {}
    with _engine_lock:
        eng.steps = 0
        eng.budget = step_budget() if budget is None else budget
        for w, c in x.terms.items():
            cre, cim = _to_fmpq(c.re), _to_fmpq(c.im)
            poly = {w: ONE} if _is_ordered(w) else eng.word(w)
            for m, r in poly.items():
                a, b = acc.get(m, (zero, zero))
                acc[m] = (a + cre * r, b + cim * r)
    out = {m: Scalar(_to_fraction(a), _to_fraction(b)) for m, (a, b) in acc.items() if a or b}
    return AlgebraElement(x.n, x.param, out)


def _to_fmpq(f: Fraction) -> fmpq:
    return fmpq(f.numerator, f.denominator)


def _to_fraction(f: fmpq) -> Fraction:
    return Fraction(int(f.p), int(f.q))


def multiply(a: AlgebraElement, b: AlgebraElement) -> AlgebraElement:
    """Normal-ordered product."""
    return normal_form(a * b)


def q_commutator(a: AlgebraElement, b: AlgebraElement, sign: str = "q") -> AlgebraElement:
    """``q^(1/2) ab - q^(-1/2) ba`` (or with ``q`` inverted), normal-ordered."""
    p = a.param.p
    s = p if sign == "q" else 1 / p
    if sign not in ("q", "q_inverse"):
        raise ValueError("sign must be 'q' or 'q_inverse'")
    return normal_form((a * b).scale(s) - (b * a).scale(1 / s))


def commutator(a: AlgebraElement, b: AlgebraElement) -> AlgebraElement:
    return normal_form(a * b - b * a)


def generator(n: int, param: DeformationParameter, k: int, l: int) -> AlgebraElement:
    """The PBW basis generator ``I+_kl`` as a one-letter element."""
    if not 1 <= l < k <= n:
        raise IndexOutOfRange(f"I_{k},{l} does not exist for n={n}")
    return AlgebraElement(n, param, {(encode(k, l),): 1})


def generator_element(n: int, param: DeformationParameter, k: int, l: int, sign: str = "plus") -> AlgebraElement:
    """``I+-_kl`` built by the recursive q-commutator definition, in PBW form."""
    gid = GeneratorId(k, l, sign)
    if gid.k > n:
        raise IndexOutOfRange(f"I_{k},{l} does not exist for n={n}")
    if k == l + 1:
        return generator(n, param, k, l)
    inner = generator_element(n, param, k, l + 1, gid.sign)
    base = generator(n, param, l + 1, l)
    return q_commutator(base, inner, "q" if gid.sign == "plus" else "q_inverse")


def casimir_so4_element(i: int, n: int, param: DeformationParameter) -> AlgebraElement:
    """Casimir of the so_4 subalgebra on ``I_{2i,2i-1}, I_{2i+1,2i}, I_{2i+2,2i+1}``."""
    a = 2 * i - 1
    if i < 1 or a + 3 > n:
        raise IndexOutOfRange(f"no so_4 subalgebra at i={i} for n={n}")
    q = Scalar(param.q)

    def g(k, l):
        return generator(n, param, k, l)

    c = (
        (g(a + 1, a) * g(a + 3, a + 2)).scale(1 / q)
        - g(a + 2, a) * g(a + 3, a + 1)
        + (g(a + 2, a + 1) * g(a + 3, a)).scale(q)
    )
    return normal_form(c)


def all_generators(n: int) -> list[tuple[int, int]]:
    """All ``(k, l)`` with ``1 <= l < k <= n`` in PBW order."""
    return [(k, l) for l in range(1, n) for k in range(l + 1, n + 1)]
