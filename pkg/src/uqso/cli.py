"""Command-line front end: ``uqso <command> [options]``.

Exit codes: 0 all checks pass, 1 a verification failed, 2 usage error,
3 rewriting budget exhausted.
"""

from __future__ import annotations

import argparse
import json
import random
import re
import sys
from fractions import Fraction

from . import branch, ladder, pbw, reps, weights
from .scalar import DeformationParameter, I, Scalar

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3


class UsageError(ValueError):
    pass


# -- word grammar --------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(I)(\d)(\d)|(\d+(?:/\d+)?)|(qh)|(i)|([*+\-]))")


def parse_word_expr(text: str, n: int, param: DeformationParameter) -> pbw.AlgebraElement:
    """Parse e.g. ``"2/3 * qh * I32 * I21 - I31"`` into an (unordered) element."""
    pos = 0
    tokens = []
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise UsageError(f"cannot parse {text[pos:]!r}")
        tokens.append(m)
        pos = m.end()
        while pos < len(text) and text[pos].isspace():
            pos += 1
    total = pbw.AlgebraElement.zero(n, param)
    sign = 1
    coeff = Scalar(1)
    word: list = []
    expect_factor = True

    def flush():
        nonlocal total
        total = total + pbw.AlgebraElement.word(n, param, word, coeff * sign)

    for m in tokens:
        op = m.group(7)
        if op in ("+", "-"):
            if expect_factor and (word or coeff != 1):
                raise UsageError("dangling operator")
            if not expect_factor:
                flush()
                sign, coeff, word = 1, Scalar(1), []
            sign *= -1 if op == "-" else 1
            expect_factor = True
            continue
        if op == "*":
            if expect_factor:
                raise UsageError("'*' without a left factor")
            expect_factor = True
            continue
        if not expect_factor:
            raise UsageError("missing '*' between factors")
        expect_factor = False
        if m.group(1):
            k, l = int(m.group(2)), int(m.group(3))
            if not 1 <= l < k <= n:
                raise UsageError(f"I{k}{l} is not a generator of so_{n}")
            word.append((k, l))
        elif m.group(4):
            coeff = coeff * Fraction(m.group(4))
        elif m.group(5):
            coeff = coeff * param.p
        else:
            coeff = coeff * I
    if expect_factor:
        raise UsageError("expression ends with an operator")
    flush()
    return total


# -- options -------------------------------------------------------------------

def _param(text: str) -> DeformationParameter:
    try:
        return DeformationParameter.parse(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"invalid --p {text!r}: {exc}") from exc


def _eps(text: str | None, count: int):
    if text is None:
        return (1,) * count
    try:
        vals = tuple(int(x) for x in text.split(","))
    except ValueError as exc:
        raise UsageError(f"invalid sign list {text!r}") from exc
    if len(vals) != count or any(v not in (1, -1) for v in vals):
        raise UsageError(f"expected {count} signs of +1/-1, got {text!r}")
    return vals


def _build(args, param):
    if args.rep is None:
        raise UsageError("--rep is required")
    try:
        if args.rep == "so3-classical":
            rep = reps.classical_so3(_require(args.l, "--l"), param)
        elif args.rep == "so3-nonclassical":
            e = _eps(args.eps, 2)
            rep = reps.nonclassical_so3(int(_require(args.size, "--size")), e[0], e[1], param)
        elif args.rep == "so4-classical":
            rep = reps.classical_so4(_require(args.r, "--r"), _require(args.s, "--s"), param)
        elif args.rep == "so4-nonclassical":
            e = _eps(args.eps, 3)
            rep = reps.nonclassical_so4(_require(args.r, "--r"), _require(args.s, "--s"), *e, param)
        else:
            raise UsageError(f"unknown --rep {args.rep!r}")
    except reps.InvalidParameter as exc:
        raise UsageError(str(exc)) from exc
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    if getattr(args, "twist", None):
        rep = reps.twist(rep, reps.AutomorphismG(_eps(args.twist, rep.n - 1)))
    return rep


def _require(value, flag):
    if value is None:
        raise UsageError(f"{flag} is required for this family")
    return value


# -- commands ------------------------------------------------------------------

def cmd_normalize(args, param):
    x = parse_word_expr(args.expr, args.n, param)
    nf = pbw.normal_form(x)
    data = {"n": args.n, "p": str(param), "input": args.expr, "normal_form": nf.to_json()}
    return data, str(nf), True


def cmd_rep(args, param):
    rep = _build(args, param)
    return rep.to_json(), f"{rep.family} dim={rep.dim}", True


def _word_checks(rep, count, seed, report):
    rng = random.Random(seed)
    gens = pbw.all_generators(rep.n)
    for t in range(count):
        word = [rng.choice(gens) for _ in range(rng.randint(0, 6))]
        x = pbw.AlgebraElement.word(rep.n, rep.param, word)
        ok = reps.image_of(rep, x) == reps.image_of(rep, pbw.normal_form(x))
        report.add(f"compat[word={t}]", ok, {"word": [f"I{k}{l}" for k, l in word]})


def cmd_verify(args, param):
    rep = _build(args, param)
    report = branch.verify_defining_relations(rep)
    if args.words:
        _word_checks(rep, args.words, args.seed, report)
    data = {"representation": rep.descriptor(), **report.to_json()}
    s = report.summary()
    return data, f"{s['passed']}/{s['total']} relations hold", report.passed


def cmd_diagram(args, param):
    rep = _build(args, param)
    d = weights.weight_decomposition(rep)
    weyl = weights.weyl_invariance_check(d, rep.n)
    data = {
        "representation": rep.descriptor(),
        "type": weights.classify_type(rep),
        "dim": rep.dim,
        "weights": d.to_json(),
        "weyl": weyl.to_json(),
    }
    lines = [f"{w}  x{b.cols}" for w, b in d.entries]
    lines.append(f"weyl: {weyl.to_json()['status']}")
    return data, "\n".join(lines), d.total() == rep.dim


def cmd_ladder(args, param):
    rep = _build(args, param)
    d = weights.weight_decomposition(rep)
    shifts = []
    ok = True
    for w in d.weights():
        for i in range(1, rep.n // 2 + 1):
            for kind in (ladder.RAISING, ladder.LOWERING):
                try:
                    shifts.append(ladder.ladder_shift_check(rep, w, i, kind).to_json())
                except ladder.ShiftViolation as exc:
                    ok = False
                    shifts.append({"weight": w.to_json(), "i": i, "kind": kind, "violation": str(exc)})
    try:
        hw, _ = ladder.highest_weight(rep)
        hw_json = hw.to_json()
    except (ladder.NoHighestWeight, ladder.MultipleHighestWeights) as exc:
        ok = False
        hw_json = {"error": type(exc).__name__, "detail": str(exc)}
    comm = ladder.verify_ladder_commutation(rep)
    ok = ok and comm.passed
    data = {"representation": rep.descriptor(), "shifts": shifts, "highest_weight": hw_json,
            "commutation": comm.to_json()}
    s = comm.summary()
    return data, f"highest weight {hw_json}; commutation {s['passed']}/{s['total']}", ok


def cmd_branch(args, param):
    rep = _build(args, param)
    if rep.n != 4:
        raise UsageError("branch needs an so_4 representation")
    res = branch.branch_so4_to_so3(rep)
    oracle = branch.branch_by_commutant(rep)
    agree = res.as_dict() == oracle
    data = {**res.to_json(), "oracle_agrees": agree}
    lines = [f"{c.family}{list(map(str, c.params))} x{c.multiplicity}" for c in res.components]
    return data, "\n".join(lines), agree


def cmd_classify(args, param):
    rep = _build(args, param)
    label = branch.classify_representation(rep)
    sig = branch.equivalence_signature(rep)
    data = {"representation": rep.descriptor(), "label": label.to_json(), "signature": sig.to_json()}
    return data, json.dumps(label.to_json(), sort_keys=True), True


COMMANDS = {
    "normalize": cmd_normalize,
    "rep": cmd_rep,
    "verify": cmd_verify,
    "diagram": cmd_diagram,
    "ladder": cmd_ladder,
    "branch": cmd_branch,
    "classify": cmd_classify,
}


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="uqso", description="Exact computations in U'_q(so_n).")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--p", default="2/1", help="square root of q, as a/b (default 2/1)")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--json", action="store_true", help="emit JSON")
    fam = argparse.ArgumentParser(add_help=False)
    fam.add_argument("--rep", choices=reps.FAMILIES)
    fam.add_argument("--l")
    fam.add_argument("--size", type=int)
    fam.add_argument("--r")
    fam.add_argument("--s")
    fam.add_argument("--eps", help="comma-separated signs, e.g. 1,-1")
    fam.add_argument("--twist", help="automorphism signs (eps_2,...,eps_n), e.g. 1,-1")
    sub = parser.add_subparsers(dest="command", required=True)
    norm = sub.add_parser("normalize", parents=[common], help="normal-order a word expression")
    norm.add_argument("expr")
    norm.add_argument("--n", type=int, default=3)
    for name in ("rep", "verify", "diagram", "ladder", "branch", "classify"):
        p = sub.add_parser(name, parents=[common, fam])
        if name == "verify":
            p.add_argument("--words", type=int, default=0, help="random words for the compatibility check")
    return parser


def main(argv=None) -> int:
    parser = make_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        param = _param(args.p)
        if args.command == "normalize" and not 2 <= args.n <= 9:
            raise UsageError("--n must be between 2 and 9")
        data, text, ok = COMMANDS[args.command](args, param)
    except UsageError as exc:
        print(f"uqso: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except pbw.NonTerminating as exc:
        print(f"uqso: rewriting budget exhausted: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (reps.RelationCheckFailed, weights.NotDiagonalizable, weights.UnclassifiedEigenvalue,
            weights.MixedTypes, branch.DecompositionIncomplete, branch.UnclassifiableRepresentation) as exc:
        print(f"uqso: check failed: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAIL
    if args.json:
        print(json.dumps(data, sort_keys=True, indent=2))
    else:
        print(text)
    return EXIT_OK if ok else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
