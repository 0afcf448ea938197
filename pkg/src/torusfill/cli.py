"""``torusfill`` command-line interface.

Exit codes: 0 success, 1 invalid input, 2 the numerics could not certify a
result (or the oracle and the closed-form table disagree).
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from typing import Optional, Sequence

from . import _backend
from .fillability import classify, compute_nA, verdict_report
from .raydyn import (
    BoundaryAmbiguityError, CertificationError, LiftedCircleMap,
    NonPositiveDisplacement, compose_phi, construct_phi, displacement_range,
    lift_for, surgery_oracle, table_twisting, twisting_of_lift, twisting_of_phi,
    write_phi_csv,
)
from .sl2z import (
    E, GeneratorWord, MonodromyMatrix, classify_Ek, decompose_generators, word_length_bound,
)
from .surgery import SurgeryChain, TableMismatch, TightStructure, parse_chain


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


# options whose value may start with '-' (negative entries, ranges, steps)
_VALUE_OPTS = {"-A", "--matrix", "--k", "--l", "--n0", "--steps", "--branch",
               "-n", "--word", "--chain"}


def _glue(argv: Sequence[str]) -> list[str]:
    out, i = [], 0
    argv = list(argv)
    while i < len(argv):
        tok = argv[i]
        if tok in _VALUE_OPTS and i + 1 < len(argv):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
        else:
            out.append(tok)
            i += 1
    return out


def parse_range(text: str) -> list[int]:
    """``"a..b"`` (inclusive), ``"a,b,c"`` or a single integer."""
    try:
        if ".." in text:
            lo, hi = text.split("..", 1)
            lo_i, hi_i = int(lo), int(hi)
            if hi_i < lo_i:
                raise UsageError(f"empty range {text!r}")
            return list(range(lo_i, hi_i + 1))
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise UsageError(f"bad integer range {text!r}") from exc


def _matrix(text: str) -> MonodromyMatrix:
    return MonodromyMatrix.parse(text)


def _twisting(text: str) -> int:
    n = int(text)
    if n < 0:
        raise UsageError("twisting n must be >= 0")
    return n


def _steps(text: str) -> list[int]:
    ks = [int(x) for x in text.split(",") if x.strip()]
    if any(k == 0 for k in ks):
        raise UsageError("k = 0 is not a surgery step")
    return ks


def _emit(obj, as_json: bool, human: str) -> None:
    if as_json:
        print(json.dumps(obj, indent=2))
    else:
        print(human)


# --- subcommands -------------------------------------------------------------

def cmd_classify(args) -> int:
    s = TightStructure(_matrix(args.matrix), _twisting(args.n))
    words = [GeneratorWord.parse(w) for w in args.word or ()]
    chain = parse_chain(args.chain) if args.chain else None
    v = classify(s, words=words, chain=chain)
    rep = verdict_report(s, v)
    lines = [
        f"state:      {s}",
        "weak:       yes",
        f"strong:     {rep['strong']}",
        f"provenance: {rep['provenance'] or '-'}",
    ]
    if v.witness is not None:
        lines.append(f"witness:    {v.witness.start} -> "
                     + " -> ".join(f"[{st}] {x}" for st, x in zip(v.witness.steps, v.witness.states)))
    lines += [f"note:       {x}" for x in rep["notes"]]
    _emit(rep, args.json, "\n".join(lines))
    return 0


def cmd_decompose(args) -> int:
    A = _matrix(args.matrix)
    w = decompose_generators(A)
    rep = compute_nA(A, w)
    obj = {
        "matrix": str(A), "word": str(w), "length": len(w),
        "length_bound": word_length_bound(A), "n_of_A": rep.n_of_A,
        "stable": rep.stable,
    }
    human = (f"{A} = {w or '(empty word)'}\nlength {len(w)} (bound {obj['length_bound']}), "
             f"n(A) = {rep.n_of_A} for this word")
    _emit(obj, args.json, human)
    return 0


def cmd_surgery(args) -> int:
    s = TightStructure(_matrix(args.matrix), _twisting(args.n))
    c = SurgeryChain.build(s, _steps(args.steps))
    # a step from a non-E_l monodromy has no closed-form cross-check
    prev = (s,) + c.states[:-1]
    checked = [classify_Ek(p.monodromy) is not None for p in prev]
    obj = {
        "start": {"matrix": str(s.monodromy), "n": s.twisting},
        "states": [{"k": st.k, "matrix": str(x.monodromy), "n": x.twisting,
                    "source": "table" if ok else "oracle-only"}
                   for st, x, ok in zip(c.steps, c.states, checked)],
        "final": {"matrix": str(c.end.monodromy), "n": c.end.twisting},
    }
    lines = [f"start  {s}"] + [f"k={st.k:<4d} {x}" + ("" if ok else "  (oracle only)")
                               for st, x, ok in zip(c.steps, c.states, checked)]
    lines.append(f"final  {c.end}")
    _emit(obj, args.json, "\n".join(lines))
    return 0


def cmd_twisting(args) -> int:
    A = _matrix(args.matrix)
    if args.branch is not None:
        L = LiftedCircleMap(A, int(args.branch))
        n = twisting_of_lift(L)
    else:
        n = _twisting(args.n)
        L = lift_for(A, n)
    dr = displacement_range(L)
    obj = {
        "matrix": str(A), "branch": L.branch, "n": n,
        "d_max_enclosure": list(dr.d_max_enclosure),
        "d_min_enclosure": list(dr.d_min_enclosure),
        "sup_attained": dr.sup_attained,
        "attainment_angles": list(dr.attainment_angles),
    }
    human = (f"{A} branch {L.branch}: twisting n = {n}\n"
             f"d_max in [{dr.d_max_enclosure[0]:.12f}, {dr.d_max_enclosure[1]:.12f}]"
             f" ({'attained at a fixed ray' if dr.sup_attained else 'not attained'})\n"
             f"d_min in [{dr.d_min_enclosure[0]:.12f}, {dr.d_min_enclosure[1]:.12f}]")
    _emit(obj, args.json, human)
    return 0


def cmd_phi_export(args) -> int:
    A = _matrix(args.matrix)
    n = _twisting(args.n)
    phi = construct_phi(A, n, grid=args.grid)
    write_phi_csv(phi, args.output)
    print(f"wrote {len(phi.t)} samples to {args.output} "
          f"(residual {phi.equivariance_residual():.2e}, twisting {twisting_of_phi(phi)})")
    return 0


def _table_case(case: tuple[int, int, int, int]) -> tuple[int, int, int, int, int, int]:
    k, l, n0, grid = case
    expected = table_twisting(k, l, n0)
    lift_n = surgery_oracle(k, E(l), n0).twisting
    phi_n = twisting_of_phi(compose_phi(k, construct_phi(E(l), n0, grid=grid)))
    return k, l, n0, expected, lift_n, phi_n


def verify_table(ks, ls, n0s, jobs: int = 1, grid: int = 512):
    cases = [(k, l, n0, grid) for k in ks if k != 0 for l in ls for n0 in n0s]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            rows = list(ex.map(_table_case, cases, chunksize=16))
    else:
        rows = [_table_case(c) for c in cases]
    return rows


def cmd_verify_table(args) -> int:
    ks, ls, n0s = parse_range(args.k), parse_range(args.l), parse_range(args.n0)
    if any(n < 1 for n in n0s):
        raise UsageError("n0 values must be >= 1")
    if args.jobs < 1:
        raise UsageError("--jobs must be >= 1")
    rows = verify_table(ks, ls, n0s, args.jobs, args.grid)
    bad = [r for r in rows if not (r[3] == r[4] == r[5])]
    summary = "agreements: all" if not bad else f"agreements: {len(rows) - len(bad)}"
    summary += f", disagreements: {len(bad)}"
    obj = {
        "cases": len(rows),
        "agreements": len(rows) - len(bad),
        "disagreements": len(bad),
        "mismatches": [dict(zip(("k", "l", "n0", "table", "lift", "phi"), r)) for r in bad],
    }
    if args.json:
        print(json.dumps(obj, indent=2))
    else:
        print(f"cases: {len(rows)} (k in {[k for k in ks if k]}, l in {ls[0]}..{ls[-1]}, n0 in {n0s})")
        for r in bad:
            print("mismatch k={} l={} n0={}: table {} lift {} phi {}".format(*r))
        print(summary)
    return 0 if not bad else 2


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="torusfill", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version",
                   version=f"torusfill 0.1.0 ({_backend.BACKEND} kernels)")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, func, help_):
        sp = sub.add_parser(name, help=help_)
        sp.set_defaults(func=func)
        return sp

    sp = add("classify", cmd_classify, "fillability verdict for (T_A, zeta_n)")
    sp.add_argument("-A", "--matrix", required=True)
    sp.add_argument("-n", required=True)
    sp.add_argument("--word", action="append", help="generator word, e.g. Em1,E1p (repeatable)")
    sp.add_argument("--chain", help='chain ending at the state, "a,b;c,d n=N steps=k1,k2"')
    sp.add_argument("--json", action="store_true")

    sp = add("decompose", cmd_decompose, "write A as a word in E_-1 and E_1'")
    sp.add_argument("-A", "--matrix", required=True)
    sp.add_argument("--json", action="store_true")

    sp = add("surgery", cmd_surgery, "apply contact (-1/k)-surgeries")
    sp.add_argument("-A", "--matrix", required=True)
    sp.add_argument("-n", required=True)
    sp.add_argument("--steps", required=True)
    sp.add_argument("--json", action="store_true")

    sp = add("twisting", cmd_twisting, "twisting of a lift, or the lift for a twisting")
    sp.add_argument("-A", "--matrix", required=True)
    g = sp.add_mutually_exclusive_group(required=True)
    g.add_argument("--branch")
    g.add_argument("-n")
    sp.add_argument("--json", action="store_true")

    sp = add("phi-export", cmd_phi_export, "sample an equivariant angle function to CSV")
    sp.add_argument("-A", "--matrix", required=True)
    sp.add_argument("-n", required=True)
    sp.add_argument("-o", "--output", required=True)
    sp.add_argument("--grid", type=int, default=None)

    sp = add("verify-table", cmd_verify_table, "check the E_l surgery table against the oracle")
    sp.add_argument("--k", default="-3..3")
    sp.add_argument("--l", default="-6..6")
    sp.add_argument("--n0", default="1..4")
    sp.add_argument("--jobs", type=int, default=1)
    sp.add_argument("--grid", type=int, default=512,
                    help="phi samples per unit for the phi route (default 512)")
    sp.add_argument("--json", action="store_true")
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    parser = build_parser()
    try:
        args = parser.parse_args(_glue(argv))
        return args.func(args)
    except NonPositiveDisplacement as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (CertificationError, BoundaryAmbiguityError, TableMismatch) as exc:
        print(f"certification failure: {exc}", file=sys.stderr)
        return 2
    except (UsageError, ValueError, TypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
