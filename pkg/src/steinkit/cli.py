"""Command-line interface: ``steinkit {invariants,openbook,example-lm,verify}``.

Exit codes: 0 success, 1 a verification or consistency check failed, 2 bad input.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from itertools import combinations
from pathlib import Path
from typing import Sequence

from . import assembly, mcg, nucleus, openbook, verify
from .diagram import GridParseError, classical_invariants, parse_grid
from .surgery import (SpincOnW, SurgeryPresentation, hopf_and_grading, invariants_report, linking_matrix,
                      theorem_main_verdict)

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    pass


class CheckFailed(Exception):
    def __init__(self, message: str, report: dict | None = None):
        super().__init__(message)
        self.report = report


@dataclass(frozen=True)
class RunConfig:
    subcommand: str
    path: str | None = None
    json: bool = False
    depth: int = 6
    stabilize: bool = True
    out: str | None = None

    def __post_init__(self):
        if self.depth < 1:
            raise InputError("--depth must be at least 1")


def load_presentation(path: str) -> SurgeryPresentation:
    try:
        text = Path(path).read_text()
    except OSError as e:
        raise InputError(f"{path}: {e.strerror}")
    try:
        grid = parse_grid(text)
        return SurgeryPresentation.from_grid(grid)
    except (GridParseError, ValueError) as e:
        raise InputError(f"{path}: {e}")


# ---------------------------------------------------------------------------
# commands


def cmd_invariants(path: str) -> dict:
    p = load_presentation(path)
    ci = p.classical
    out = {"classical": {"tb": list(ci.tb), "rot": list(ci.rot)}}
    out.update(invariants_report(p))
    return out


def _closed_report(fib: openbook.LefschetzFibration, cfg: RunConfig) -> dict:
    try:
        v0 = assembly.cap_binding(fib.open_book, cfg.stabilize)
    except ValueError as e:
        raise InputError(str(e))
    v1 = assembly.build_V1(v0.monodromy, v0.fiber_genus, cfg.depth)
    return assembly.assemble_X(fib, v0, v1).to_json()


def cmd_openbook(path: str, cfg: RunConfig, close: bool = False) -> dict:
    p = load_presentation(path)
    try:
        fib = openbook.stein_to_palf(p)
    except (openbook.NotNormalized, ValueError) as e:
        raise InputError(str(e))
    out = fib.to_json()
    out["adjustments"] = [h for h in fib.page.history]
    out["node_count"] = fib.node_count
    if close:
        out["closed_fibration"] = _closed_report(fib, cfg)
    if any(v.name != "FramingMatch" for v in fib.framing_verdicts):
        raise CheckFailed("page framing differs from tb", out)
    return out


def example_lm(n: int, ks: Sequence[int], cfg: RunConfig | None = None, close: bool = False) -> dict:
    """The n-th member of the trefoil-plus-kinked-unknot family, one entry per k."""
    if n < 2:
        raise InputError("n must be at least 2")
    for k in ks:
        if not 1 <= k <= n - 1:
            raise InputError(f"k must lie in 1..{n - 1}, got {k}")
    pres = [nucleus.trefoil_family_presentation(n, k) for k in ks]
    inv = linking_matrix(pres[0])
    spins = [SpincOnW.from_presentation(p, inv) for p in pres]
    structures = []
    for k, p, s in zip(ks, pres, spins):
        hg = hopf_and_grading(inv, s)
        entry = {
            "k": k,
            "rot_trefoil": p.classical.rot[0],
            "rot_unknot": p.classical.rot[1],
            "rotation_vector": list(s.rotation_vector),
            "c1_squared": str(s.c1_squared),
            "hopf": str(hg.hopf_invariant),
            "grading": str(hg.grading),
        }
        if close:
            entry["closed_fibration"] = _closed_report(openbook.stein_to_palf(p), cfg or RunConfig("example-lm"))
        structures.append(entry)
    distinct = {f"{ks[i]},{ks[j]}": theorem_main_verdict(spins[i], spins[j]).name
                for i, j in combinations(range(len(ks)), 2)}
    cobor = assembly.theorem_cobor_report(spins, None, inv)
    classes = len({tuple(s.rotation_vector) for s in spins})
    return {
        "n": n,
        "chi": inv.euler_char,
        "sigma": inv.signature,
        "linking_matrix": [list(r) for r in inv.linking_matrix],
        "structures": structures,
        "distinctness": distinct,
        "distinct_classes": classes,
        "cobordism_maps": cobor.to_json(),
        "rank_bound": cobor.rank_bound,
        "reference": {"hf_hat_minus_Y": nucleus.reference_hf_hat(n), "tested": False},
    }


def cmd_example_lm(n: int, k: int | None = None, cfg: RunConfig | None = None, close: bool = False) -> dict:
    ks = list(range(1, n)) if k is None else [k]
    return example_lm(n, ks, cfg, close)


def cmd_verify(cfg: verify.VerifyConfig) -> tuple[list[verify.SuiteResult], bool]:
    results = verify.run_all(cfg)
    return results, all(r.status != verify.FAIL for r in results)


# ---------------------------------------------------------------------------
# output


def _text(obj, indent: int = 0) -> list[str]:
    pad = "  " * indent
    lines = []
    if isinstance(obj, dict):
        for key, value in obj.items():
            if isinstance(value, (dict, list)) and value and not _flat(value):
                lines.append(f"{pad}{key}:")
                lines += _text(value, indent + 1)
            else:
                lines.append(f"{pad}{key}: {_inline(value)}")
    elif isinstance(obj, list):
        for value in obj:
            if isinstance(value, (dict, list)) and not _flat(value):
                lines.append(f"{pad}-")
                lines += _text(value, indent + 1)
            else:
                lines.append(f"{pad}- {_inline(value)}")
    else:
        lines.append(pad + _inline(obj))
    return lines


def _flat(v) -> bool:
    if isinstance(v, dict):
        return False
    return all(not isinstance(x, (dict, list)) or (isinstance(x, list) and _flat(x)) for x in v)


def _inline(v) -> str:
    if isinstance(v, str):
        return v.rstrip("\n").replace("\n", " | ")
    return json.dumps(v)


def render(obj, as_json: bool) -> str:
    if as_json:
        return json.dumps(obj, indent=2, sort_keys=True) + "\n"
    return "\n".join(_text(obj)) + "\n"


def emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# argument parsing


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit JSON instead of text")
    common.add_argument("--out", metavar="PATH", help="write the report to PATH instead of stdout")
    common.add_argument("--depth", type=int, default=6, help="conjugator search depth (default 6)")
    common.add_argument("--no-stabilize", action="store_true",
                        help="fail instead of stabilizing a page of genus < 2 when closing up")

    ap = argparse.ArgumentParser(prog="steinkit", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("invariants", parents=[common], help="classical and 4-manifold invariants of a grid file")
    p.add_argument("path")

    p = sub.add_parser("openbook", parents=[common], help="open book and Lefschetz fibration of a grid file")
    p.add_argument("path")
    p.add_argument("--close", action="store_true", help="also cap the binding and assemble the closed fibration")

    p = sub.add_parser("example-lm", parents=[common], help="the trefoil plus kinked unknot family")
    p.add_argument("n", type=int)
    g = p.add_mutually_exclusive_group()
    g.add_argument("-k", type=int, help="a single k in 1..n-1")
    g.add_argument("--all", action="store_true", help="every k in 1..n-1 (default)")
    p.add_argument("--close", action="store_true", help="also assemble the closed fibration for each k")

    p = sub.add_parser("verify", parents=[common], help="run the self-verification suites")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--fault", choices=["flip-twist-sign"], help=argparse.SUPPRESS)
    return ap


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = RunConfig(args.subcommand, getattr(args, "path", None), args.json, args.depth,
                        not args.no_stabilize, args.out)
        if args.subcommand == "verify":
            vcfg = verify.VerifyConfig(depth=cfg.depth, seed=args.seed,
                                       flip_twist_sign=args.fault == "flip-twist-sign")
            results, ok = cmd_verify(vcfg)
            if cfg.json:
                text = render({"ok": ok, "suites": [r.to_json() for r in results]}, True)
            else:
                text = "".join(f"{r.status.upper():4}  {r.name}: {r.detail}\n" for r in results)
            emit(text, cfg.out)
            return EXIT_OK if ok else EXIT_FAIL
        if args.subcommand == "invariants":
            report = cmd_invariants(cfg.path)
        elif args.subcommand == "openbook":
            report = cmd_openbook(cfg.path, cfg, args.close)
        else:
            report = cmd_example_lm(args.n, args.k, cfg, args.close)
        emit(render(report, cfg.json), cfg.out)
        return EXIT_OK
    except InputError as e:
        print(f"steinkit: error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except CheckFailed as e:
        if e.report is not None:
            emit(render(e.report, cfg.json), cfg.out)
        print(f"steinkit: check failed: {e}", file=sys.stderr)
        return EXIT_FAIL
    except (assembly.AssemblyInconsistent, openbook.PageInconsistent, openbook.NotAllowable,
            openbook.EmbeddingFailure) as e:
        print(f"steinkit: check failed: {e}", file=sys.stderr)
        return EXIT_FAIL
    except mcg.NoConjugatorFound as e:
        print(f"steinkit: check failed: {e}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    raise SystemExit(main())
