"""Command-line interface: ``degflag {cells,character,semismall,verify}``.

Exit codes: 0 success, 1 failed consistency check, 2 usage error,
3 capacity guard.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass
from fractions import Fraction

from .census import census, default_threads, smallness_report
from .characters import (
    EXACT_MAX_N, DominantWeight, abl_character_eval, abl_character_exact, character_to_json,
    graded_dimensions,
)
from .combinatorics import (
    ParabolicShape, _check_rank, cell_dimension, enumerate_admissible,
    enumerate_admissible_parabolic, num_roots, relative_dimension,
)
from .errors import CapacityError, DegFlagError, InternalConsistencyError, ResampleRequired
from .laurent import LaurentMonomial, fraction_str
from .pbw_oracle import DEFAULT_DIM_CAP, graded_character
from .verify import run_verify

EXIT_OK, EXIT_CHECK, EXIT_USAGE, EXIT_CAPACITY = 0, 1, 2, 3
TABLE_MAX_N = 6
COUNTS_MAX_N = 7


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    n: int
    lam: tuple | None = None
    shape: tuple | None = None
    threads: int = 1
    seed: int = 0
    format: str = "json"
    exact_max_n: int = EXACT_MAX_N
    oracle_cap: int = DEFAULT_DIM_CAP

    def __post_init__(self):
        _check_rank(self.n)
        if self.exact_max_n < 1 or self.oracle_cap < 1 or self.threads < 1:
            raise UsageError("caps and thread counts must be positive")
        if self.lam is not None and len(self.lam) != self.n - 1:
            raise UsageError(f"--lambda needs {self.n - 1} entries for n={self.n}")


def _int_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _fraction_list(text: str) -> tuple[Fraction, ...]:
    try:
        return tuple(Fraction(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated rationals, got {text!r}")


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=False) + "\n"


def _csv(rows: list[list], header: list[str]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


# ---------------------------------------------------------------------------
# cells


def _poly_str(coeffs: list[int], var: str = "t") -> str:
    parts = []
    for k, c in enumerate(coeffs):
        if c:
            mono = "" if k == 0 else (var if k == 1 else f"{var}^{k}")
            parts.append(f"{c}{mono}" if mono and c != 1 else (mono or str(c)))
    return " + ".join(parts) or "0"


def cmd_cells(cfg: RunConfig, counts_only: bool) -> tuple[str, int]:
    n = cfg.n
    shape = ParabolicShape(n, cfg.shape) if cfg.shape else None
    if n > COUNTS_MAX_N:
        raise CapacityError(f"cell enumeration is limited to n <= {COUNTS_MAX_N}")
    if n > TABLE_MAX_N and not counts_only:
        raise CapacityError(f"full cell tables are limited to n <= {TABLE_MAX_N}; use --counts-only")
    slots = shape.roots if shape else None
    M = len(slots) if shape else num_roots(n)
    poincare = [0] * (M + 1)
    rows = []
    count = 0
    it = enumerate_admissible_parabolic(shape) if shape else enumerate_admissible(n)
    if counts_only and not shape:
        # the census walk tallies cell dimensions without building collections
        table = census(n, parallelism=cfg.threads)
        poincare, count, it = list(table.poincare), table.collections, ()
    for c in it:
        dim = cell_dimension(c)
        poincare[dim] += 1
        count += 1
        if counts_only:
            continue
        rows.append({
            "collection": {f"{i},{j}": list(c[i, j].elements) for i, j in c.slots},
            "dimension": dim,
            "relative_dimension": None if shape else relative_dimension(c),
            "diagonal": [list(c[i, i].elements) for i in range(1, n) if (i, i) in c],
        })
    while len(poincare) > 1 and poincare[-1] == 0:
        poincare.pop()
    if count != 1 << M:
        raise InternalConsistencyError(f"found {count} collections, expected {1 << M}")
    out = {
        "n": n,
        "shape": list(cfg.shape) if cfg.shape else None,
        "slots": M,
        "count": count,
        "poincare": poincare,
    }
    if not counts_only:
        out["rows"] = rows
    if cfg.format == "json":
        return _dump(out), EXIT_OK
    if cfg.format == "csv":
        if counts_only:
            return _csv([[k, c] for k, c in enumerate(poincare)], ["dimension", "cells"]), EXIT_OK
        return _csv([[json.dumps(r["collection"], separators=(",", ":")), r["dimension"],
                      "" if r["relative_dimension"] is None else r["relative_dimension"],
                      json.dumps(r["diagonal"], separators=(",", ":"))] for r in rows],
                    ["collection", "dimension", "relative_dimension", "diagonal"]), EXIT_OK
    lines = [f"n={n} shape={out['shape']} cells={count}",
             f"Poincare polynomial: {_poly_str(poincare)}"]
    for r in rows:
        rel = "-" if r["relative_dimension"] is None else r["relative_dimension"]
        lines.append(f"{r['collection']}  dim={r['dimension']}  rel={rel}  diag={r['diagonal']}")
    return "\n".join(lines) + "\n", EXIT_OK


# ---------------------------------------------------------------------------
# character


def cmd_character(cfg: RunConfig, point: tuple | None, oracle_check: bool) -> tuple[str, int]:
    n, lam = cfg.n, DominantWeight(cfg.lam)
    out: dict = {"n": n, "lambda": list(lam.ell)}
    status = EXIT_OK
    if point is not None:
        if len(point) != n:
            raise UsageError(f"--eval needs {n - 1} z-values and one q-value")
        value = abl_character_eval(n, lam, point)
        out["point"] = [fraction_str(x) for x in point]
        out["value"] = fraction_str(value)
        if oracle_check:
            ref = graded_character(n, lam, cap=cfg.oracle_cap).to_polynomial().evaluate(point)
            out["oracle_value"] = fraction_str(ref)
            out["equal"] = ref == value
            if not out["equal"]:
                status = EXIT_CHECK
    else:
        if n > cfg.exact_max_n:
            raise CapacityError(
                f"exact character limited to n <= {cfg.exact_max_n}; pass --eval Z1,..,Z{n - 1} Q")
        ch = abl_character_exact(n, lam, max_n=cfg.exact_max_n)
        dims = graded_dimensions(ch)
        out["character"] = ch.to_json()
        out["graded_dimensions"] = dims
        out["dimension"] = sum(dims)
        if oracle_check:
            ref = graded_character(n, lam, cap=cfg.oracle_cap).to_polynomial()
            out["oracle"] = character_to_json(ref)
            out["equal"] = ref == ch.polynomial
            if not out["equal"]:
                status = EXIT_CHECK
    if cfg.format == "json":
        return _dump(out), status
    if cfg.format == "csv":
        if "character" in out:
            rows = [[*t["z"], t["q"], t["coeff"]] for t in out["character"]]
            return _csv(rows, [f"z{k}" for k in range(1, n)] + ["q", "coeff"]), status
        return _csv([[*out["point"], out["value"]]],
                    [f"z{k}" for k in range(1, n)] + ["q", "value"]), status
    lines = [f"n={n} lambda={out['lambda']}"]
    if "character" in out:
        for t in out["character"]:
            coeff = t["coeff"].removesuffix("/1")
            mono = str(LaurentMonomial.from_exponent((*t["z"], t["q"])))
            lines.append(mono if coeff == "1" else f"{coeff}*{mono}")
        lines.append(f"graded dimensions {out['graded_dimensions']} total {out['dimension']}")
    else:
        lines.append(f"value at {out['point']}: {out['value']}")
    if "equal" in out:
        lines.append(f"oracle agrees: {str(out['equal']).lower()}")
    return "\n".join(lines) + "\n", status


# ---------------------------------------------------------------------------
# semismall / verify


def cmd_semismall(cfg: RunConfig, backend: str, timing: bool) -> tuple[str, int]:
    rep = smallness_report(cfg.n, parallelism=cfg.threads, backend=backend)
    out = rep.to_json(timing=timing)
    if cfg.format == "json":
        return _dump(out), EXIT_OK
    if cfg.format == "csv":
        rows = [[json.dumps(w["label"], separators=(",", ":")), w["base_dim"], w["fiber_dim"], w["excess"]]
                for w in out["witnesses"]]
        return _csv(rows, ["label", "base_dim", "fiber_dim", "excess"]), EXIT_OK
    lines = [f"n={cfg.n} verdict={out['verdict']} base_cells={out['base_cells']} "
             f"max_fiber_dim={out['max_fiber_dim']} max_excess={out['max_excess']}"]
    lines += [f"witness {w['label']} base_dim={w['base_dim']} fiber_dim={w['fiber_dim']} "
              f"excess={w['excess']}" for w in out["witnesses"]]
    if timing:
        lines.append(f"elapsed {out['elapsed_seconds']} s ({out['backend']})")
    return "\n".join(lines) + "\n", EXIT_OK


def cmd_verify(cfg: RunConfig, trials: int) -> tuple[str, int]:
    out = run_verify(cfg.n, trials=trials, seed=cfg.seed)
    status = EXIT_OK if out["passed"] else EXIT_CHECK
    if cfg.format == "json":
        return _dump(out), status
    if cfg.format == "csv":
        rows = [[s["name"], "pass" if s["passed"] else "fail", s["checked"], "; ".join(s["notes"])]
                for s in out["suites"]]
        return _csv(rows, ["suite", "status", "checked", "notes"]), status
    lines = [f"n={cfg.n} trials={trials} seed={cfg.seed}"]
    for s in out["suites"]:
        lines.append(f"{'PASS' if s['passed'] else 'FAIL'} {s['name']} ({s['checked']} checks)")
        lines += [f"  note: {t}" for t in s["notes"]]
        lines += [f"  failure: {t}" for t in s["failures"]]
    return "\n".join(lines) + "\n", status


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="degflag", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--n", type=int, required=True)
        sp.add_argument("--format", choices=["json", "csv", "text"], default="json")
        sp.add_argument("--seed", type=int, default=0)

    sp = sub.add_parser("cells", help="cells of R_n (or of a parabolic shape) and the Poincare polynomial")
    common(sp)
    sp.add_argument("--shape", type=_int_list, help="parabolic shape d_1,...,d_k")
    sp.add_argument("--counts-only", action="store_true", help="only the Poincare polynomial")

    sp = sub.add_parser("character", help="PBW-graded character of V_lambda")
    common(sp)
    sp.add_argument("--lambda", dest="lam", type=_int_list, required=True, help="l_1,...,l_{n-1}")
    sp.add_argument("--eval", nargs=2, metavar=("Z", "Q"), help="evaluate at z_1,..,z_{n-1} and q")
    sp.add_argument("--oracle-check", action="store_true")
    sp.add_argument("--exact-max-n", type=int, default=EXACT_MAX_N)
    sp.add_argument("--oracle-cap", type=int, default=DEFAULT_DIM_CAP)

    sp = sub.add_parser("semismall", help="smallness census of R_n -> Fl^a_n")
    common(sp)
    sp.add_argument("--threads", type=int, default=None)
    sp.add_argument("--backend", choices=["auto", "python", "numba"], default="auto")
    sp.add_argument("--no-timing", action="store_true", help="omit timing for byte-stable output")

    sp = sub.add_parser("verify", help="randomised invariant suites")
    common(sp)
    sp.add_argument("--trials", type=int, default=100)
    return p


def run(argv: list[str] | None = None) -> tuple[str, str, int]:
    """Run the CLI; returns ``(stdout, stderr, exit code)``."""
    parser = build_parser()
    err = io.StringIO()
    try:
        old = sys.stderr
        sys.stderr = err
        try:
            args = parser.parse_args(argv)
        finally:
            sys.stderr = old
    except SystemExit as e:
        return "", err.getvalue(), EXIT_USAGE if e.code else EXIT_OK
    try:
        threads = getattr(args, "threads", None) or default_threads()
        cfg = RunConfig(n=args.n, lam=getattr(args, "lam", None), shape=getattr(args, "shape", None),
                        threads=threads, seed=args.seed, format=args.format,
                        exact_max_n=getattr(args, "exact_max_n", EXACT_MAX_N),
                        oracle_cap=getattr(args, "oracle_cap", DEFAULT_DIM_CAP))
        if args.command == "cells":
            out, code = cmd_cells(cfg, args.counts_only)
        elif args.command == "character":
            point = None
            if args.eval:
                point = _fraction_list(args.eval[0]) + _fraction_list(args.eval[1])
            out, code = cmd_character(cfg, point, args.oracle_check)
        elif args.command == "semismall":
            out, code = cmd_semismall(cfg, args.backend, not args.no_timing)
        else:
            if args.trials < 0:
                raise UsageError("--trials must be nonnegative")
            out, code = cmd_verify(cfg, args.trials)
        return out, "", code
    except ResampleRequired as e:
        return "", f"error: vanishing denominator at the evaluation point ({e}); resample\n", EXIT_USAGE
    except CapacityError as e:
        return "", f"error: {e}\n", EXIT_CAPACITY
    except InternalConsistencyError as e:
        return "", f"error: internal consistency check failed: {e}\n", EXIT_CHECK
    except (UsageError, argparse.ArgumentTypeError, ValueError) as e:
        return "", f"error: {e}\n", EXIT_USAGE
    except DegFlagError as e:
        return "", f"error: {e}\n", EXIT_CHECK


def main(argv: list[str] | None = None) -> int:
    out, err, code = run(argv)
    sys.stdout.write(out)
    sys.stderr.write(err)
    return code


if __name__ == "__main__":
    raise SystemExit(main())
