"""Command-line entry point: ``tsplift {verify,smooth,member,facets,scaling}``.

Exit codes: 0 success, 1 a mathematical check failed, 2 bad input or
configuration, 3 a resource cap was hit.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import re
import sys
from dataclasses import dataclass
from fractions import Fraction

from . import config
from .errors import MalformedProgramError, PreconditionError, ResourceCapError, SmoothingInfeasibleError
from .rational import decimal, format_fraction

EXIT_OK, EXIT_MATH, EXIT_INPUT, EXIT_CAP = 0, 1, 2, 3
_FRACTION_RE = re.compile(r"^-?\d+/\d+$")


@dataclass
class RunConfig:
    n: int
    k: int
    dense_cap: int | None
    seed: int
    output: str | None
    format: str

    def validate(self, min_n: int = 5) -> None:
        if self.n < min_n:
            raise PreconditionError(f"--n must be >= {min_n}")
        if self.k < 1:
            raise PreconditionError("--k must be >= 1")
        if self.dense_cap is not None and self.dense_cap > config.MAX_DENSE_CAP:
            raise PreconditionError(f"--dense-cap must be <= {config.MAX_DENSE_CAP}")


def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--n", type=int, default=8, help="number of vertices")
    common.add_argument("--k", type=int, default=1, help="lifting level")
    common.add_argument("--seed", type=int, default=42)
    common.add_argument("--samples", type=int, default=20, help="directions (scaling) or sampled path families (verify)")
    common.add_argument("--max-u", type=int, default=None, help="largest |U| for subtour certificates (default 2k)")
    common.add_argument("--dense-cap", type=int, default=None, help=f"largest n for dense enumeration (env {config.ENV_VAR})")
    common.add_argument("--out", default=None, help="output file (default stdout)")
    common.add_argument("--format", choices=("json", "csv"), default="json")

    p = argparse.ArgumentParser(prog="tsplift", description="Exact experiments with lifted approximations of the TSP polytope.")
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("verify", parents=[common], help="run the exact lemma suite")
    sub.add_parser("smooth", parents=[common], help="build the smoothing combination and c_k")
    m = sub.add_parser("member", parents=[common], help="membership of a point in Q_k (and T_n)")
    m.add_argument("point", help="SymMatrix JSON file")
    m.add_argument("--tsp", action="store_true", help="also decide membership in T_n")
    sub.add_parser("facets", parents=[common], help="emit and verify facet certificates")
    sub.add_parser("scaling", parents=[common], help="seeded scaling check of Z + c_k t* d in T_n")
    return p


# ---------------------------------------------------------------------------
# output


def _cell(v):
    # CSV is the lossy view: rationals become decimals, nested values stay JSON
    if isinstance(v, (dict, list)):
        return json.dumps(v)
    if isinstance(v, str) and _FRACTION_RE.match(v):
        return decimal(Fraction(v))
    return v


def _csv(rows: list[dict]) -> str:
    if not rows:
        return ""
    buf = io.StringIO()
    fields = list(rows[0])
    for r in rows[1:]:
        fields += [f for f in r if f not in fields]
    w = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow({k: _cell(v) for k, v in r.items()})
    return buf.getvalue()


def _emit(cfg: RunConfig, payload: dict, rows: list[dict]) -> None:
    text = json.dumps(payload, indent=2) + "\n" if cfg.format == "json" else _csv(rows)
    if cfg.output:
        with open(cfg.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# commands


def cmd_verify(cfg: RunConfig, args) -> int:
    from .verify import run_suite

    cfg.validate(min_n=3)  # small n is allowed so gated checks can be reported
    rep = run_suite(cfg.n, cfg.k, cfg.seed, args.samples)
    rows = [
        {
            "lemma": c["lemma"],
            "params": c["params"],
            "status": c["status"],
            "expected": c.get("expected", ""),
            "computed": c.get("computed", ""),
            "reason": c.get("reason", ""),
        }
        for c in rep.to_json()["checks"]
    ]
    _emit(cfg, rep.to_json(), rows)
    return EXIT_OK if rep.passed else EXIT_MATH


def cmd_smooth(cfg: RunConfig, args) -> int:
    from .lifting import build_smoothing

    cfg.validate()
    sm = build_smoothing(cfg.n, cfg.k)
    payload = sm.to_json()
    checks = dict(payload["checks"])
    if not sm.in_regime:
        # the lambda* bound is only claimed for k^3 <= n
        checks.pop("lambda_star_at_least_quarter")
    payload["asserted"] = sorted(checks)
    row = {k: v for k, v in payload.items() if k not in ("checks", "asserted")}
    _emit(cfg, payload, [row])
    return EXIT_OK if all(checks.values()) else EXIT_MATH


def _read_point(path: str):
    from .funcspace import SymMatrix

    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        raise PreconditionError(f"cannot read {path}: {exc.strerror}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise PreconditionError(f"{path}: invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    return SymMatrix.from_json(data)


def cmd_member(cfg: RunConfig, args) -> int:
    from .funcspace import affine_hull_check
    from .membership import qk_membership, tsp_membership

    cfg.validate()
    y = _read_point(args.point)
    if y.n != cfg.n:
        cfg.n = y.n
        cfg.validate()
    in_hull = affine_hull_check(y)
    payload = {"n": y.n, "k": cfg.k, "affine_hull": in_hull, "Q_k": qk_membership(y.n, cfg.k, y).to_json()}
    row = {"n": y.n, "k": cfg.k, "affine_hull": in_hull, "Q_k": payload["Q_k"]["status"], "Q_k_min": payload["Q_k"]["value"]}
    if args.tsp:
        payload["T_n"] = tsp_membership(y.n, y).to_json()
        row["T_n"] = payload["T_n"]["status"]
    _emit(cfg, payload, [row])
    return EXIT_OK


def cmd_facets(cfg: RunConfig, args) -> int:
    from .facets import all_certificates, verify_facet

    cfg.validate()
    max_u = 2 * cfg.k if args.max_u is None else args.max_u
    if max_u < 2:
        raise PreconditionError("--max-u must be >= 2")
    if max_u > 2 * cfg.k:
        raise PreconditionError(f"--max-u {max_u} exceeds 2k = {2 * cfg.k}: h_U is only built for |U| <= 2k")
    if max_u > cfg.n - 2:
        raise PreconditionError("--max-u must leave at least two vertices outside U")
    certs = all_certificates(cfg.n, cfg.k, max_u)
    results = [(c, verify_facet(c, cfg.n, cfg.k)) for c in certs]
    payload = {
        "n": cfg.n,
        "k": cfg.k,
        "max_u": max_u,
        "count": len(results),
        "all_verified": all(ok for _, ok in results),
        "certificates": [{**c.to_json(), "verified": ok} for c, ok in results],
    }
    rows = [
        {"kind": c.kind, "params": list(c.params), "constant": format_fraction(c.constant), "generators": len(c.combination), "verified": ok}
        for c, ok in results
    ]
    _emit(cfg, payload, rows)
    return EXIT_OK if payload["all_verified"] else EXIT_MATH


def cmd_scaling(cfg: RunConfig, args) -> int:
    from .membership import scaling_check

    cfg.validate()
    rep = scaling_check(cfg.n, cfg.k, args.samples, cfg.seed)
    payload = rep.to_json()
    rows = [{k: v for k, v in d.items() if k != "direction"} for d in payload["directions"]]
    _emit(cfg, payload, rows)
    return EXIT_OK if rep.passed else EXIT_MATH


COMMANDS = {"verify": cmd_verify, "smooth": cmd_smooth, "member": cmd_member, "facets": cmd_facets, "scaling": cmd_scaling}


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    cfg = RunConfig(args.n, args.k, args.dense_cap, args.seed, args.out, args.format)
    try:
        if cfg.dense_cap is not None:
            cfg.validate(min_n=3)
            config.set_dense_cap(cfg.dense_cap)
        else:
            config.get_dense_cap()  # surfaces a malformed environment override
        return COMMANDS[args.command](cfg, args)
    except ResourceCapError as exc:
        print(f"tsplift: resource cap: {exc}", file=sys.stderr)
        return EXIT_CAP
    except SmoothingInfeasibleError as exc:
        print(f"tsplift: {exc}", file=sys.stderr)
        return EXIT_MATH
    except (PreconditionError, MalformedProgramError) as exc:
        print(f"tsplift: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ArithmeticError as exc:
        print(f"tsplift: verification failed: {exc}", file=sys.stderr)
        return EXIT_MATH
    finally:
        config.set_dense_cap(None)


if __name__ == "__main__":
    sys.exit(main())
