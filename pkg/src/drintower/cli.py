"""Batch command-line interface.

Four subcommands: verify (exhaustive identity suites), enumerate (point
listings), count (per-extension tallies), zeta (residual report for the
quadratic level).  Configuration precedence is flags over config file
over defaults; the config file is a flat key = value text file whose
keys mirror the long flag names.

Exit codes: 0 success, 1 verification failure, 2 usage error,
3 field-size cap exceeded.  Identical configuration produces
byte-identical output, whatever the worker count.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass, field

from . import __version__
from .counting import (
    FieldContext,
    count_points,
    hermitian_affine_count,
    zeta_consistency,
)
from .finite_field import CapExceededError, DEFAULT_CAP, make_field, \
    prime_power
from .tower import (
    cofactor_poly,
    enumerate_x0,
    enumerate_xprime,
    kernel_line_poly,
    quotient_torsion_poly,
    supersingular_z_values,
    torsion_poly,
)

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_USAGE = 2
EXIT_CAP = 3


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    q: int = 2
    n: int = 2
    variant: str = "xprime"
    m_first: int = 1
    m_last: int = 1
    format: str = "json"
    cap: int = DEFAULT_CAP
    workers: int = 1
    supersingular_only: bool = False
    genus: int | None = None
    moduli: dict = field(default_factory=dict)

    def validate(self):
        if prime_power(self.q) is None or self.q < 2:
            raise UsageError(f"q = {self.q} is not a prime power >= 2")
        if self.n < 2:
            raise UsageError("n must be at least 2")
        if not 1 <= self.m_first <= self.m_last:
            raise UsageError("extension range must satisfy 1 <= m1 <= m2")
        if self.variant not in ("xprime", "x0"):
            raise UsageError(f"unknown variant {self.variant!r}")
        if self.format not in ("json", "csv"):
            raise UsageError(f"unknown format {self.format!r}")
        if self.workers < 1:
            raise UsageError("workers must be at least 1")
        if self.cap < 4:
            raise UsageError("cap is too small for any field")
        for (p, m), coeffs in self.moduli.items():
            try:
                make_field(p, m, coeffs, cap=self.cap)
            except (ValueError, CapExceededError) as exc:
                raise UsageError(f"bad modulus for {p}^{m}: {exc}") from None

    def context(self) -> FieldContext:
        return FieldContext(cap=self.cap, moduli=self.moduli)

    def echo(self) -> dict:
        # workers is deliberately absent: reports must be byte-identical
        # whatever the worker count
        return {
            "q": self.q, "n": self.n, "variant": self.variant,
            "ext": f"{self.m_first}..{self.m_last}",
            "format": self.format, "cap": self.cap,
            "supersingular_only": self.supersingular_only,
            "genus": self.genus,
            "moduli": {f"{p}^{m}": ",".join(str(c) for c in mod)
                       for (p, m), mod in sorted(self.moduli.items())},
        }


def _parse_ext(text: str) -> tuple:
    a, sep, b = text.partition("..")
    try:
        m1 = int(a)
        m2 = int(b) if sep else m1
    except ValueError:
        raise UsageError(f"bad extension range {text!r}") from None
    return m1, m2


def _parse_modulus(text: str) -> tuple:
    head, sep, tail = text.partition("/")
    if not sep:
        raise UsageError(f"bad modulus spec {text!r}; use p^m/c0,c1,...")
    ps, sep2, ms = head.partition("^")
    try:
        p = int(ps)
        m = int(ms) if sep2 else 1
        coeffs = tuple(int(c) for c in tail.split(","))
    except ValueError:
        raise UsageError(f"bad modulus spec {text!r}") from None
    return (p, m), coeffs


def _read_config_file(path: str) -> dict:
    out: dict = {}
    try:
        with open(path, "r", encoding="utf-8") as fh:
            for lineno, raw in enumerate(fh, 1):
                line = raw.split("#", 1)[0].strip()
                if not line:
                    continue
                key, sep, value = line.partition("=")
                if not sep:
                    raise UsageError(
                        f"{path}:{lineno}: expected key = value")
                key = key.strip().replace("-", "_")
                value = value.strip()
                if key == "modulus":
                    out.setdefault("modulus", []).append(value)
                else:
                    out[key] = value
    except OSError as exc:
        raise UsageError(f"cannot read config file: {exc}") from None
    return out


def _build_config(args: argparse.Namespace) -> RunConfig:
    cfg = RunConfig()
    layers = []
    if args.config:
        layers.append(_read_config_file(args.config))
    flags = {}
    for key in ("q", "n", "variant", "ext", "format", "genus", "cap",
                "workers"):
        v = getattr(args, key, None)
        if v is not None:
            flags[key] = v
    if getattr(args, "supersingular_only", False):
        flags["supersingular_only"] = True
    if getattr(args, "modulus", None):
        flags["modulus"] = list(args.modulus)
    layers.append(flags)

    for layer in layers:
        for key, value in layer.items():
            if key in ("q", "n", "genus", "cap", "workers"):
                try:
                    setattr(cfg, key, int(value))
                except ValueError:
                    raise UsageError(f"bad integer for {key}: {value!r}") \
                        from None
            elif key == "ext":
                cfg.m_first, cfg.m_last = _parse_ext(str(value))
            elif key in ("variant", "format"):
                setattr(cfg, key, str(value))
            elif key == "supersingular_only":
                cfg.supersingular_only = str(value).lower() in \
                    ("1", "true", "yes", "on")
            elif key == "modulus":
                values = value if isinstance(value, list) else [value]
                for item in values:
                    pm, coeffs = _parse_modulus(str(item))
                    cfg.moduli[pm] = coeffs
            else:
                raise UsageError(f"unknown config key {key!r}")
    cfg.validate()
    return cfg


# ---------------------------------------------------------------------------
# report rendering
# ---------------------------------------------------------------------------

def _meta(cfg: RunConfig, command: str, ctx: FieldContext) -> dict:
    return {
        "tool": "drintower",
        "version": __version__,
        "command": command,
        "config": cfg.echo(),
        "fields_used": dict(sorted(ctx.used.items(),
                                   key=lambda kv: (kv[0][0], kv[0][1]))),
    }


def _json_meta(meta: dict) -> dict:
    out = dict(meta)
    out["fields_used"] = {f"{p}^{m}": label
                          for (p, m), label in meta["fields_used"].items()}
    return out


def _emit_json(payload: dict) -> str:
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def _emit_csv(meta: dict, rows: list) -> str:
    buf = io.StringIO()
    flat = _json_meta(meta)
    for key in sorted(flat):
        value = flat[key]
        if isinstance(value, dict):
            value = json.dumps(value, sort_keys=True)
        buf.write(f"# {key}={value}\n")
    writer = csv.writer(buf, lineterminator="\n")
    for row in rows:
        writer.writerow(row)
    return buf.getvalue()


# ---------------------------------------------------------------------------
# the identity suite behind `verify`
# ---------------------------------------------------------------------------

def _suite_factorizations(q, big):
    cases = 0
    failures = []
    for x in big.nonzero_elements():
        cases += 1
        if cofactor_poly(x, q) * kernel_line_poly(x, q) != torsion_poly(x, q):
            failures.append({"x": x.serialize()})
    return cases, failures


def _suite_reverse_factorizations(q, big):
    cases = 0
    failures = []
    for x in big.nonzero_elements():
        cases += 1
        composed = kernel_line_poly(x, q) * cofactor_poly(x, q)
        built = quotient_torsion_poly(x, q)
        mid = x ** (q - 1) - x ** (q - q * q)
        if composed != built or composed.coeffs[1] != mid:
            failures.append({"x": x.serialize()})
    return cases, failures


def _suite_swap(q, points):
    cases = 0
    failures = []
    for pt in points:
        for xa, xb in zip(pt.coords, pt.coords[1:]):
            cases += 1
            left = cofactor_poly(xb, q) * kernel_line_poly(xb, q)
            right = kernel_line_poly(xa, q) * cofactor_poly(xa, q)
            if not (left == right == torsion_poly(xb, q)):
                failures.append({"point": pt.serialize()})
    return cases, failures


def _suite_shift(q, points):
    cases = 0
    failures = []
    for pt in points:
        for xa, xb in zip(pt.coords, pt.coords[1:]):
            cases += 1
            if quotient_torsion_poly(xa, q) != torsion_poly(xb, q):
                failures.append({"point": pt.serialize()})
    return cases, failures


def _suite_z_recursion(q, points, k1, workers):
    one = k1.one()
    cases = 0
    failures = []
    for pt in points:
        zs = pt.project_to_x0().zcoords
        for za, zb in zip(zs, zs[1:]):
            cases += 1
            if zb * (one + zb) ** (q - 1) != \
                    za.frobenius(q) / (one + za) ** (q - 1):
                failures.append({"point": pt.serialize()})
    # the X0Point constructor revalidates the recursion on every tuple
    cases += len(enumerate_x0(q, 3, k1, workers=workers))
    return cases, failures


def _suite_z_set(q, k1):
    try:
        zset = supersingular_z_values(q, k1)
    except RuntimeError as exc:
        return 1, [{"error": str(exc)}]
    return 1, [] if len(zset) == q else [{"size": len(zset)}]


def _suite_action(q, points, k1):
    scalars = list(k1.nonzero_elements())
    cases = 0
    failures = []
    for pt in points:
        base = pt.project_to_x0()
        for c in scalars:
            cases += 1
            moved = pt.act(c)
            if moved.project_to_x0() != base:
                failures.append({"point": pt.serialize(),
                                 "c": c.serialize()})
    sample = points[0]
    pair_budget = scalars if len(scalars) <= 100 else scalars[:40]
    for c in pair_budget:
        for d in pair_budget:
            cases += 1
            if sample.act(c * d) != sample.act(c).act(d):
                failures.append({"c": c.serialize(), "d": d.serialize()})
    return cases, failures


def identity_suite(q: int, ctx: FieldContext, workers: int = 1) -> list:
    """Exhaustive identity checks for one q; returns machine-readable
    records, one per identity."""
    p, r = prime_power(q)
    k1 = ctx.extension_of_k1(q, 1)
    big = ctx.field(p, 4 * r)
    points = enumerate_xprime(q, 3, k1, workers=workers)

    records = []
    for name, (cases, failures) in (
        ("torsion_factors_through_line", _suite_factorizations(q, big)),
        ("reverse_factorization_middle_coeff",
         _suite_reverse_factorizations(q, big)),
        ("consecutive_swap_identity", _suite_swap(q, points)),
        ("quotient_torsion_shifts", _suite_shift(q, points)),
        ("z_recursion", _suite_z_recursion(q, points, k1, workers)),
        ("supersingular_z_set_triple", _suite_z_set(q, k1)),
        ("scaling_action", _suite_action(q, points, k1)),
    ):
        records.append({"identity": name, "cases": cases,
                        "passed": not failures,
                        "failures": failures[:5]})
    return records


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def _cmd_verify(cfg: RunConfig) -> int:
    ctx = cfg.context()
    records = identity_suite(cfg.q, ctx, workers=cfg.workers)
    meta = _meta(cfg, "verify", ctx)
    ok = all(rec["passed"] for rec in records)
    if cfg.format == "json":
        payload = {"meta": _json_meta(meta), "checks": records,
                   "passed": ok}
        sys.stdout.write(_emit_json(payload))
    else:
        rows = [["identity", "cases", "passed"]]
        rows += [[rec["identity"], rec["cases"], rec["passed"]]
                 for rec in records]
        sys.stdout.write(_emit_csv(meta, rows))
    return EXIT_OK if ok else EXIT_VERIFY_FAILED


def _cmd_enumerate(cfg: RunConfig) -> int:
    ctx = cfg.context()
    L = ctx.extension_of_k1(cfg.q, cfg.m_first)
    if cfg.m_first != cfg.m_last:
        raise UsageError("enumerate takes a single extension, not a range")
    if cfg.variant == "xprime":
        pts = enumerate_xprime(cfg.q, cfg.n, L, workers=cfg.workers)
    else:
        pts = enumerate_x0(cfg.q, cfg.n, L, workers=cfg.workers)
    if cfg.supersingular_only:
        pts = [pt for pt in pts if pt.is_supersingular()]
    meta = _meta(cfg, "enumerate", ctx)
    meta["field"] = L.serialize()
    meta["affine_only"] = True
    meta["count"] = len(pts)
    if cfg.format == "json":
        payload = {"meta": _json_meta(meta),
                   "points": [pt.serialize() for pt in pts]}
        sys.stdout.write(_emit_json(payload))
    else:
        width = cfg.n if cfg.variant == "xprime" else cfg.n - 1
        names = [f"x{i}" for i in range(1, width + 1)] \
            if cfg.variant == "xprime" \
            else [f"Z{i}" for i in range(2, width + 2)]
        rows = [names] + [pt.serialize() for pt in pts]
        sys.stdout.write(_emit_csv(meta, rows))
    return EXIT_OK


def _cmd_count(cfg: RunConfig) -> int:
    ctx = cfg.context()
    report = count_points(cfg.q, cfg.n, cfg.variant, cfg.m_first,
                          cfg.m_last, ctx=ctx, workers=cfg.workers)
    meta = _meta(cfg, "count", ctx)
    if cfg.format == "json":
        payload = {"meta": _json_meta(meta), "report": report.to_json_dict()}
        sys.stdout.write(_emit_json(payload))
    else:
        rows = report.csv_rows()
        rows.append(["supersingular_over_k1", "", "",
                     report.supersingular_count])
        sys.stdout.write(_emit_csv(meta, rows))
    return EXIT_OK


def _cmd_zeta(cfg: RunConfig) -> int:
    if cfg.genus is None:
        raise UsageError("zeta requires --genus")
    if cfg.n != 2:
        raise UsageError(
            "zeta is wired to the quadratic level (n = 2), the only one "
            "with a built-in projective count convention")
    ctx = cfg.context()
    counts = [hermitian_affine_count(cfg.q, m, ctx) + 1
              for m in range(cfg.m_first, cfg.m_last + 1)]
    report = zeta_consistency(counts, cfg.genus, cfg.q**2)
    meta = _meta(cfg, "zeta", ctx)
    if cfg.format == "json":
        payload = {"meta": _json_meta(meta), "report": report.to_json_dict()}
        sys.stdout.write(_emit_json(payload))
    else:
        rows = [["m", "projective_count", "count_residual"]]
        for i, (cnt, res) in enumerate(zip(report.counts,
                                           report.count_residuals)):
            rows.append([cfg.m_first + i, cnt, str(res)])
        rows.append(["symmetry_residual", str(report.symmetry_residual), ""])
        rows.append(["weil_deviation", report.weil_deviation, ""])
        sys.stdout.write(_emit_csv(meta, rows))
    return EXIT_OK


_COMMANDS = {
    "verify": _cmd_verify,
    "enumerate": _cmd_enumerate,
    "count": _cmd_count,
    "zeta": _cmd_zeta,
}


def _add_common_flags(sub: argparse.ArgumentParser):
    sub.add_argument("--q", type=int, default=None,
                     help="base field size, a prime power")
    sub.add_argument("--n", type=int, default=None, help="tower level")
    sub.add_argument("--variant", choices=("xprime", "x0"), default=None,
                     help="x-coordinate tower or its Z-coordinate quotient")
    sub.add_argument("--ext", default=None,
                     help="extension index m or range m1..m2 over GF(q^2)")
    sub.add_argument("--format", choices=("json", "csv"), default=None)
    sub.add_argument("--genus", type=int, default=None,
                     help="externally supplied genus (zeta)")
    sub.add_argument("--supersingular-only", action="store_true",
                     dest="supersingular_only")
    sub.add_argument("--workers", type=int, default=None)
    sub.add_argument("--cap", type=int, default=None,
                     help="field size cap")
    sub.add_argument("--modulus", action="append", default=None,
                     metavar="p^m/c0,c1,...",
                     help="explicit field modulus (repeatable)")
    sub.add_argument("--config", default=None,
                     help="flat key = value config file")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="drintower",
        description="Recursive curve towers from rank-2 Drinfeld modules: "
                    "identity verification, enumeration, counting, zeta "
                    "consistency.")
    parser.add_argument("--version", action="version",
                        version=f"drintower {__version__}")
    subs = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (
        ("verify", "run the exhaustive identity suites for one q"),
        ("enumerate", "list tower points over one extension field"),
        ("count", "count points over a range of extensions"),
        ("zeta", "zeta consistency residuals for the quadratic level"),
    ):
        sub = subs.add_parser(name, help=help_text)
        _add_common_flags(sub)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _build_config(args)
        return _COMMANDS[args.command](cfg)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except CapExceededError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP


if __name__ == "__main__":
    sys.exit(main())
