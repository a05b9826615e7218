"""Command-line entry point: ``avlab <subcommand> [flags]``.

Every artifact written with ``--out`` starts with the serialized
ExperimentConfig: a ``# config {...}`` line for text outputs, a
``{"record": "config", ...}`` line for JSON-lines outputs.

Exit status: 0 on success, 1 when a check fails or a VIOLATION is
recorded, 2 on usage errors, 3 when a Groebner budget is exhausted.
"""
from __future__ import annotations

import argparse
import json
import math
import random
import sys
from dataclasses import asdict, dataclass, field as dc_field
from pathlib import Path
from typing import Sequence

from .field import FieldConfig
from .groebner import Budget, BudgetExceeded, Ideal, buchberger, eliminate, format_basis
from .orders import TermOrder, degrevlex, lex, random_weight_order
from .ring import parse_polys, ring_from_text

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3


class UsageError(ValueError):
    pass


@dataclass
class ExperimentConfig:
    command: str
    field: str = "prime:32003"
    m: int | None = None
    n: int | None = None
    d: list[int] | None = None
    seed: int = 0
    orders: str | None = None
    trials: int = 1
    budget: str | None = None
    inputs: dict = dc_field(default_factory=dict)
    out: str | None = None
    options: dict = dc_field(default_factory=dict)

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True)

    def field_config(self) -> FieldConfig:
        return FieldConfig.parse(self.field)

    def gb_budget(self) -> Budget | None:
        return Budget.parse(self.budget) if self.budget else None

    def order_count(self, default: int | str = 25) -> int | str:
        if self.orders is None:
            return default
        if self.orders == "all":
            return "all"
        k = int(self.orders)
        if k < 1:
            raise UsageError("--orders must be positive or 'all'")
        return k


class Output:
    """Collects text and writes it, config header first, to --out or stdout."""

    def __init__(self, cfg: ExperimentConfig, jsonl: bool = False):
        self.cfg = cfg
        self.jsonl = jsonl
        self.lines: list[str] = []

    def add(self, line: str = "") -> None:
        self.lines.append(line)

    def flush(self) -> None:
        if self.cfg.out:
            head = (json.dumps({"record": "config", **asdict(self.cfg)}, sort_keys=True) if self.jsonl
                    else "# config " + self.cfg.to_json())
            with open(self.cfg.out, "a" if self.jsonl else "w") as fh:
                fh.write(head + "\n")
                for ln in self.lines:
                    fh.write(ln + "\n")
        else:
            for ln in self.lines:
                print(ln)


# --------------------------------------------------------------------------
# helpers

def _read_ideal(path: str, fld: FieldConfig) -> Ideal:
    lines = Path(path).read_text().splitlines()
    body = [ln.split("#", 1)[0] for ln in lines]
    ring = ring_from_text(body, fld)
    return Ideal(ring, parse_polys(ring, body))


def _order(spec: str, ring, seed: int) -> TermOrder:
    if spec == "lex":
        return lex(ring)
    if spec in ("degrevlex", "grevlex"):
        return degrevlex(ring)
    if spec == "random":
        return random_weight_order(ring, random.Random(seed))
    if spec.startswith("lex:") or spec.startswith("degrevlex:"):
        kind, _, names = spec.partition(":")
        var_order = [v.strip() for v in names.split(";")]
        return (lex if kind == "lex" else degrevlex)(ring, var_order)
    if spec.startswith("matrix:"):
        return TermOrder(json.loads(spec[7:]), ring.nvars, "matrix", ring)
    raise UsageError(f"unknown order {spec!r}")


def _family(cfg: ExperimentConfig):
    from .linear_spaces import LinearSpaceFamily, sample_generic_family
    fld = cfg.field_config()
    path = cfg.inputs.get("family")
    if path:
        return LinearSpaceFamily.parse(Path(path).read_text(), fld)
    if cfg.m is None or cfg.n is None or cfg.d is None:
        raise UsageError("give --family FILE or --m --n --d for a seeded random family")
    bound = None if fld.kind == "prime" else 9
    return sample_generic_family(cfg.m, cfg.n, cfg.d, cfg.seed, fld, bound)


def _need(cfg: ExperimentConfig, *names: str) -> None:
    missing = [k for k in names if getattr(cfg, k) is None]
    if missing:
        raise UsageError("missing " + ", ".join("--" + k for k in missing))


# --------------------------------------------------------------------------
# subcommands

def cmd_gb(cfg: ExperimentConfig, out: Output) -> int:
    I = _read_ideal(cfg.inputs["ideal"], cfg.field_config())
    order = _order(cfg.options["order"], I.ring, cfg.seed)
    out.add(format_basis(buchberger(I, order, cfg.gb_budget())))
    return EXIT_OK


def cmd_eliminate(cfg: ExperimentConfig, out: Output) -> int:
    I = _read_ideal(cfg.inputs["ideal"], cfg.field_config())
    keep = [v.strip() for v in cfg.options["keep"].split(";") if v.strip()]
    unknown = [v for v in keep if v not in I.ring.index]
    if unknown:
        raise UsageError(f"unknown variables in --keep: {unknown}")
    E = eliminate(I, keep, budget=cfg.gb_budget())
    for g in E.gens:
        out.add(g.to_str())
    return EXIT_OK


def cmd_bv_present(cfg: ExperimentConfig, out: Output) -> int:
    from .linear_spaces import bv_kernel
    res = bv_kernel(_family(cfg), budget=cfg.gb_budget())
    out.add(res.text() if res.ideal.gens else "0")
    return EXIT_OK


def cmd_av_present(cfg: ExperimentConfig, out: Output) -> int:
    from .linear_spaces import av_presentation
    V = _family(cfg)
    route = cfg.options["route"]
    res = av_presentation(V, route, cfg.options["index"], cfg.gb_budget())
    if route != "both":
        out.add(res.text() if res.ideal.gens else "0")
        return EXIT_OK
    direct, diag, equal = res
    out.add("# direct")
    out.add(direct.text() if direct.ideal.gens else "0")
    out.add("# diagonal")
    out.add(diag.text() if diag.ideal.gens else "0")
    out.add(f"# equal: {str(equal).lower()}")
    return EXIT_OK if equal else EXIT_FAIL


def cmd_polymatroid(cfg: ExperimentConfig, out: Output) -> int:
    from .polymatroid import SetSystem, check_pseudo_white, is_base, transversal_base, white_check
    fld = cfg.field_config()
    C = SetSystem.parse(Path(cfg.inputs["sets"]).read_text())
    B = transversal_base(C)
    mode = cfg.options["mode"]
    out.add(f"# base vectors: {len(B)}, is_base: {str(is_base(B)).lower()}")
    for v in B:
        out.add(" ".join(map(str, v)))
    if mode == "white":
        verdict = white_check(B, fld, cfg.gb_budget())
        out.add(f"# symmetric exchange quadrics generate the toric ideal: {verdict}")
        return {"holds": EXIT_OK, "fails": EXIT_FAIL, "budget-exceeded": EXIT_BUDGET}[verdict]
    if mode == "pseudo-white":
        ok = check_pseudo_white(C, fld)
        out.add(f"# Hibi relations plus permutation binomials present the kernel: {str(ok).lower()}")
        return EXIT_OK if ok else EXIT_FAIL
    return EXIT_OK


def cmd_hibi(cfg: ExperimentConfig, out: Output) -> int:
    from .lattice import PointPoset, hibi_relations, join_meet
    from .ring import var_name
    _need(cfg, "d")
    H = PointPoset.truncated(cfg.d, cfg.n) if cfg.n is not None else PointPoset.product(cfg.d)
    ring = H.ring(cfg.field_config())
    out.add(f"# points: {len(H)}, maximal chains: {H.maximal_chain_count()}, "
            f"linear extensions: {H.linear_extension_count()}")
    out.add("# edges")
    out.add(H.edge_list())
    if H.is_lattice():
        out.add("# relations")
        for f in hibi_relations(H, ring):
            out.add(f.to_str())
        return EXIT_OK
    # truncated: only pairs whose join survives give Hibi relations
    s = lambda p: ring.var(var_name("s", *p))
    out.add("# relations (pairs whose join stays in the poset)")
    escaped = []
    for a, b in H.incomparable_pairs():
        j, mt = join_meet(a, b)
        if j in H:
            out.add((s(a) * s(b) - s(j) * s(mt)).to_str())
        else:
            escaped.append((a, b))
    out.add(f"# incomparable pairs with join outside: {len(escaped)}")
    for a, b in escaped:
        out.add(f"# {(s(a) * s(b)).to_str()}")
    return EXIT_OK


def cmd_asl_check(cfg: ExperimentConfig, out: Output) -> int:
    from .generic import krull_dim_degree, display_relations, straightening_relations, veronese_family
    from .groebner import Ideal as _Ideal
    from .lattice import asl_verify
    fld = cfg.field_config()
    if cfg.options.get("veronese"):
        _need(cfg, "m", "n")
        V = veronese_family(cfg.n, cfg.m, fld, cfg.seed)
    else:
        V = _family(cfg)
        if V.is_monomial():
            raise UsageError("asl-check needs a generic family; coordinate subspaces have no straightening law here")
    res = straightening_relations(V, cfg.gb_budget())
    I = _Ideal(res.ring, res.presentation)
    k = cfg.order_count("all")
    if k != "all" and k >= res.poset.linear_extension_count():
        k = "all"
    verdict = asl_verify(I, res.poset, k, cfg.seed, cfg.gb_budget())
    dd = krull_dim_degree(V, I, cfg.gb_budget())
    out.add("# straightening relations")
    for line in display_relations(res):
        out.add(line)
    out.add(f"# asl: {'pass' if verdict.passed else 'FAIL'} ({verdict.mode}, "
            f"{verdict.extensions_tested} of {verdict.extension_count} extensions) {verdict.reason}".rstrip())
    out.add(f"# dim {dd.dim} (formula {dd.dim_formula}), degree {dd.degree} (maximal chains {dd.degree_chains})")
    return EXIT_OK if verdict.passed and dd.consistent else EXIT_FAIL


def cmd_generic_check(cfg: ExperimentConfig, out: Output) -> int:
    from .generic import verify_generic_initial
    _need(cfg, "m", "n")
    k = cfg.order_count()
    if k == "all":
        raise UsageError("generic-check samples orders; give an integer --orders")
    v = verify_generic_initial(cfg.m, cfg.n, cfg.seed, k, cfg.trials, cfg.options["family"],
                               cfg.field_config(), cfg.gb_budget())
    for c in v.checks:
        out.add(json.dumps({"record": "trial", "check": "generic-initial", "m": v.m, "n": v.n,
                            "seed": cfg.seed, "order": {"weights": c.order},
                            "outcome": {"ok": "pass", "mismatch": "mismatch"}.get(c.status, c.status)},
                           sort_keys=True))
    summary = {k2: v2 for k2, v2 in asdict(v).items() if k2 != "checks"}
    summary["record"] = "verdict"
    summary["passed"] = v.passed
    out.add(json.dumps(summary, sort_keys=True))
    return EXIT_OK if v.passed else EXIT_FAIL


def cmd_primdec_check(cfg: ExperimentConfig, out: Output) -> int:
    from .linear_spaces import primdec_check
    v = primdec_check(_family(cfg), cfg.gb_budget())
    out.add(f"# product equals intersection of powers: {str(v.equal).lower()}")
    out.add(f"# component ranks as expected: {str(v.ranks_ok).lower()}")
    for g in v.lhs.gens:
        out.add(g.to_str())
    return EXIT_OK if v.equal and v.ranks_ok else EXIT_FAIL


def cmd_conjecture(cfg: ExperimentConfig, out: Output) -> int:
    from . import harness
    _need(cfg, "m", "n")
    conj = cfg.options["id"]
    k = cfg.order_count(20)
    if k == "all":
        if conj != "4.2":
            raise UsageError("--orders all is only meaningful for the lex family (--id 4.2)")
        k = math.factorial(cfg.m * cfg.n)
    explicit = None
    if cfg.inputs.get("tensor"):
        explicit = json.loads(Path(cfg.inputs["tensor"]).read_text())
    budget = cfg.gb_budget() or Budget(max_pairs=20_000)
    rc = harness.RunConfig(conj, cfg.m, cfg.n, cfg.seed, cfg.trials, k, cfg.options["source"],
                           cfg.options["density"], cfg.field, budget.max_pairs, explicit,
                           cfg.options["validate"], cfg.options["timing"])
    if rc.source == "structured":
        reports, s = harness.structured_sweep(rc)
        info = f"{s.patterns} patterns, {s.admissible} admissible, {s.classes} distinct ideals, {s.orders} orders"
    else:
        reports = harness.run_trials(rc, cfg.options["workers"])
        info = f"{rc.trials} instances"
    for r in reports:
        out.add(r.to_json())
    counts = {o: sum(r.outcome == o for r in reports) for o in ("pass", "VIOLATION", "budget-exceeded")}
    print(f"conjecture {conj} m={cfg.m} n={cfg.n}: {info}; pass={counts['pass']} "
          f"VIOLATION={counts['VIOLATION']} budget-exceeded={counts['budget-exceeded']}", file=sys.stderr)
    return EXIT_FAIL if counts["VIOLATION"] else EXIT_OK


def cmd_summary(cfg: ExperimentConfig, out: Output) -> int:
    from .harness import report_summary
    s = report_summary(cfg.inputs["reports"])
    out.add(s.table())
    return EXIT_FAIL if s.total("VIOLATION") else EXIT_OK


COMMANDS = {
    "gb": cmd_gb,
    "eliminate": cmd_eliminate,
    "av-present": cmd_av_present,
    "bv-present": cmd_bv_present,
    "polymatroid": cmd_polymatroid,
    "hibi": cmd_hibi,
    "asl-check": cmd_asl_check,
    "generic-check": cmd_generic_check,
    "primdec-check": cmd_primdec_check,
    "conjecture": cmd_conjecture,
    "summary": cmd_summary,
}
JSONL_COMMANDS = {"conjecture", "generic-check"}


# --------------------------------------------------------------------------
# argument parsing

def _int_list(text: str) -> list[int]:
    try:
        return [int(v) for v in text.replace(",", " ").split()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected integers, got {text!r}") from exc


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--field", default="prime:32003", help="prime:P or rationals")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--m", type=int)
    common.add_argument("--n", type=int)
    common.add_argument("--d", type=_int_list, help="comma separated, e.g. 2,2,2")
    common.add_argument("--orders", help="K or 'all' (default: 25, 20 for conjecture, all for asl-check)")
    common.add_argument("--trials", type=int, default=1)
    common.add_argument("--out", help="artifact path (config header first)")
    common.add_argument("--budget", help="Groebner budget, e.g. pairs=20000")

    p = argparse.ArgumentParser(prog="avlab", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("gb", parents=[common], help="reduced Groebner basis")
    s.add_argument("--ideal", required=True)
    s.add_argument("--order", default="degrevlex",
                   help="lex | degrevlex | random | lex:v1;v2;... | matrix:[[...]]")

    s = sub.add_parser("eliminate", parents=[common], help="intersect an ideal with a subring")
    s.add_argument("--ideal", required=True)
    s.add_argument("--keep", required=True, help="variables to keep, separated by ';'")

    for name, helptext in (("av-present", "presentation of the diagonal algebra A(V)"),
                           ("bv-present", "presentation of B(V) over T(V)"),
                           ("primdec-check", "product of the I_i versus intersection of powers")):
        s = sub.add_parser(name, parents=[common], help=helptext)
        s.add_argument("--family", help="file: 'm n d1..dm' then coefficient rows")
        if name == "av-present":
            s.add_argument("--route", choices=["direct", "diagonal", "both"], default="direct")
            s.add_argument("--index", choices=["full", "truncated"], default="full")

    s = sub.add_parser("polymatroid", parents=[common], help="transversal polymatroid base rings")
    s.add_argument("--sets", required=True, help="one set per line")
    s.add_argument("--mode", choices=["base", "white", "pseudo-white"], default="base")

    sub.add_parser("hibi", parents=[common], help="lattice H(d) or H_n(d) and its Hibi relations")

    s = sub.add_parser("asl-check", parents=[common], help="straightening relations and ASL verification")
    s.add_argument("--family")
    s.add_argument("--veronese", action="store_true", help="m generic copies of all linear forms in n variables")

    s = sub.add_parser("generic-check", parents=[common], help="in(I_2(L)) versus J for generic L")
    s.add_argument("--family-orders", dest="order_family", choices=["row-increasing", "any"],
                   default="row-increasing")

    s = sub.add_parser("conjecture", parents=[common], help="falsification runs")
    s.add_argument("--id", required=True, choices=["1.1", "4.2"])
    s.add_argument("--source", choices=["uniform-random", "sparse", "structured", "explicit"],
                   default="uniform-random")
    s.add_argument("--density", type=float, default=0.5)
    s.add_argument("--tensor", help="JSON m x n x n coefficient array for --source explicit")
    s.add_argument("--workers", type=int, default=1)
    s.add_argument("--validate", action="store_true", help="re-check every basis by S-pair reduction")
    s.add_argument("--timing", action="store_true", help="record wall time (output no longer byte-stable)")

    s = sub.add_parser("summary", parents=[common], help="aggregate a JSON-lines report file")
    s.add_argument("reports")
    return p


def config_from_args(ns: argparse.Namespace) -> ExperimentConfig:
    inputs, options = {}, {}
    for key in ("ideal", "family", "sets", "tensor", "reports"):
        if getattr(ns, key, None):
            inputs[key] = getattr(ns, key)
    for key in ("order", "keep", "route", "index", "mode", "veronese", "id", "source", "density",
                "workers", "validate", "timing"):
        if hasattr(ns, key):
            options[key] = getattr(ns, key)
    if hasattr(ns, "order_family"):
        options["family"] = ns.order_family
    if ns.command == "conjecture" and ns.source == "explicit" and not ns.tensor:
        raise UsageError("--source explicit needs --tensor FILE")
    return ExperimentConfig(ns.command, ns.field, ns.m, ns.n, ns.d, ns.seed, ns.orders, ns.trials,
                            ns.budget, inputs, ns.out, options)


def dispatch(cfg: ExperimentConfig) -> int:
    try:
        cfg.field_config()
        cfg.gb_budget()
        cfg.order_count()
    except ValueError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    out = Output(cfg, jsonl=cfg.command in JSONL_COMMANDS)
    try:
        status = COMMANDS[cfg.command](cfg, out)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except BudgetExceeded as exc:
        out.add(f"# budget exceeded: {exc}")
        out.flush()
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    out.flush()
    return status


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    try:
        cfg = config_from_args(ns)
    except UsageError as exc:
        parser.error(str(exc))
    return dispatch(cfg)


if __name__ == "__main__":
    sys.exit(main())
