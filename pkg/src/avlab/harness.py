"""Randomized and exhaustive falsification runs for the squarefree-initial-ideal conjectures.

Conjecture "1.1": for every coefficient choice a_ijk and every term order,
in(I_2(L)) is Z^m-squarefree.  Conjecture "4.2": if each row of L has
linearly independent forms, every lex initial ideal is generated in
multidegree <= (1, ..., 1).  Both reduce to the same check on the minimal
generators of an initial ideal; they differ in the admissible coefficients
and the order family.

Reports are JSON lines.  A run file starts with one ``config`` record
followed by one ``trial`` record per (instance, order).
"""
from __future__ import annotations

import hashlib
import itertools
import json
import math
import random
import time
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Callable, Iterable, Sequence

from .field import FieldConfig
from .generic import tensor_rows_independent
from .groebner import Budget, BudgetExceeded, MonomialIdeal, buchberger, validating
from .linalg import rref
from .linear_spaces import l_from_tensor
from .orders import TermOrder, lex, random_weight_order
from .ring import Monomial, RingContext

SCHEMA_VERSION = 1
CONJECTURES = ("1.1", "4.2")


def derive_seed(master: int, *path) -> int:
    """Stable per-trial seed: hash(master seed, trial index, ...)."""
    h = hashlib.sha256(":".join(str(x) for x in (master,) + path).encode()).digest()
    return int.from_bytes(h[:8], "big")


# --------------------------------------------------------------------------
# the checker

def zm_offender(J: MonomialIdeal) -> Monomial | None:
    """First minimal generator whose multidegree exceeds (1,...,1), if any."""
    for g in J.gens:
        if any(k > 1 for k in J.ring.multidegree_of(g)):
            return g
    return None


def is_Zm_squarefree(J: MonomialIdeal) -> bool | Monomial:
    """True, or the first offending generator."""
    off = zm_offender(J)
    return True if off is None else off


Checker = Callable[[MonomialIdeal], "Monomial | None"]


# --------------------------------------------------------------------------
# reports

@dataclass
class TrialReport:
    conjecture: str
    m: int
    n: int
    seed: int
    source: dict
    order: dict
    coverage: str
    outcome: str  # pass | VIOLATION | budget-exceeded
    violation: dict | None = None
    note: str = ""
    wall_time: float | None = None
    schema_version: int = SCHEMA_VERSION

    def to_json(self) -> str:
        d = asdict(self)
        d["record"] = "trial"
        return json.dumps(d, sort_keys=True)

    @classmethod
    def from_dict(cls, d: dict) -> "TrialReport":
        d = {k: v for k, v in d.items() if k != "record"}
        return cls(**d)


@dataclass
class CoefficientSource:
    """``uniform-random`` (seeded), ``structured`` ({0,1} pattern) or ``explicit``."""

    kind: str
    tensor: list
    params: dict = field(default_factory=dict)

    def descriptor(self) -> dict:
        return {"kind": self.kind, "tensor": self.tensor, **self.params}


def evaluate(conjecture: str, a: Sequence, order: TermOrder, field: FieldConfig,
             budget: Budget | None = None, checker: Checker = zm_offender) -> tuple[str, dict | None, str]:
    """(outcome, violation, note) for one coefficient tensor and one order."""
    L = l_from_tensor(a, field)
    I = L.ideal()
    if I.is_zero():
        return "pass", None, "empty ideal"
    if order.nvars != L.ring.nvars:
        raise ValueError("order does not match the instance size")
    try:
        ini = buchberger(I, order, budget).initial_ideal()
    except BudgetExceeded as exc:
        return "budget-exceeded", None, str(exc)
    off = checker(ini)
    if off is None:
        return "pass", None, ""
    ring = L.ring
    return "VIOLATION", {"monomial": ring.monomial_str(off),
                         "multidegree": list(ring.multidegree_of(off)),
                         "initial_ideal": ini.strings()}, ""


# --------------------------------------------------------------------------
# order families

def lex_orders(ring: RingContext, count: int, rng: random.Random) -> tuple[list[TermOrder], str]:
    """All lex orders when (#vars)! <= count, else ``count`` distinct random permutations."""
    names = list(ring.names)
    total = math.factorial(len(names))
    if total <= count:
        return [lex(ring, list(p)) for p in itertools.permutations(names)], "exhaustive"
    seen = set()
    out = []
    while len(out) < count:
        p = tuple(rng.sample(names, len(names)))
        if p not in seen:
            seen.add(p)
            out.append(lex(ring, list(p)))
    return out, "sampled"


def order_family(conjecture: str, ring: RingContext, count: int, rng: random.Random) -> tuple[list[TermOrder], str]:
    if conjecture == "1.1":
        return [random_weight_order(ring, rng) for _ in range(count)], "sampled"
    if conjecture == "4.2":
        return lex_orders(ring, count, rng)
    raise ValueError(f"unknown conjecture {conjecture!r}")


def order_descriptor(order: TermOrder, ring: RingContext) -> dict:
    d = order.to_json()
    if order.name == "lex":
        d["permutation"] = [ring.names[row.index(1)] for row in order.weights]
    return d


# --------------------------------------------------------------------------
# instance sources

def ideal_key(a: Sequence, field: FieldConfig) -> tuple:
    """Canonical form of I_2(L): per row pair, the RREF of its bihomogeneous minors.

    I_2(L) is generated by its degree-(e_x + e_y) pieces, so equal keys mean
    equal ideals.
    """
    m, n = len(a), len(a[0])
    out = []
    for x, y in itertools.combinations(range(m), 2):
        rows = []
        for c, e in itertools.combinations(range(n), 2):
            rows.append([field(a[x][c][k] * a[y][e][l] - a[x][e][k] * a[y][c][l])
                         for k in range(n) for l in range(n)])
        R, _ = rref(rows, field)
        out.append(tuple(tuple(r) for r in R))
    return tuple(out)


def structured_patterns(m: int, n: int, values: Sequence[int] = (0, 1)) -> Iterable[list]:
    for bits in itertools.product(values, repeat=m * n * n):
        yield [[[bits[(i * n + j) * n + k] for k in range(n)] for j in range(n)] for i in range(m)]


def random_tensor(m: int, n: int, rng: random.Random, field: FieldConfig, density: float = 1.0,
                  values: Sequence[int] | None = None) -> list:
    def entry():
        if rng.random() >= density:
            return 0
        if values is not None:
            return rng.choice(values)
        return rng.randrange(field.p) if field.kind == "prime" else rng.randint(-9, 9)
    return [[[entry() for _ in range(n)] for _ in range(n)] for _ in range(m)]


def admissible(conjecture: str, a: Sequence, field: FieldConfig) -> bool:
    return conjecture != "4.2" or tensor_rows_independent(a, field)


# --------------------------------------------------------------------------
# runs

@dataclass
class RunConfig:
    conjecture: str
    m: int
    n: int
    seed: int = 0
    trials: int = 10
    orders: int = 20
    source: str = "uniform-random"   # uniform-random | structured | sparse | explicit
    density: float = 0.5
    field: str = "prime:32003"
    budget_pairs: int = 20_000
    explicit: list | None = None
    validate: bool = False
    timing: bool = False

    def to_json(self) -> str:
        d = asdict(self)
        d["record"] = "config"
        d["schema_version"] = SCHEMA_VERSION
        return json.dumps(d, sort_keys=True)


def _trial(cfg: RunConfig, index: int) -> list[TrialReport]:
    """One random instance (regenerated until admissible) checked under its own orders."""
    fld = FieldConfig.parse(cfg.field)
    seed = derive_seed(cfg.seed, cfg.conjecture, cfg.m, cfg.n, index)
    rng = random.Random(seed)
    if cfg.source == "explicit":
        a = cfg.explicit
        if not admissible(cfg.conjecture, a, fld):
            raise ValueError("explicit tensor violates the row-independence precondition")
    else:
        for _ in range(1000):
            if cfg.source == "uniform-random":
                a = random_tensor(cfg.m, cfg.n, rng, fld)
            elif cfg.source == "sparse":
                a = random_tensor(cfg.m, cfg.n, rng, fld, cfg.density, values=(1, -1, 2))
            else:
                raise ValueError(f"unknown source {cfg.source!r}")
            if admissible(cfg.conjecture, a, fld):
                break
        else:
            raise RuntimeError("could not sample an admissible instance")
        a = [[[int(fld(v)) if fld.kind == "prime" else v for v in row] for row in Ai] for Ai in a]
    ring = RingContext.t_ring(cfg.m, cfg.n, fld)
    orders, coverage = order_family(cfg.conjecture, ring, cfg.orders, rng)
    src = {"kind": cfg.source, "tensor": a}
    if cfg.source == "sparse":
        src["density"] = cfg.density
    return _check_orders(cfg, fld, a, orders, coverage, seed, src, ring)


def _check_orders(cfg, fld, a, orders, coverage, seed, src, ring) -> list[TrialReport]:
    out = []
    budget = Budget(max_pairs=cfg.budget_pairs)
    for o in orders:
        t0 = time.perf_counter()
        outcome, viol, note = evaluate(cfg.conjecture, a, o, fld, budget)
        out.append(TrialReport(cfg.conjecture, cfg.m, cfg.n, seed, src, order_descriptor(o, ring),
                               coverage, outcome, viol, note,
                               round(time.perf_counter() - t0, 6) if cfg.timing else None))
    return out


def _run_chunk(args):
    cfg, indices = args
    if cfg.validate:
        with validating():
            return [_trial(cfg, i) for i in indices]
    return [_trial(cfg, i) for i in indices]


def run_trials(cfg: RunConfig, workers: int = 1) -> list[TrialReport]:
    """``cfg.trials`` independent instances; results are ordered by trial index."""
    if cfg.conjecture not in CONJECTURES:
        raise ValueError(f"conjecture must be one of {CONJECTURES}")
    idx = list(range(cfg.trials))
    if workers <= 1:
        groups = _run_chunk((cfg, idx))
    else:
        chunks = [(cfg, idx[k::workers]) for k in range(workers)]
        with ProcessPoolExecutor(workers) as pool:
            parts = list(pool.map(_run_chunk, chunks))
        by_index = {}
        for k, part in enumerate(parts):
            for i, reps in zip(idx[k::workers], part):
                by_index[i] = reps
        groups = [by_index[i] for i in idx]
    return [r for g in groups for r in g]


@dataclass
class SweepSummary:
    patterns: int
    admissible: int
    classes: int
    orders: int
    coverage: str


def structured_sweep(cfg: RunConfig, values: Sequence[int] = (0, 1)) -> tuple[list[TrialReport], SweepSummary]:
    """Every {0,1} coefficient pattern, deduplicated by the ideal it generates.

    All instances share one order set (drawn from the master seed), so
    patterns generating the same ideal have the same outcome; each class is
    checked once and reported with its multiplicity and first pattern.
    """
    fld = FieldConfig.parse(cfg.field)
    ring = RingContext.t_ring(cfg.m, cfg.n, fld)
    rng = random.Random(derive_seed(cfg.seed, cfg.conjecture, cfg.m, cfg.n, "sweep"))
    orders, coverage = order_family(cfg.conjecture, ring, cfg.orders, rng)
    classes: dict[tuple, list] = {}
    total = ok = 0
    for a in structured_patterns(cfg.m, cfg.n, values):
        total += 1
        if not admissible(cfg.conjecture, a, fld):
            continue
        ok += 1
        k = ideal_key(a, fld)
        if k in classes:
            classes[k][1] += 1
        else:
            classes[k] = [a, 1]
    reports = []
    ctx = validating() if cfg.validate else _null()
    with ctx:
        for number, (a, mult) in enumerate(classes.values()):
            src = {"kind": "structured", "tensor": a, "values": list(values), "multiplicity": mult,
                   "class": number}
            reports.extend(_check_orders(cfg, fld, a, orders, coverage, cfg.seed, src, ring))
    return reports, SweepSummary(total, ok, len(classes), len(orders), coverage)


class _null:
    def __enter__(self):
        return None

    def __exit__(self, *exc):
        return False


# --------------------------------------------------------------------------
# persistence and summaries

def write_reports(path, cfg: RunConfig, reports: Sequence[TrialReport], append: bool = True) -> None:
    """Append a config record and the trial records (single writer)."""
    with open(path, "a" if append else "w") as fh:
        fh.write(cfg.to_json() + "\n")
        for r in reports:
            fh.write(r.to_json() + "\n")


@dataclass
class Summary:
    counts: dict = field(default_factory=dict)   # (conj, m, n) -> Counter
    malformed: list = field(default_factory=list)

    def table(self) -> str:
        lines = [f"{'conjecture':<10} {'m':>2} {'n':>2} {'pass':>8} {'VIOLATION':>9} {'budget':>8}"]
        for key in sorted(self.counts):
            c = self.counts[key]
            lines.append(f"{key[0]:<10} {key[1]:>2} {key[2]:>2} {c['pass']:>8} {c['VIOLATION']:>9} "
                         f"{c['budget-exceeded']:>8}")
        if not self.counts:
            lines.append(f"{'-':<10} {0:>2} {0:>2} {0:>8} {0:>9} {0:>8}")
        lines.append(f"malformed lines: {len(self.malformed)}")
        for ln, text in self.malformed:
            lines.append(f"  line {ln}: {text[:60]}")
        return "\n".join(lines)

    def total(self, outcome: str) -> int:
        return sum(c[outcome] for c in self.counts.values())


def report_summary(path) -> Summary:
    s = Summary()
    with open(path) as fh:
        for ln, line in enumerate(fh, 1):
            line = line.strip()
            if not line:
                continue
            try:
                rec = json.loads(line)
                if rec.get("record") == "config":
                    continue
                key = (str(rec["conjecture"]), int(rec["m"]), int(rec["n"]))
                outcome = rec["outcome"]
                if outcome not in ("pass", "VIOLATION", "budget-exceeded"):
                    raise ValueError(outcome)
            except (ValueError, KeyError, TypeError):
                s.malformed.append((ln, line))
                continue
            s.counts.setdefault(key, Counter())[outcome] += 1
    return s


def read_reports(path) -> list[TrialReport]:
    out = []
    with open(path) as fh:
        for line in fh:
            if line.strip():
                rec = json.loads(line)
                if rec.get("record") == "trial":
                    out.append(TrialReport.from_dict(rec))
    return out


# --------------------------------------------------------------------------
# replay and shrinking

def replay(report: TrialReport, field: FieldConfig | None = None, budget: Budget | None = None,
           checker: Checker = zm_offender) -> tuple[str, dict | None, str]:
    fld = field or FieldConfig.prime()
    order = TermOrder.from_json(report.order)
    return evaluate(report.conjecture, report.source["tensor"], order, fld, budget, checker)


def _drop_row(a, weights, m, n, i):
    keep = [v for v in range(m * n) if v // n != i]
    return [Ai for k, Ai in enumerate(a) if k != i], [[row[v] for v in keep] for row in weights]


def _drop_col(a, weights, m, n, c):
    keep = [v for v in range(m * n) if v % n != c]
    b = [[[a[i][j][k] for k in range(n) if k != c] for j in range(n) if j != c] for i in range(m)]
    return b, [[row[v] for v in keep] for row in weights]


def _valid_order(weights, nvars) -> TermOrder | None:
    try:
        return TermOrder(weights, nvars)
    except ValueError:
        return None


def shrink(report: TrialReport, checker: Checker = zm_offender, field: FieldConfig | None = None,
           budget: Budget | None = None) -> TrialReport:
    """Greedily delete rows, columns and coefficients while the violation persists."""
    if report.outcome != "VIOLATION":
        out = TrialReport(**{**asdict(report)})
        out.note = (out.note + "; " if out.note else "") + "not a violation: returned unchanged"
        return out
    fld = field or FieldConfig.prime()
    a = report.source["tensor"]
    weights = [list(r) for r in report.order["weights"]]
    m, n = report.m, report.n

    def violates(a, weights, m, n):
        if m < 1 or n < 1:
            return None
        if report.conjecture == "4.2" and not tensor_rows_independent(a, fld):
            return None
        order = _valid_order(weights, m * n)
        if order is None:
            return None
        res = evaluate(report.conjecture, a, order, fld, budget, checker)
        return res if res[0] == "VIOLATION" else None

    last = violates(a, weights, m, n)
    if last is None:
        raise ValueError("violation does not replay")
    changed = True
    while changed:
        changed = False
        for i in range(m):
            b, w = _drop_row(a, weights, m, n, i)
            r = violates(b, w, m - 1, n)
            if r:
                a, weights, m, last, changed = b, w, m - 1, r, True
                break
        if changed:
            continue
        for c in range(n):
            b, w = _drop_col(a, weights, m, n, c)
            r = violates(b, w, m, n - 1)
            if r:
                a, weights, n, last, changed = b, w, n - 1, r, True
                break
        if changed:
            continue
        for i, j, k in itertools.product(range(m), range(n), range(n)):
            if a[i][j][k]:
                b = json.loads(json.dumps(a))
                b[i][j][k] = 0
                r = violates(b, weights, m, n)
                if r:
                    a, last, changed = b, r, True
                    break
    order = {"name": report.order.get("name", "matrix"), "weights": weights, "nvars": m * n}
    return TrialReport(report.conjecture, m, n, report.seed,
                       {"kind": "explicit", "tensor": a, "shrunk_from": report.source.get("kind")},
                       order, report.coverage, "VIOLATION", last[1],
                       f"shrunk from {report.m}x{report.n}")
