import json
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from avlab.groebner import MonomialIdeal
from avlab.harness import (
    RunConfig,
    TrialReport,
    evaluate,
    ideal_key,
    is_Zm_squarefree,
    read_reports,
    replay,
    report_summary,
    run_trials,
    shrink,
    structured_sweep,
    write_reports,
    zm_offender,
)
from avlab.field import FieldConfig
from avlab.generic import tensor_rows_independent
from avlab.groebner import Ideal, ideal_equal
from avlab.linear_spaces import l_from_tensor
from avlab.orders import lex
from avlab.ring import RingContext

T = RingContext.t_ring(2, 2)
F = FieldConfig.prime()


def mono(text):
    return T.parse(text).leading_monomial(lex(T))


def test_checker_examples():
    assert is_Zm_squarefree(MonomialIdeal(T, [mono("t[1,2]*t[2,2]")])) is True
    off = is_Zm_squarefree(MonomialIdeal(T, [mono("t[1,1]^2")]))
    assert off == mono("t[1,1]^2") and T.multidegree_of(off) == (2, 0)
    off = zm_offender(MonomialIdeal(T, [mono("t[1,1]*t[1,2]")]))
    assert T.multidegree_of(off) == (2, 0)


@given(st.lists(st.tuples(*[st.integers(0, 2)] * 4), min_size=1, max_size=5))
def test_checker_agrees_with_brute_force(gens):
    J = MonomialIdeal(T, gens)
    brute = all(max(g[0] + g[1], g[2] + g[3]) <= 1 for g in J.gens)
    assert (zm_offender(J) is None) == brute


def test_identity_coefficients_pass():
    a = [[[int(j == k) for k in range(3)] for j in range(3)] for _ in range(2)]
    rng = random.Random(0)
    from avlab.orders import random_weight_order
    ring = RingContext.t_ring(2, 3)
    for _ in range(10):
        assert evaluate("1.1", a, random_weight_order(ring, rng), F)[0] == "pass"


def test_empty_ideal_passes():
    a = [[[0, 0], [0, 0]], [[1, 0], [0, 1]]]
    assert evaluate("1.1", a, lex(T), F) == ("pass", None, "empty ideal")


def test_determinism_and_replay(tmp_path):
    cfg = RunConfig("1.1", 2, 3, seed=5, trials=4, orders=3)
    a, b = run_trials(cfg), run_trials(cfg)
    assert [r.to_json() for r in a] == [r.to_json() for r in b]
    p1, p2 = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
    write_reports(p1, cfg, a)
    write_reports(p2, cfg, b)
    assert p1.read_bytes() == p2.read_bytes()
    for r in read_reports(p1):
        assert replay(r)[0] == r.outcome
    assert run_trials(RunConfig("1.1", 2, 3, seed=6, trials=1, orders=1))[0].seed != a[0].seed


def test_parallel_matches_serial():
    cfg = RunConfig("4.2", 2, 2, seed=1, trials=3, orders=4)
    assert [r.to_json() for r in run_trials(cfg, workers=2)] == [r.to_json() for r in run_trials(cfg)]


def test_lex_coverage_and_precondition():
    reps = run_trials(RunConfig("4.2", 2, 2, seed=3, trials=1, orders=24))
    assert len(reps) == 24 and reps[0].coverage == "exhaustive"
    perms = {tuple(r.order["permutation"]) for r in reps}
    assert len(perms) == 24
    assert tensor_rows_independent(reps[0].source["tensor"], F)
    reps = run_trials(RunConfig("4.2", 2, 3, seed=3, trials=1, orders=10))
    assert reps[0].coverage == "sampled"
    with pytest.raises(ValueError):
        run_trials(RunConfig("4.2", 2, 2, source="explicit", explicit=[[[1, 1], [1, 1]], [[1, 0], [0, 1]]]))


def test_structured_sweep_22():
    reports, s = structured_sweep(RunConfig("4.2", 2, 2, orders=24))
    assert s.coverage == "exhaustive" and s.orders == 24
    assert all(r.outcome == "pass" for r in reports)
    assert sum(r.source["multiplicity"] for r in reports) == s.admissible * s.orders


def test_ideal_key_is_exact():
    rng = random.Random(0)
    for _ in range(40):
        a = [[[rng.randint(0, 1) for _ in range(2)] for _ in range(2)] for _ in range(3)]
        b = [[[rng.randint(0, 1) for _ in range(2)] for _ in range(2)] for _ in range(3)]
        Ia, Ib = l_from_tensor(a).ideal(), l_from_tensor(b).ideal()
        same = ideal_equal(Ia, Ib) if not (Ia.is_zero() or Ib.is_zero()) else Ia.is_zero() == Ib.is_zero()
        assert (ideal_key(a, F) == ideal_key(b, F)) == same


def test_budget_exceeded_is_reported():
    reps = run_trials(RunConfig("1.1", 3, 3, seed=0, trials=1, orders=2, budget_pairs=1))
    assert {r.outcome for r in reps} == {"budget-exceeded"}
    assert all(r.note for r in reps)


def fake_checker(J):
    # corrupted checker: every generator counts as an offender
    return J.gens[0] if J.gens else None


def test_shrink_with_mutated_checker():
    rep = run_trials(RunConfig("1.1", 3, 3, seed=4, trials=1, orders=1))[0]
    out, viol, _ = replay(rep, checker=fake_checker)
    assert out == "VIOLATION"
    rep.outcome, rep.violation = out, viol
    small = shrink(rep, checker=fake_checker)
    assert small.m == 2 and small.n == 2
    assert sum(1 for Ai in small.source["tensor"] for row in Ai for c in row if c) == 2
    assert replay(small, checker=fake_checker)[0] == "VIOLATION"
    assert shrink(small, checker=fake_checker).source["tensor"] == small.source["tensor"]


def test_shrink_identity_on_pass():
    rep = run_trials(RunConfig("1.1", 2, 2, seed=4, trials=1, orders=1))[0]
    out = shrink(rep)
    assert out.outcome == "pass" and "unchanged" in out.note and out.source == rep.source


def test_summary(tmp_path):
    p = tmp_path / "r.jsonl"
    p.write_text("")
    s = report_summary(p)
    assert s.total("pass") == 0 and "malformed lines: 0" in s.table()
    base = TrialReport("1.1", 2, 2, 0, {"kind": "explicit", "tensor": []}, {}, "sampled", "pass")
    lines = [base.to_json()] * 3
    lines.append(TrialReport(**{**base.__dict__, "outcome": "budget-exceeded"}).to_json())
    p.write_text("\n".join(lines) + "\nnot json\n{\"outcome\": \"pass\"}\n")
    s = report_summary(p)
    c = s.counts[("1.1", 2, 2)]
    assert (c["pass"], c["budget-exceeded"], c["VIOLATION"]) == (3, 1, 0)
    assert len(s.malformed) == 2
    text = p.read_text()
    p.write_text(text + text)
    c2 = report_summary(p).counts[("1.1", 2, 2)]
    assert (c2["pass"], c2["budget-exceeded"]) == (6, 2)


def test_report_json_schema():
    rep = run_trials(RunConfig("1.1", 2, 2, seed=0, trials=1, orders=1))[0]
    d = json.loads(rep.to_json())
    for key in ("schema_version", "conjecture", "m", "n", "seed", "source", "order", "outcome",
                "violation", "wall_time", "coverage"):
        assert key in d
    assert d["wall_time"] is None
    timed = run_trials(RunConfig("1.1", 2, 2, seed=0, trials=1, orders=1, timing=True))[0]
    assert timed.wall_time is not None
