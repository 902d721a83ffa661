import json

import pytest

from IwasawaLambda.errors import PreconditionError
from IwasawaLambda.sweep import SweepRunner, candidate_discriminants, eligible, run_sweep


def test_candidates_are_sorted_by_size():
    assert candidate_discriminants(-20, -3) == [-3, -4, -7, -8, -11, -15, -19, -20]


@pytest.mark.parametrize("dmin, dmax", [(-3, -20), (-20, 5)])
def test_candidate_range_errors(dmin, dmax):
    with pytest.raises(PreconditionError):
        candidate_discriminants(dmin, dmax)


@pytest.mark.parametrize("d, expected", [(-11, True), (-23, False), (-7, False), (-3, False)])
def test_eligibility_at_three(d, expected):
    assert eligible(d, 3) is expected


def test_rows_are_ordered_and_deterministic(tmp_path):
    first, second = tmp_path / "one.jsonl", tmp_path / "four.jsonl"
    result = run_sweep(-120, -3, 3, first, prec=5, workers=1)
    run_sweep(-120, -3, 3, second, prec=5, workers=4)
    assert first.read_text(encoding="utf-8") == second.read_text(encoding="utf-8")
    rows = [json.loads(line) for line in first.read_text(encoding="utf-8").splitlines()]
    assert len(rows) == len(result.rows) > 0
    discs = [int(row["disc"]) for row in rows]
    assert discs == sorted(discs, key=abs)
    assert all(row["status"] == "ok" and row["schema"] == 1 for row in rows)
    assert all(eligible(d, 3) for d in discs)


def test_budget_stops_the_sweep():
    result = SweepRunner(3, prec=5, budget=1, workers=1).run(-200, -3)
    assert result.stopped
    assert any(row.get("code") == "BUDGET_EXCEEDED" for row in result.rows)


@pytest.mark.parametrize("p, workers", [(4, 1), (2, 1), (3, 0)])
def test_runner_arguments(p, workers):
    with pytest.raises(ValueError):
        SweepRunner(p, workers=workers)
