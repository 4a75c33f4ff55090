from teleclone.validation import (
    TABLE_EPS,
    check_completion_independence,
    check_monte_carlo,
    check_purity,
    summary,
)
from teleclone.wigner_engine import OVERLAP_PREFACTOR


def test_purity_negative_control():
    assert check_purity().passed
    bad = check_purity(OVERLAP_PREFACTOR * 1.01)
    assert not bad.passed
    assert bad.line().startswith("[FAIL] C13a")


def test_monte_carlo_check_is_deterministic():
    a = check_monte_carlo(seed=5, samples=20_000)
    b = check_monte_carlo(seed=5, samples=20_000)
    assert a == b
    assert "numpy.random.Philox" in a.detail


def test_summary_is_json_ready():
    import json

    checks = [check_completion_independence(0)]
    data = json.loads(json.dumps(summary(checks, 0)))
    assert data["passed"] is True
    assert data["checks"][0]["id"] == "C13d"


def test_reference_table_covers_ten_entries():
    assert sum(len(v) for v in TABLE_EPS.values()) == 10
