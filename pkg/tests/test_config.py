import pytest
from pydantic import ValidationError

from IwasawaLambda.config import AppSettings, get_settings
from IwasawaLambda.errors import BudgetError, CertificateError, InvariantError, LambdaError, PreconditionError


def test_defaults(monkeypatch):
    for name in ("LAMBDA_PREC", "LAMBDA_SWEEP_WORKERS", "LAMBDA_MAX_GROUP_ORDER"):
        monkeypatch.delenv(name, raising=False)
    s = AppSettings(_env_file=None)
    assert s.prec == 8
    assert s.max_group_order == 243
    assert s.max_h2_order == 27
    assert s.period_degree_cap == 13
    assert s.random_seed == 20240917


def test_environment_overrides(monkeypatch):
    monkeypatch.setenv("LAMBDA_SWEEP_WORKERS", "2")
    monkeypatch.setenv("LAMBDA_PREC", "12")
    s = AppSettings(_env_file=None)
    assert s.sweep_workers == 2
    assert s.prec == 12


@pytest.mark.parametrize(
    "overrides",
    [{"LAMBDA_PREC": 2}, {"LAMBDA_ENUM_BUDGET": 0}, {"LAMBDA_PERIOD_DEGREE_CAP": 2}, {"LAMBDA_SWEEP_WORKERS": 0}],
)
def test_validation(overrides):
    with pytest.raises(ValidationError):
        AppSettings(_env_file=None, **overrides)


def test_invalid_environment_exits(monkeypatch):
    monkeypatch.setenv("LAMBDA_PREC", "1")
    get_settings.cache_clear()
    try:
        with pytest.raises(SystemExit) as e:
            get_settings()
        assert e.value.code == 1
    finally:
        get_settings.cache_clear()


@pytest.mark.parametrize(
    "error, exit_code",
    [
        (PreconditionError("NOT_SPLIT", "p does not split"), 2),
        (BudgetError("too many"), 3),
        (CertificateError("NORM_MISMATCH", "bad norm"), 4),
        (InvariantError("INTERNAL_INCONSISTENCY", "broken"), 5),
    ],
)
def test_exit_codes(error, exit_code):
    assert isinstance(error, LambdaError)
    assert error.exit_code == exit_code


def test_error_text():
    e = BudgetError("too many", cap=10)
    assert e.code == "BUDGET_EXCEEDED"
    assert e.context == {"cap": 10}
    assert str(e) == "BUDGET_EXCEEDED: too many (cap=10)"
    assert str(PreconditionError("NOT_SPLIT", "p does not split")) == "NOT_SPLIT: p does not split"
