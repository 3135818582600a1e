import pytest

from suite.config import DEFAULT_SUITES, SuiteConfig, load_config
from utilities.budget import Budget
from utilities.errors import BudgetExceededError, ConfigError, ParseError, UnassignedVariableError

ENV_VARS = ("HANKELFIBER_BUDGET_PAIRS", "HANKELFIBER_BUDGET_SECS", "HANKELFIBER_SEED")


@pytest.fixture
def clean_env(monkeypatch):
    for name in ENV_VARS:
        monkeypatch.delenv(name, raising=False)
    return monkeypatch


def test_defaults(clean_env):
    config = load_config()
    assert (config.n_min, config.n_max) == (2, 4)
    assert config.suites == DEFAULT_SUITES
    assert config.seed == 42
    assert config.r_policy == "all"


@pytest.mark.parametrize("text,expected", [("3", (3, 3)), ("2..4", (2, 4)), ("2-5", (2, 5))])
def test_n_range_forms(clean_env, text, expected):
    config = load_config(n=text)
    assert (config.n_min, config.n_max) == expected


def test_n_below_two_is_rejected(clean_env):
    with pytest.raises(ConfigError, match="n ≥ 2"):
        load_config(n="1")


@pytest.mark.parametrize(
    "kwargs",
    [
        {"n": "4..3"},
        {"n": "two"},
        {"suites": "relations,bogus"},
        {"r": "0,x"},
        {"budget_pairs": 0},
        {"fmt": "xml"},
        {"workers": 0},
    ],
)
def test_invalid_configs(clean_env, kwargs):
    with pytest.raises(ConfigError):
        load_config(**kwargs)


def test_environment_fallback(clean_env):
    clean_env.setenv("HANKELFIBER_BUDGET_PAIRS", "77")
    clean_env.setenv("HANKELFIBER_SEED", "9")
    config = load_config()
    assert config.max_pairs == 77
    assert config.seed == 9


def test_flags_win_over_environment(clean_env):
    clean_env.setenv("HANKELFIBER_BUDGET_PAIRS", "77")
    clean_env.setenv("HANKELFIBER_BUDGET_SECS", "5")
    config = load_config(budget_pairs=10, budget_secs=2.5)
    assert config.max_pairs == 10
    assert config.max_seconds == 2.5


def test_bad_environment_value(clean_env):
    clean_env.setenv("HANKELFIBER_SEED", "forty-two")
    with pytest.raises(ConfigError):
        load_config()


def test_r_list_and_echo(clean_env):
    config = load_config(r="0,2", out="reports/run.json", workers=3)
    assert config.r_values == (0, 2)
    assert config.r_allowed(2) and not config.r_allowed(1)
    echo = config.echo()
    assert echo["r_policy"] == "list"
    assert echo["r_values"] == [0, 2]
    assert "out" not in echo and "workers" not in echo


def test_budget_from_config():
    budget = SuiteConfig(max_pairs=3, max_seconds=10).budget("case")
    assert (budget.max_pairs, budget.max_seconds, budget.label) == (3, 10, "case")


def test_budget_charges_pairs():
    budget = Budget(max_pairs=2, max_seconds=None, label="pair-check")
    budget.charge()
    budget.charge()
    assert budget.pairs == 2
    with pytest.raises(BudgetExceededError) as info:
        budget.charge()
    assert info.value.stats == {"pairs": 3, "steps": 0, "label": "pair-check"}
    assert "pair-check" in str(info.value)


def test_unlimited_and_fresh_budgets():
    budget = Budget.unlimited("big")
    for _ in range(1000):
        budget.charge()
        budget.step()
    assert budget.pairs == 1000
    fresh = Budget(max_pairs=5, max_seconds=None).fresh("again")
    assert fresh.pairs == 0
    assert fresh.max_pairs == 5
    assert fresh.elapsed == 0.0


def test_error_messages():
    assert "x7" in str(UnassignedVariableError("x7"))
    err = ParseError("bad factor", "x1 ** 2", 3)
    assert "position 3" in str(err)
