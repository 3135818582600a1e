import logging
import os
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Optional

from dotenv import load_dotenv

from utilities.budget import DEFAULT_MAX_PAIRS, DEFAULT_MAX_SECONDS, Budget
from utilities.errors import ConfigError

logger = logging.getLogger(__name__)

SUITES = ("relations", "fiber", "kernel", "syzygy", "rees")
FORMATS = ("json", "csv", "text")
DEFAULT_SEED = 42
DEFAULT_N_RANGE = (2, 4)
DEFAULT_SUITES = ("relations", "fiber")


@dataclass(frozen=True)
class SuiteConfig:
    n_min: int = DEFAULT_N_RANGE[0]
    n_max: int = DEFAULT_N_RANGE[1]
    r_values: Optional[tuple] = None
    suites: tuple = DEFAULT_SUITES
    max_pairs: int = DEFAULT_MAX_PAIRS
    max_seconds: float = DEFAULT_MAX_SECONDS
    seed: int = DEFAULT_SEED
    out: Optional[str] = None
    fmt: str = "json"
    workers: int = 1
    timings: bool = False
    include_slow: bool = False

    def __post_init__(self):
        if self.n_min < 2:
            raise ConfigError("n ≥ 2 is required")
        if self.n_max < self.n_min:
            raise ConfigError(f"empty n range {self.n_min}..{self.n_max}")
        if self.max_pairs <= 0 or self.max_seconds <= 0:
            raise ConfigError("budgets must be positive")
        unknown = [s for s in self.suites if s not in SUITES]
        if unknown:
            raise ConfigError(f"unknown suites: {', '.join(unknown)}")
        if self.fmt not in FORMATS:
            raise ConfigError(f"unknown format {self.fmt!r}")
        if self.workers < 1:
            raise ConfigError("workers must be at least 1")
        if self.r_values is not None and any(r < 0 for r in self.r_values):
            raise ConfigError("r values must be non-negative")

    @property
    def n_range(self) -> range:
        return range(self.n_min, self.n_max + 1)

    @property
    def r_policy(self) -> str:
        return "all" if self.r_values is None else "list"

    def r_allowed(self, r: int) -> bool:
        return self.r_values is None or r in self.r_values

    def budget(self, label: str) -> Budget:
        return Budget(self.max_pairs, self.max_seconds, label)

    def echo(self) -> dict:
        """Config as written into reports; output location and timing flags excluded."""
        data = asdict(self)
        data.pop("out")
        data.pop("workers")
        data["suites"] = list(self.suites)
        data["r_values"] = None if self.r_values is None else list(self.r_values)
        data["r_policy"] = self.r_policy
        return data


def _env_int(name: str, default):
    raw = os.getenv(name)
    if raw in (None, ""):
        return default
    try:
        return int(raw)
    except ValueError as exc:
        raise ConfigError(f"{name} must be an integer, got {raw!r}") from exc


def _env_float(name: str, default):
    raw = os.getenv(name)
    if raw in (None, ""):
        return default
    try:
        return float(raw)
    except ValueError as exc:
        raise ConfigError(f"{name} must be a number, got {raw!r}") from exc


def _parse_list(text: Optional[str], cast=str) -> Optional[tuple]:
    if text is None:
        return None
    items = [item.strip() for item in text.split(",") if item.strip()]
    try:
        return tuple(cast(item) for item in items)
    except ValueError as exc:
        raise ConfigError(f"cannot parse list {text!r}") from exc


def _parse_n(text: Optional[str]) -> tuple:
    """'3' or '2..4' or '2-4'."""
    if not text:
        return DEFAULT_N_RANGE
    for sep in ("..", "-"):
        if sep in text:
            low, high = text.split(sep, 1)
            break
    else:
        low = high = text
    try:
        return int(low), int(high)
    except ValueError as exc:
        raise ConfigError(f"cannot parse n range {text!r}") from exc


def load_config(
    n: Optional[str] = None,
    r: Optional[str] = None,
    suites: Optional[str] = None,
    budget_pairs: Optional[int] = None,
    budget_secs: Optional[float] = None,
    seed: Optional[int] = None,
    out: Optional[str] = None,
    fmt: str = "json",
    workers: int = 1,
    timings: bool = False,
    include_slow: bool = False,
) -> SuiteConfig:
    """Flags win over the environment, the environment over defaults."""
    load_dotenv()
    n_min, n_max = _parse_n(n)
    config = SuiteConfig(
        n_min=n_min,
        n_max=n_max,
        r_values=_parse_list(r, int),
        suites=_parse_list(suites) or DEFAULT_SUITES,
        max_pairs=budget_pairs
        if budget_pairs is not None
        else _env_int("HANKELFIBER_BUDGET_PAIRS", DEFAULT_MAX_PAIRS),
        max_seconds=budget_secs
        if budget_secs is not None
        else _env_float("HANKELFIBER_BUDGET_SECS", DEFAULT_MAX_SECONDS),
        seed=seed if seed is not None else _env_int("HANKELFIBER_SEED", DEFAULT_SEED),
        out=str(Path(out)) if out else None,
        fmt=fmt,
        workers=workers,
        timings=timings,
        include_slow=include_slow,
    )
    logger.debug("[suite] config %s", config)
    return config
