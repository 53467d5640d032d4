"""Result containers and plot-ready CSV/JSON emission.

CSV columns are fixed:
experiment, solver, grid_var_name, grid_var_value, ber, iui_db, beta_mean,
trials, seed.  JSON mirrors the full SweepResult including the config echo.
Both formats are byte-stable for identical inputs.
"""

import csv
import io
import json
import math
from dataclasses import asdict, dataclass, field

CSV_COLUMNS = (
    "experiment",
    "solver",
    "grid_var_name",
    "grid_var_value",
    "ber",
    "iui_db",
    "beta_mean",
    "trials",
    "seed",
)

# floor for dB conversion so an exactly-zero residual stays representable
_DB_FLOOR = 1e-30


def to_db(value):
    return 10.0 * math.log10(max(value, _DB_FLOOR))


@dataclass(frozen=True)
class SolverMetrics:
    """One solver's outcome on one trial."""

    iui: float
    mse: float
    beta: float
    bit_errors: int
    bits_sent: int


@dataclass(frozen=True)
class TrialRecord:
    """All solver outcomes for one trial at one grid point."""

    trial: int
    seed: int
    results: dict  # solver name -> SolverMetrics


@dataclass(frozen=True)
class SweepRow:
    solver: str
    grid_value: str
    ber: float | None
    iui_db: float
    beta_mean: float
    trials: int
    bit_errors: int
    bits: int


@dataclass(frozen=True)
class SweepResult:
    experiment: str
    grid_var_name: str
    seed: int
    version: str
    config: dict
    rows: tuple
    notes: dict = field(default_factory=dict)

    def to_dict(self):
        return {
            "experiment": self.experiment,
            "grid_var_name": self.grid_var_name,
            "seed": self.seed,
            "version": self.version,
            "config": self.config,
            "notes": self.notes,
            "rows": [asdict(r) for r in self.rows],
        }

    @classmethod
    def from_dict(cls, data):
        return cls(
            experiment=data["experiment"],
            grid_var_name=data["grid_var_name"],
            seed=data["seed"],
            version=data["version"],
            config=data["config"],
            notes=data["notes"],
            rows=tuple(SweepRow(**r) for r in data["rows"]),
        )

    @classmethod
    def from_json(cls, text):
        return cls.from_dict(json.loads(text))

    def to_json(self):
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"


def _cell(value):
    return "" if value is None else str(value)


def result_to_csv(result):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for row in result.rows:
        writer.writerow(
            [
                result.experiment,
                row.solver,
                result.grid_var_name,
                row.grid_value,
                _cell(row.ber),
                _cell(row.iui_db),
                _cell(row.beta_mean),
                row.trials,
                result.seed,
            ]
        )
    return buf.getvalue()


def emit_results(result, path, fmt):
    """Write a SweepResult to `path` as csv or json."""
    if fmt == "csv":
        text = result_to_csv(result)
    elif fmt == "json":
        text = result.to_json()
    else:
        raise ValueError(f"format must be 'csv' or 'json', got {fmt!r}")
    try:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise OSError(f"cannot write results to {path}: {exc}") from exc
    return path


COMPLEXITY_COLUMNS = (
    "algorithm",
    "n_antennas",
    "n_users",
    "iterations",
    "psk_order",
    "memory_length",
    "multiplications",
)


def complexity_to_csv(rows):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(COMPLEXITY_COLUMNS)
    for row in rows:
        writer.writerow([_cell(row.get(c)) for c in COMPLEXITY_COLUMNS])
    return buf.getvalue()


def emit_complexity(rows, path, fmt):
    if fmt == "csv":
        text = complexity_to_csv(rows)
    elif fmt == "json":
        text = json.dumps(rows, indent=2, sort_keys=True) + "\n"
    else:
        raise ValueError(f"format must be 'csv' or 'json', got {fmt!r}")
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)
    return path
