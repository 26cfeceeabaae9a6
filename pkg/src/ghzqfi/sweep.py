"""Parameter sweeps, figure presets and table emission."""

from __future__ import annotations

import dataclasses
import io
import json
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import ecc, fisher, noec, oracle
from .core import Method, ParameterError, QfiResult, Scenario, SystemParams, validate

log = logging.getLogger(__name__)

COLUMNS = ("scenario", "method", "n", "omega", "gamma", "xi", "p", "tau", "rounds", "t",
           "qfi", "qfi_over_tau2", "qfi_normalized")
AXES = ("gamma_tau", "rounds", "xi_over_gamma", "p", "alpha", "t_over_tau")


@dataclass(frozen=True)
class SweepConfig:
    """One curve: fixed parameters plus a single swept axis.

    ``gamma_tau`` changes ``tau`` at fixed ``gamma``; when ``total_time`` is
    set the number of rounds follows as ``round(total_time / tau)``, otherwise
    ``rounds`` stays fixed.  ``t_over_tau`` changes ``rounds`` at fixed
    ``total_time`` (or fixed ``tau`` if none is given), ``rounds`` always at
    fixed ``tau``.  On the ``alpha`` axis the ``qfi`` columns hold the Fisher
    information of the product measurement at that angle.
    """

    scenario: Scenario
    n: int
    omega: float
    gamma: float
    axis: str
    start: float
    stop: float
    points: int
    xi: float = 0.0
    p: float = 0.0
    tau: float = 1.0
    rounds: int = 1
    total_time: float | None = None
    spacing: str = "log"
    evaluators: tuple[str, ...] = ("exact",)
    out: str | None = None
    format: str = "csv"
    workers: int = 1

    def __post_init__(self):
        object.__setattr__(self, "scenario", Scenario(self.scenario))
        object.__setattr__(self, "evaluators", tuple(Method(e).value for e in self.evaluators))
        if self.axis not in AXES:
            raise ParameterError(f"axis must be one of {', '.join(AXES)}")
        if not _is_int(self.points) or self.points < 2:
            raise ParameterError("points must be an integer ≥ 2")
        if self.spacing not in ("linear", "log"):
            raise ParameterError("spacing must be 'linear' or 'log'")
        if self.spacing == "log" and not (self.start > 0 and self.stop > 0):
            raise ParameterError("log spacing needs positive start and stop")
        if self.format not in ("csv", "json"):
            raise ParameterError("format must be 'csv' or 'json'")
        if not self.evaluators:
            raise ParameterError("at least one evaluator is required")
        if self.total_time is not None and not self.total_time > 0:
            raise ParameterError("total_time must be > 0")
        if not _is_int(self.workers) or self.workers < 1:
            raise ParameterError("workers must be an integer ≥ 1")
        validate(self.base_params())

    def base_params(self) -> SystemParams:
        return SystemParams(self.n, self.omega, self.gamma, self.xi, self.p, self.tau, self.rounds)

    def grid(self) -> np.ndarray:
        if self.spacing == "log":
            return np.logspace(math.log10(self.start), math.log10(self.stop), self.points)
        return np.linspace(self.start, self.stop, self.points)

    @classmethod
    def from_dict(cls, data: dict) -> "SweepConfig":
        names = {f.name for f in dataclasses.fields(cls)}
        unknown = sorted(set(data) - names)
        if unknown:
            raise ParameterError(f"unknown config keys: {', '.join(unknown)}")
        data = dict(data)
        if isinstance(data.get("evaluators"), str):
            data["evaluators"] = (data["evaluators"],)
        if "evaluators" in data:
            data["evaluators"] = tuple(data["evaluators"])
        return cls(**data)

    @classmethod
    def from_json(cls, path: str | Path) -> "SweepConfig":
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
        if not isinstance(data, dict):
            raise ParameterError("config must be a flat JSON object")
        return cls.from_dict(data)

    def to_dict(self) -> dict:
        d = dataclasses.asdict(self)
        d["scenario"] = self.scenario.value
        d["evaluators"] = list(self.evaluators)
        return d


def _is_int(x) -> bool:
    return isinstance(x, (int, np.integer)) and not isinstance(x, bool)


@dataclass(frozen=True)
class GridPoint:
    scenario: Scenario
    method: Method
    params: SystemParams
    alpha: float | None = None
    axis_value: float = math.nan


def grid_points(config: SweepConfig) -> list[GridPoint]:
    """Expand a config into evaluation points, in sweep order."""
    base = config.base_params()
    points: list[GridPoint] = []
    seen: set = set()
    for v in config.grid():
        v = float(v)
        alpha = None
        if config.axis == "gamma_tau":
            tau = v / config.gamma if config.gamma > 0 else math.nan
            if not tau > 0:
                raise ParameterError("gamma_tau axis needs gamma > 0")
            rounds = base.rounds
            if config.total_time is not None:
                rounds = max(1, round(config.total_time / tau))
            params = base.with_(tau=tau, rounds=rounds)
        elif config.axis in ("rounds", "t_over_tau"):
            rounds = max(1, int(round(v)))
            if rounds in seen:  # integer rounding collapses nearby log points
                continue
            seen.add(rounds)
            tau = base.tau
            if config.axis == "t_over_tau" and config.total_time is not None:
                tau = config.total_time / rounds
            params = base.with_(rounds=rounds, tau=tau)
        elif config.axis == "xi_over_gamma":
            params = base.with_(xi=v * config.gamma)
        elif config.axis == "p":
            params = base.with_(p=v)
        else:
            params, alpha = base, v
        for ev in config.evaluators:
            points.append(GridPoint(config.scenario, Method(ev), params, alpha, v))
    return points


def _series(params: SystemParams, scenario: Scenario) -> QfiResult:
    if scenario is Scenario.NO_EC:
        return noec.qfi_noec_taylor(params)
    if scenario in (Scenario.PARITY_IDEAL, Scenario.BITFLIP):
        return ecc.qfi_case1_series(params)
    if scenario is Scenario.PARITY_NOISY_ANCILLA:
        return ecc.qfi_case2_series(params)[0]
    if scenario is Scenario.PARITY_IMPERFECT:
        return ecc.qfi_case3_series(params)
    raise ParameterError("no series form for the general parity-check scenario")


def _state(params: SystemParams, scenario: Scenario) -> ecc.GhzMixedState:
    if scenario is Scenario.BITFLIP:
        return ecc.bitflip_state(params)
    if scenario is Scenario.NO_EC:
        raise ParameterError("the uncorrected state is not a rank-2 GHZ mixture; no alpha sweep")
    return ecc.solve_recurrence(params)


def evaluate(point: GridPoint) -> QfiResult:
    """Evaluate one grid point; raises on evaluator/scenario mismatch."""
    params, scenario, method = point.params, point.scenario, point.method
    if point.alpha is not None:
        if method is Method.EXACT:
            value = fisher.fisher_povm(_state(params, scenario), point.alpha)
        elif method is Method.ORACLE:
            value = oracle.fisher_numeric(params, scenario, point.alpha)
        else:
            raise ParameterError("no series form for the measurement Fisher information")
        return QfiResult.build(value, params.n, params.total_time, scenario, method)
    if method is Method.SERIES:
        return _series(params, scenario)
    if method is Method.ORACLE:
        return oracle.qfi_numeric(params, scenario)
    if scenario is Scenario.NO_EC:
        return noec.qfi_noec_exact(params)
    if scenario is Scenario.BITFLIP:
        return ecc.qfi_bitflip(params)
    return ecc.qfi_exact(params)


def _row(point: GridPoint) -> dict:
    p = point.params
    row = {
        "scenario": point.scenario.value, "method": point.method.value,
        "n": p.n, "omega": p.omega, "gamma": p.gamma, "xi": p.xi, "p": p.p,
        "tau": p.tau, "rounds": p.rounds, "t": p.total_time,
    }
    try:
        res = evaluate(point)
        q, norm = res.qfi, res.normalized
        error = None
    except (ParameterError, ValueError, ArithmeticError) as exc:
        q = norm = math.nan
        error = str(exc)
    row.update(qfi=q, qfi_over_tau2=q / p.tau**2, qfi_normalized=norm)
    if error is not None:
        row["error"] = error
    return row


def run_sweep(config: SweepConfig) -> list[dict]:
    """Rows in sweep order; failures become rows with NaN values and an ``error`` entry."""
    points = grid_points(config)
    if config.workers > 1:
        with ProcessPoolExecutor(max_workers=config.workers) as pool:
            rows = list(pool.map(_row, points, chunksize=max(1, len(points) // (4 * config.workers))))
    else:
        rows = [_row(pt) for pt in points]
    for pt, row in zip(points, rows):
        if config.axis == "alpha":
            row["alpha"] = pt.axis_value
        if "error" in row:
            log.warning("%s/%s at %s: %s", row["scenario"], row["method"], pt.params, row["error"])
    return rows


def _fmt(x) -> str:
    if isinstance(x, float):
        return repr(x)  # shortest string that round-trips
    return str(x)


def format_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    buf.write(",".join(COLUMNS) + "\n")
    for row in rows:
        buf.write(",".join(_fmt(row[c]) for c in COLUMNS) + "\n")
    return buf.getvalue()


def format_json(rows: list[dict]) -> str:
    def clean(v):
        return None if isinstance(v, float) and not math.isfinite(v) else v

    records = [{k: clean(v) for k, v in row.items()} for row in rows]
    return json.dumps(records, indent=1) + "\n"


def write_rows(rows: list[dict], path: str | Path, fmt: str = "csv") -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    text = format_csv(rows) if fmt == "csv" else format_json(rows)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)
    return path


def read_csv(path: str | Path) -> list[dict]:
    """Parse a file written by ``format_csv`` back into typed rows."""
    with open(path, encoding="utf-8") as fh:
        header = fh.readline().rstrip("\n").split(",")
        rows = []
        for line in fh:
            vals = line.rstrip("\n").split(",")
            row = dict(zip(header, vals))
            for k in ("n", "rounds"):
                row[k] = int(row[k])
            for k in header[2:]:
                if k not in ("n", "rounds"):
                    row[k] = float(row[k])
            rows.append(row)
    return rows


# --- figure presets --------------------------------------------------------

PRESETS = ("fig2a", "fig2d", "fig3a", "fig3b", "fig3c", "fig4")


def _ratio_tag(ratio: float) -> str:
    return "w20" if ratio > 1 else "w1_20"


def expand_preset(name: str) -> list[SweepConfig]:
    """Deterministic list of curves making up a figure."""
    if name not in PRESETS:
        raise ParameterError(f"unknown preset {name!r}; choose from {', '.join(PRESETS)}")
    gamma = 1.0
    configs = []
    if name in ("fig2a", "fig2d"):
        for ratio in (20.0, 1 / 20):
            for rounds in (10**3, 10**6):
                configs.append(SweepConfig(
                    scenario=Scenario.PARITY_IDEAL, n=25, omega=ratio * gamma, gamma=gamma,
                    rounds=rounds, axis="gamma_tau", start=1e-5, stop=1.0, points=101,
                    out=f"{name}-{_ratio_tag(ratio)}-R{rounds:.0e}.csv".replace("+0", "")))
    elif name.startswith("fig3"):
        scenario, xi, p = {
            "fig3a": (Scenario.PARITY_IDEAL, 0.0, 0.0),
            "fig3b": (Scenario.PARITY_NOISY_ANCILLA, 1e-4 * gamma, 0.0),
            "fig3c": (Scenario.PARITY_IMPERFECT, 0.0, 0.01),
        }[name]
        for ratio in (20.0, 1 / 20):
            for gt in (100.0, 1000.0, 10000.0):
                configs.append(SweepConfig(
                    scenario=scenario, n=25, omega=ratio * gamma, gamma=gamma, xi=xi, p=p,
                    total_time=gt / gamma, axis="gamma_tau", start=1e-5, stop=1.0, points=61,
                    out=f"{name}-{_ratio_tag(ratio)}-gt{int(gt)}.csv"))
    else:
        gamma, tau = 1e6, 1e-6
        common = dict(n=1, omega=0.01 * gamma, gamma=gamma, axis="rounds",
                      start=1.0, stop=1e6, points=61)
        configs = [
            SweepConfig(scenario=Scenario.PARITY_GENERAL, xi=1 / 5e-4, p=0.06, tau=tau,
                        out="fig4-today.csv", **common),
            SweepConfig(scenario=Scenario.PARITY_IMPERFECT, xi=0.0, p=0.001, tau=tau,
                        out="fig4-improved.csv", **common),
            SweepConfig(scenario=Scenario.PARITY_IMPERFECT, xi=0.0, p=0.001, tau=0.1 / gamma,
                        out="fig4-improved-gt0.1.csv", **common),
        ]
    return configs
