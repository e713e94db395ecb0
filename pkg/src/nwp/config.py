"""
JSON run configuration.

Example::

    {
      "case": "FreeAiry",
      "scenario": {"m": 1.0, "hbar": 1.0, "b": 1.0},
      "grid": {"x_min": -1024, "x_max": 1024, "n": 32768},
      "evolution": {"dt": 0.01},
      "t_end": 2.0,
      "sample_every": 10
    }

Unknown keys anywhere are errors. ``evolution.steps`` may be omitted; it
is derived as ``round(t_end / dt)`` and ``dt`` is adjusted so the steps
land on ``t_end`` exactly.
"""
from __future__ import annotations

import json
import numbers
from dataclasses import dataclass
from pathlib import Path

from .errors import ConfigError, InvariantError
from .grid import Grid1D, Window, interior_window, make_grid
from .propagator import EvolutionConfig
from .scenarios import Case, Constant, ForceProfile, PiecewiseLinear, ScenarioParams, Sinusoid

TOP_KEYS = {
    "case", "scenario", "grid", "evolution", "window", "t_end",
    "sample_every", "output_path", "seed", "classical",
}
REQUIRED_TOP = {"case", "grid", "evolution", "t_end"}
COMMON_SCENARIO = {"m", "hbar"}
CASE_KEYS = {
    Case.FREE_AIRY: COMMON_SCENARIO | {"b"},
    Case.FORCED_AIRY: COMMON_SCENARIO | {"b", "force"},
    Case.SHO: COMMON_SCENARIO | {"omega", "A", "theta", "n"},
}
FORCE_KEYS = {
    "Constant": ({"kind", "F0"}, {"kind", "F0"}),
    "Sinusoid": ({"kind", "F0", "Omega", "phi"}, {"kind", "F0", "Omega"}),
    "PiecewiseLinear": ({"kind", "table"}, {"kind", "table"}),
}
GRID_KEYS = {"x_min", "x_max", "n"}
EVOLUTION_KEYS = {"dt", "steps", "apodize", "boundary_margin", "taper"}
WINDOW_KEYS = {"lo", "hi"}
CLASSICAL_KEYS = {"dt", "x0", "p0", "scenario"}

#: tolerance when checking an explicit ``steps`` against ``t_end / dt``
_STEP_RTOL = 1e-9


@dataclass(frozen=True)
class ClassicalConfig:
    dt: float = 1e-3
    x0: float | None = None
    p0: float | None = None
    scenario: ScenarioParams | None = None


@dataclass(frozen=True)
class RunConfig:
    scenario: ScenarioParams
    grid: Grid1D
    evolution: EvolutionConfig
    window: Window
    t_end: float
    sample_every: int = 1
    output_path: str | None = None
    seed: int = 0
    classical: ClassicalConfig = ClassicalConfig()

    def __post_init__(self):
        if not self.t_end > 0.0:
            raise InvariantError("t_end must be positive")
        if self.sample_every < 1:
            raise InvariantError("sample_every must be >= 1")
        self.window.validate(self.grid)
        force = self.scenario.force
        if force is not None and not (force.covers(0.0) and force.covers(self.t_end)):
            raise InvariantError("force table does not cover the simulation horizon [0, t_end]")

    def sample_steps(self) -> list[int]:
        """Step indices at which rows are emitted; always includes 0 and the last step."""
        last = self.evolution.steps
        idx = list(range(0, last + 1, self.sample_every))
        if idx[-1] != last:
            idx.append(last)
        return idx

    def sample_times(self) -> list[float]:
        return [i * self.evolution.dt for i in self.sample_steps()]


def _path(where, key):
    return f"{where}.{key}" if where else key


def _check_keys(obj, allowed, where, required=()):
    if not isinstance(obj, dict):
        raise ConfigError(f"{where or 'config'}: expected an object")
    for key in obj:
        if key not in allowed:
            raise ConfigError(f"{_path(where, key)}: unknown key")
    for key in required:
        if key not in obj:
            raise ConfigError(f"{_path(where, key)}: missing required key")


def _number(obj, key, where, default=None):
    if key not in obj:
        if default is None:
            raise ConfigError(f"{_path(where, key)}: missing required key")
        return default
    val = obj[key]
    if isinstance(val, bool) or not isinstance(val, numbers.Real):
        raise ConfigError(f"{_path(where, key)}: expected a number, got {val!r}")
    return float(val)


def _integer(obj, key, where, default=None):
    if key not in obj:
        if default is None:
            raise ConfigError(f"{_path(where, key)}: missing required key")
        return default
    val = obj[key]
    if isinstance(val, bool) or not isinstance(val, numbers.Integral):
        raise ConfigError(f"{_path(where, key)}: expected an integer, got {val!r}")
    return int(val)


def _boolean(obj, key, where, default):
    val = obj.get(key, default)
    if not isinstance(val, bool):
        raise ConfigError(f"{_path(where, key)}: expected true/false, got {val!r}")
    return val


def parse_force(obj, where="scenario.force") -> ForceProfile:
    if not isinstance(obj, dict) or "kind" not in obj:
        raise ConfigError(f"{where}.kind: missing required key")
    kind = obj["kind"]
    if kind not in FORCE_KEYS:
        raise ConfigError(f"{where}.kind: unknown force kind {kind!r}")
    allowed, required = FORCE_KEYS[kind]
    _check_keys(obj, allowed, where, required)
    if kind == "Constant":
        return Constant(_number(obj, "F0", where))
    if kind == "Sinusoid":
        return Sinusoid(_number(obj, "F0", where), _number(obj, "Omega", where), _number(obj, "phi", where, 0.0))
    table = obj["table"]
    if not isinstance(table, list) or not all(isinstance(r, list) and len(r) == 2 for r in table):
        raise ConfigError(f"{where}.table: expected a list of [t, F] pairs")
    for row in table:
        for v in row:
            if isinstance(v, bool) or not isinstance(v, numbers.Real):
                raise ConfigError(f"{where}.table: non-numeric entry {v!r}")
    return PiecewiseLinear.from_table(table)


def parse_scenario(case: Case, obj, where="scenario", base: ScenarioParams | None = None) -> ScenarioParams:
    obj = {} if obj is None else obj
    _check_keys(obj, CASE_KEYS[case], where)
    defaults = dict(m=1.0, hbar=1.0, b=1.0, force=None, omega=1.0, A=0.0, theta=0.0, n=0)
    if base is not None:
        defaults = {k: getattr(base, k) for k in defaults}
    kw = dict(
        m=_number(obj, "m", where, defaults["m"]),
        hbar=_number(obj, "hbar", where, defaults["hbar"]),
    )
    if case.is_airy:
        kw["b"] = _number(obj, "b", where, defaults["b"])
    if case is Case.FORCED_AIRY:
        if "force" in obj:
            kw["force"] = parse_force(obj["force"], f"{where}.force")
        elif defaults["force"] is not None:
            kw["force"] = defaults["force"]
        else:
            raise ConfigError(f"{where}.force: missing required key")
    if case is Case.SHO:
        kw["omega"] = _number(obj, "omega", where, defaults["omega"])
        kw["A"] = _number(obj, "A", where, defaults["A"])
        kw["theta"] = _number(obj, "theta", where, defaults["theta"])
        kw["n"] = _integer(obj, "n", where, defaults["n"])
    return ScenarioParams(case, **kw)


def parse_config(raw: dict) -> RunConfig:
    """Validate a decoded JSON document and build a :class:`RunConfig`."""
    _check_keys(raw, TOP_KEYS, "", REQUIRED_TOP)
    try:
        case = Case(raw["case"])
    except ValueError:
        raise ConfigError(f"case: unknown case {raw['case']!r}; expected one of {[c.value for c in Case]}")
    scenario = parse_scenario(case, raw.get("scenario"))

    g = raw["grid"]
    _check_keys(g, GRID_KEYS, "grid", GRID_KEYS)
    grid = make_grid(_number(g, "x_min", "grid"), _number(g, "x_max", "grid"), _integer(g, "n", "grid"))

    t_end = _number(raw, "t_end", "")
    ev = raw["evolution"]
    _check_keys(ev, EVOLUTION_KEYS, "evolution", {"dt"})
    dt = _number(ev, "dt", "evolution")
    if not dt > 0.0 or not t_end > 0.0:
        raise InvariantError("evolution.dt and t_end must be positive")
    steps = max(1, int(round(t_end / dt)))
    if "steps" in ev:
        given = _integer(ev, "steps", "evolution")
        if abs(given * dt - t_end) > _STEP_RTOL * t_end:
            raise InvariantError(f"evolution.steps={given} with dt={dt} does not reach t_end={t_end}")
        steps = given
    taper = ev.get("taper", "smooth")
    if not isinstance(taper, str):
        raise ConfigError(f"evolution.taper: expected a string, got {taper!r}")
    evolution = EvolutionConfig(
        dt=t_end / steps,
        steps=steps,
        apodize=_boolean(ev, "apodize", "evolution", True),
        boundary_margin=_number(ev, "boundary_margin", "evolution", 0.10),
        taper=taper,
    )

    if "window" in raw:
        w = raw["window"]
        _check_keys(w, WINDOW_KEYS, "window", WINDOW_KEYS)
        window = Window(_number(w, "lo", "window"), _number(w, "hi", "window"))
    else:
        window = interior_window(grid)

    out = raw.get("output_path")
    if out is not None and not isinstance(out, str):
        raise ConfigError(f"output_path: expected a string, got {out!r}")

    classical = ClassicalConfig()
    if "classical" in raw:
        c = raw["classical"]
        _check_keys(c, CLASSICAL_KEYS, "classical")
        cdt = _number(c, "dt", "classical", 1e-3)
        if not cdt > 0.0:
            raise InvariantError("classical.dt must be positive")
        classical = ClassicalConfig(
            dt=cdt,
            x0=_number(c, "x0", "classical") if "x0" in c else None,
            p0=_number(c, "p0", "classical") if "p0" in c else None,
            scenario=parse_scenario(case, c["scenario"], "classical.scenario", base=scenario)
            if "scenario" in c else None,
        )

    return RunConfig(
        scenario=scenario,
        grid=grid,
        evolution=evolution,
        window=window,
        t_end=t_end,
        sample_every=_integer(raw, "sample_every", "", 1),
        output_path=out,
        seed=_integer(raw, "seed", "", 0),
        classical=classical,
    )


def load_config(path) -> RunConfig:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}") from exc
    return parse_config(raw)
