"""Run configurations, figure presets, tau sweeps and CSV output.

Config files are ``key = value`` lines (``#`` starts a comment) or a single
JSON object with the same keys::

    noise = pure-fg        # pure-pl | pure-fg | plm | fgm
    hurst = 0.5            # FG noise; g and alpha for PL noise
    r = 1
    tau_max = 3
    tau_steps = 50
    mc_trajectories = 10000
    seed = 0
    out = fg.csv

``preset = fig2`` ... ``fig9`` replaces the noise keys with the parameters
of that figure.
"""
from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field, replace
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .analytic_dynamics import (
    FGM,
    PLM,
    PURE_FG,
    PURE_PL,
    NoiseConfiguration,
    analytic_measures,
    analytic_rho,
    witness_crossing,
)
from .errors import DomainError
from .measures import measure_set
from .monte_carlo import McConfig, mc_rho

DEFAULT_TAU_STEPS = 200
ASYMPTOTE_GAP = 1e-3
CSV_DIGITS = 12

NOISE_KINDS = (PURE_PL, PURE_FG, PLM, FGM)
_NOISE_PARAMS = {
    PURE_PL: ("g", "alpha"),
    PURE_FG: ("hurst",),
    PLM: ("g", "alpha", "hurst"),
    FGM: ("g", "alpha", "hurst"),
}
KNOWN_KEYS = ("preset", "noise", "g", "alpha", "hurst", "r", "tau_max", "tau_steps", "mc_trajectories", "seed", "out")


class ConfigError(DomainError):
    """A run configuration is malformed; ``key`` names the offending entry."""

    def __init__(self, key, message):
        super().__init__(f"{key}: {message}" if key else message)
        self.key = key


Variant = Tuple[str, NoiseConfiguration]


def _preset_table() -> Dict[str, List[Variant]]:
    C = NoiseConfiguration
    return {
        "fig2": [("", C.pure_pl(1e-2, 2.1))],
        "fig3": [("", C.pure_fg(0.5))],
        "fig4": [("", C.plm(1.0, 3.0, 0.1))],
        "fig5": [("", C.fgm(0.1, 3.0, 0.9))],
        # solid: H=1e-2, g=1e-3, alpha=2.1; dashed: H=0.9, g=1e-1, alpha=3
        "fig6": [
            ("pl-solid", C.pure_pl(1e-3, 2.1)),
            ("fg-solid", C.pure_fg(1e-2)),
            ("pl-dashed", C.pure_pl(1e-1, 3.0)),
            ("fg-dashed", C.pure_fg(0.9)),
        ],
        # solid: H=0.1, alpha=2.1; dashed: H=0.8, alpha=10; g=1e-4 throughout
        "fig7": [
            ("plm-solid", C.plm(1e-4, 2.1, 0.1)),
            ("fgm-solid", C.fgm(1e-4, 2.1, 0.1)),
            ("plm-dashed", C.plm(1e-4, 10.0, 0.8)),
            ("fgm-dashed", C.fgm(1e-4, 10.0, 0.8)),
        ],
        "fig8": [(f"g={g:g}", C.plm(g, 3.0, 1e-1)) for g in (1e-2, 1e-1, 1.0, 10.0)],
        "fig9": [(f"H={h:g}", C.fgm(1e-3, 3.0, h)) for h in (1e-2, 0.2, 0.5, 0.9)],
    }


PRESETS = _preset_table()


def preset_variants(name: str) -> List[Variant]:
    try:
        return list(PRESETS[name])
    except KeyError:
        raise ConfigError("preset", f"unknown preset {name!r}; choose from {', '.join(PRESETS)}") from None


def default_tau_max(variants: Sequence[Variant], gap: float = ASYMPTOTE_GAP) -> float:
    """Smallest tau at which every variant's witness is within ``gap`` of -1/4."""
    return max(witness_crossing(cfg, -0.25 + gap) for _, cfg in variants)


@dataclass(frozen=True)
class SweepSpec:
    variants: Tuple[Variant, ...]
    r: float = 1.0
    tau_max: float = 1.0
    tau_steps: int = DEFAULT_TAU_STEPS
    mc: Optional[McConfig] = None
    output_path: Optional[str] = None
    name: str = ""

    def __post_init__(self):
        if not self.variants:
            raise ConfigError("noise", "no noise configuration given")
        if not (0.0 <= self.r <= 1.0):
            raise ConfigError("r", f"must lie in [0, 1], got {self.r!r}")
        if not (np.isfinite(self.tau_max) and self.tau_max > 0):
            raise ConfigError("tau_max", f"must be positive, got {self.tau_max!r}")
        if int(self.tau_steps) != self.tau_steps or self.tau_steps < 2:
            raise ConfigError("tau_steps", f"must be an integer >= 2, got {self.tau_steps!r}")
        object.__setattr__(self, "variants", tuple(self.variants))

    @property
    def grid(self) -> np.ndarray:
        return np.linspace(0.0, self.tau_max, int(self.tau_steps))

    @property
    def config(self) -> NoiseConfiguration:
        return self.variants[0][1]


@dataclass
class ResultTable:
    header: List[str]
    rows: List[tuple] = field(default_factory=list)


# --- parsing -------------------------------------------------------------------


def _read_pairs(text: str) -> Dict[str, object]:
    stripped = text.strip()
    if stripped.startswith("{"):
        try:
            data = json.loads(stripped)
        except json.JSONDecodeError as exc:
            raise ConfigError(None, f"invalid JSON config: {exc}") from None
        if not isinstance(data, dict):
            raise ConfigError(None, "JSON config must be an object")
        return data
    pairs = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(None, f"line {lineno}: expected 'key = value'")
        key, value = (s.strip() for s in line.split("=", 1))
        if key in pairs:
            raise ConfigError(key, "given more than once")
        pairs[key] = value
    return pairs


def _number(pairs, key, cast=float, default=None):
    if key not in pairs:
        if default is None:
            raise ConfigError(key, "missing required key")
        return default
    value = pairs[key]
    try:
        if cast is int:
            f = float(value)
            if f != int(f):
                raise ValueError
            return int(f)
        return float(value)
    except (TypeError, ValueError):
        raise ConfigError(key, f"not a valid number: {value!r}") from None


def _build_config(noise, pairs) -> NoiseConfiguration:
    params = {k: _number(pairs, k) for k in _NOISE_PARAMS[noise]}
    if "hurst" in params and not (0.0 < params["hurst"] < 1.0):
        raise ConfigError("hurst", f"must lie in (0, 1), got {params['hurst']!r}")
    if "g" in params and not params["g"] > 0:
        raise ConfigError("g", f"must be positive, got {params['g']!r}")
    if "alpha" in params and not params["alpha"] > 2.0 + 1e-9:
        raise ConfigError("alpha", f"must exceed 2, got {params['alpha']!r}")
    if noise == PURE_PL:
        return NoiseConfiguration.pure_pl(params["g"], params["alpha"])
    if noise == PURE_FG:
        return NoiseConfiguration.pure_fg(params["hurst"])
    if noise == PLM:
        return NoiseConfiguration.plm(params["g"], params["alpha"], params["hurst"])
    return NoiseConfiguration.fgm(params["g"], params["alpha"], params["hurst"])


def spec_from_mapping(pairs: Dict[str, object]) -> SweepSpec:
    for key in pairs:
        if key not in KNOWN_KEYS:
            raise ConfigError(key, "unknown key")
    if "preset" in pairs:
        name = str(pairs["preset"])
        clash = [k for k in ("noise", "g", "alpha", "hurst") if k in pairs]
        if clash:
            raise ConfigError(clash[0], "cannot be combined with preset")
        variants = preset_variants(name)
    elif "noise" in pairs:
        noise = str(pairs["noise"])
        if noise not in NOISE_KINDS:
            raise ConfigError("noise", f"unknown noise {noise!r}; choose from {', '.join(NOISE_KINDS)}")
        extra = [k for k in ("g", "alpha", "hurst") if k in pairs and k not in _NOISE_PARAMS[noise]]
        if extra:
            raise ConfigError(extra[0], f"does not apply to noise={noise}")
        name = noise
        variants = [("", _build_config(noise, pairs))]
    else:
        raise ConfigError("noise", "missing required key (or give a preset)")

    r = _number(pairs, "r", default=1.0)
    if not (0.0 <= r <= 1.0):
        raise ConfigError("r", f"must lie in [0, 1], got {r!r}")
    tau_max = _number(pairs, "tau_max", default=-1.0) if "tau_max" in pairs else default_tau_max(variants)
    tau_steps = _number(pairs, "tau_steps", int, default=DEFAULT_TAU_STEPS)
    seed = _number(pairs, "seed", int, default=0)
    if not (0 <= seed < 2**64):
        raise ConfigError("seed", "must be a 64-bit unsigned integer")
    mc = None
    if "mc_trajectories" in pairs:
        n = _number(pairs, "mc_trajectories", int)
        try:
            mc = McConfig(n_trajectories=n, seed=seed)
        except DomainError as exc:
            raise ConfigError("mc_trajectories", str(exc)) from None
    out = pairs.get("out")
    return SweepSpec(
        variants=tuple(variants),
        r=r,
        tau_max=tau_max,
        tau_steps=tau_steps,
        mc=mc,
        output_path=None if out is None else str(out),
        name=name,
    )


def parse_config(text: str) -> SweepSpec:
    """Validate a ``key = value`` (or JSON) run configuration."""
    return spec_from_mapping(_read_pairs(text))


def preset_spec(name: str, **overrides) -> SweepSpec:
    pairs = {"preset": name}
    pairs.update({k: v for k, v in overrides.items() if v is not None})
    return spec_from_mapping(pairs)


# --- running ---------------------------------------------------------------------


def table_header(multi_variant: bool, with_mc: bool) -> List[str]:
    header = ["variant"] if multi_variant else []
    header += ["tau", "E_analytic", "P_analytic", "D_analytic"]
    if with_mc:
        header += ["E_mc", "P_mc", "D_mc", "max_entry_stderr"]
    return header


def run_sweep(spec: SweepSpec, workers: Optional[int] = None) -> ResultTable:
    """Analytic (and optionally MC) measures on a uniform grid over ``[0, tau_max]``."""
    multi = len(spec.variants) > 1
    table = ResultTable(header=table_header(multi, spec.mc is not None))
    grid = spec.grid
    mc = spec.mc
    if mc is not None and workers is not None:
        mc = replace(mc, workers=workers)
    for label, config in spec.variants:
        if spec.r == 1.0:
            rows = [analytic_measures(config, t) for t in grid]
        else:
            rows = [measure_set(analytic_rho(config, t, spec.r), tau=t) for t in grid]
        mc_rows = mc_rho(config, grid, spec.r, mc).measures if mc is not None else None
        for k, m in enumerate(rows):
            row = ([label] if multi else []) + [float(grid[k]), m.E, m.P, m.D]
            if mc_rows is not None:
                q = mc_rows[k]
                row += [q.E, q.P, q.D, q.stderr]
            table.rows.append(tuple(row))
    return table


def _fmt(value) -> str:
    if isinstance(value, str):
        return value
    text = f"{float(value):.{CSV_DIGITS}g}"
    return "0" if text == "-0" else text


def table_to_csv(table: ResultTable) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(table.header)
    for row in table.rows:
        writer.writerow([_fmt(v) for v in row])
    return buf.getvalue()


def emit_csv(table: ResultTable, path) -> None:
    """Write the table as CSV with LF line endings and 12 significant digits."""
    text = table_to_csv(table)
    try:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise OSError(exc.errno, f"cannot write CSV to {path}: {exc.strerror}") from exc
