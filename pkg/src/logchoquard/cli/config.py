"""Run configuration: strict TOML schema, defaults and echo-back.

A configuration file holds the tables ``[problem]``, ``[potential]``,
``[nonlinearity]``, ``[grid]``, ``[solver]``, ``[continuation]`` and
``[verification]`` plus the top-level keys ``seed``, ``mu-form``, ``R`` and
``tol``. Keys may be written in kebab-case or snake_case. Only ``[problem]``
with ``N``, ``s`` and ``tau`` is mandatory::

    [problem]
    N = 2
    s = 0.5
    tau = 0.25
"""

from __future__ import annotations

import json
import logging
import re
import tomllib
from pathlib import Path
from typing import Any, NamedTuple

from beartype import beartype

from ..constants import ProblemParams, beta_0, rim_radius_cap
from ..errors import ConfigError, InputTypeError, LogChoquardError
from ..mountain_pass.continuation import DEFAULT_SCHEDULE
from ..nonlinearity import (
    BaseNonlinearity,
    calibrate_amplitude,
    make_model_nonlinearity,
)
from ..radial import RadialGrid, RadialPotential
from ..types import GridSpec, MuForm, Number, SaddleOptions

logger = logging.getLogger(__name__)

# radii of the plateaus used by the pipeline, always grid nodes
PLATEAU_RADII = (1 / 4, 1 / 3)


@beartype
class NonlinearityConfig(NamedTuple):
    """Parameters of the model nonlinearity.

    When ``lam`` is None the amplitude is calibrated so that the measured
    beta reaches ``beta_factor`` times beta_0.
    """

    lam: Number | None = None
    alpha: Number = 1.0
    q: Number = 10.0
    beta_factor: Number = 1.01
    limit_threshold: Number = 0.05


@beartype
class ContinuationConfig(NamedTuple):
    enabled: bool = True
    schedule: tuple[Number, ...] = DEFAULT_SCHEDULE
    cold_start: bool = False
    rho: Number | None = None


@beartype
class VerificationConfig(NamedTuple):
    """Toggles and sampling sizes of the verification pipeline."""

    constants: bool = True
    kernels: bool = True
    nonlinearity: bool = True
    seminorm: bool = True
    gradient: bool = True
    poisson: bool = True
    monte_carlo_samples: int = 10**7
    gradient_mus: tuple[Number, ...] = (1.0, 0.25)
    gradient_every: int = 8
    rim_samples: int = 16


@beartype
class RunConfig(NamedTuple):
    """Validated run configuration."""

    problem: ProblemParams
    potential: str
    nonlinearity: NonlinearityConfig
    grid: GridSpec
    solver_enabled: bool
    solver: SaddleOptions
    continuation: ContinuationConfig
    verification: VerificationConfig
    seed: int = 0
    mu_form: MuForm = "difference"
    R: float = 1 / 3
    tol: float = 1e-10

    def make_grid(self) -> RadialGrid:
        return RadialGrid(self.grid)

    def make_potential(self) -> RadialPotential:
        return RadialPotential.from_params(self.problem, self.potential)

    def make_nonlinearity(self) -> BaseNonlinearity:
        """The model nonlinearity, calibrated when no amplitude is given."""
        N, s = self.problem.N, self.problem.s
        nl = self.nonlinearity
        if nl.lam is not None:
            return make_model_nonlinearity(N, s, nl.lam, nl.alpha, nl.q)
        target = nl.beta_factor * beta_0(N, s, self.problem.V_upper)
        return calibrate_amplitude(
            N,
            s,
            target,
            nonlinearity=make_model_nonlinearity(N, s, 1.0, nl.alpha, nl.q),
            V_upper=self.problem.V_upper,
            return_nonlinearity=True,
        )

    def as_dict(self) -> dict[str, Any]:
        """Nested dictionary of the resolved configuration."""
        return {
            "problem": self.problem.as_dict(),
            "potential": {"kind": self.potential},
            "nonlinearity": self.nonlinearity._asdict(),
            "grid": self.grid._asdict(),
            "solver": {
                "enabled": self.solver_enabled,
                **self.solver._asdict(),
            },
            "continuation": self.continuation._asdict(),
            "verification": self.verification._asdict(),
            "seed": self.seed,
            "mu_form": self.mu_form,
            "R": self.R,
            "tol": self.tol,
        }

    def echo(self) -> str:
        """Resolved configuration as sorted JSON."""
        return json.dumps(self.as_dict(), indent=2, sort_keys=True)


TABLES = {
    "problem": {"N", "s", "tau", "V_lower", "V_upper"},
    "potential": {"kind"},
    "nonlinearity": set(NonlinearityConfig._fields),
    "grid": set(GridSpec._fields),
    "solver": {"enabled", *SaddleOptions._fields},
    "continuation": set(ContinuationConfig._fields),
    "verification": set(VerificationConfig._fields),
}
TOP_LEVEL = {"seed", "mu_form", "R", "tol"}


def _normalize(key: str) -> str:
    return key.replace("-", "_")


def _header_line(text: str, table: str) -> int | None:
    header = re.compile(rf"^\s*\[\s*{re.escape(table)}\s*\]")
    for i, line in enumerate(text.splitlines()):
        if header.match(line):
            return i + 1
    return None


def _line_of(text: str, key: str, table: str | None = None) -> int | None:
    """First line defining ``key`` (in either spelling) after its table."""
    lines = text.splitlines()
    start = 0
    if table is not None:
        start = (_header_line(text, table) or 1) - 1
    spellings = {key, key.replace("_", "-")}
    pattern = re.compile(
        r"^\s*(" + "|".join(re.escape(k) for k in spellings) + r")\s*="
    )
    for i in range(start, len(lines)):
        if pattern.match(lines[i]):
            return i + 1
    return None


def _normalized_table(
    raw: dict, allowed: set[str], text: str, table: str | None
) -> dict[str, Any]:
    out = {}
    where = f"[{table}]" if table else "the top level"
    for key, value in raw.items():
        name = _normalize(key)
        if name not in allowed:
            msg = (
                f"Unknown key {key!r} in {where}, expected one of"
                + f" {sorted(allowed)}"
            )
            raise ConfigError(msg, _line_of(text, key, table))
        if isinstance(value, list):
            value = tuple(value)
        out[name] = value
    return out


def _build(bundle, values: dict, text: str, table: str):
    """Instantiate a parameter bundle, locating the failing key."""
    try:
        return bundle(**values)
    except (*InputTypeError, LogChoquardError, TypeError) as err:
        culprit = next(
            (key for key in values if f"{key}=" in str(err)),
            next((key for key in values if key in str(err)), ""),
        )
        msg = f"Invalid [{table}] table: {err}"
        raise ConfigError(msg, _line_of(text, culprit, table)) from err


def _grid_spec(values: dict, R: float) -> dict:
    radii = {*values.get("breakpoints", ()), R / 2, R}
    for radius in PLATEAU_RADII:
        radii |= {radius / 2, radius}
    values["breakpoints"] = tuple(sorted(float(r) for r in radii))
    return values


def parse_config_text(text: str, source: str = "<string>") -> RunConfig:
    """Parse and validate the text of a configuration file.

    Raises
    ------
    ConfigError
        on TOML syntax errors, unknown tables or keys, and on values that
        violate the preconditions of the parameter bundles
    """
    try:
        raw = tomllib.loads(text)
    except tomllib.TOMLDecodeError as err:
        match = re.search(r"line (\d+)", str(err))
        line = int(match.group(1)) if match else None
        msg = f"{source} is not valid TOML: {err}"
        raise ConfigError(msg, line) from err

    tables, top = {}, {}
    for key, value in raw.items():
        name = _normalize(key)
        if isinstance(value, dict):
            if name not in TABLES:
                msg = (
                    f"Unknown table [{key}], expected one of"
                    + f" {sorted(TABLES)}"
                )
                raise ConfigError(msg, _header_line(text, key))
            tables[name] = _normalized_table(value, TABLES[name], text, key)
        else:
            top.update(_normalized_table({key: value}, TOP_LEVEL, text, None))

    if not {"N", "s", "tau"} <= tables.get("problem", {}).keys():
        msg = "The [problem] table must define N, s and tau"
        raise ConfigError(msg)
    params = _build(ProblemParams, tables["problem"], text, "problem")

    top_values = {
        "seed": 0,
        "mu_form": "difference",
        "R": 1 / 3,
        "tol": 1e-10,
    } | top
    if top_values["mu_form"] not in ("literal", "difference"):
        msg = (
            "mu-form must be 'literal' or 'difference', got"
            + f" {top_values['mu_form']!r}"
        )
        raise ConfigError(msg, _line_of(text, "mu_form"))
    if not 0 < top_values["R"] <= 1:
        msg = f"R must lie in (0, 1], got {top_values['R']}"
        raise ConfigError(msg, _line_of(text, "R"))

    potential = tables.get("potential", {}).get("kind", "constant")
    if potential not in ("constant", "well"):
        msg = f"Unknown potential kind {potential!r}"
        raise ConfigError(msg, _line_of(text, "kind", "potential"))

    solver = dict(tables.get("solver", {}))
    solver_enabled = bool(solver.pop("enabled", True))

    config = RunConfig(
        problem=params,
        potential=potential,
        nonlinearity=_build(
            NonlinearityConfig,
            tables.get("nonlinearity", {}),
            text,
            "nonlinearity",
        ),
        grid=_build(
            GridSpec,
            _grid_spec(dict(tables.get("grid", {})), float(top_values["R"])),
            text,
            "grid",
        ),
        solver_enabled=solver_enabled,
        solver=_build(SaddleOptions, solver, text, "solver"),
        continuation=_build(
            ContinuationConfig,
            tables.get("continuation", {}),
            text,
            "continuation",
        ),
        verification=_build(
            VerificationConfig,
            tables.get("verification", {}),
            text,
            "verification",
        ),
        seed=int(top_values["seed"]),
        mu_form=top_values["mu_form"],
        R=float(top_values["R"]),
        tol=float(top_values["tol"]),
    )
    rho = config.continuation.rho
    cap = rim_radius_cap(params.N, params.s)
    if rho is not None and not 0 < rho < cap:
        msg = f"continuation rho must lie in (0, {cap:.6g}), got {rho}"
        raise ConfigError(msg, _line_of(text, "rho", "continuation"))
    logger.debug("Parsed configuration from %s", source)
    return config


def parse_config(path: str | Path) -> RunConfig:
    """Read, parse and validate a configuration file.

    Raises
    ------
    ConfigError
        if the file does not exist or is not a valid configuration

    Examples
    --------
    >>> config = lcq.parse_config("run.toml")  # doctest: +SKIP
    >>> config.solver.path_points
    41
    """
    path = Path(path)
    if not path.is_file():
        msg = f"The configuration file {path} does not exist"
        raise ConfigError(msg)
    return parse_config_text(path.read_text(), source=str(path))
