"""Run directories and the orchestration of the verification pipeline.

A run directory holds

    config.echo      resolved configuration, sorted JSON
    report.json      the `VerificationReport`
    levels.csv       rows mu,c_mu,norm,residual
    saddles.json     the `SaddleResult` summaries
    potential.json   the `PotentialReport` summary
    fields/*.csv     r,value profiles (saddles, u0, phi)
"""

from __future__ import annotations

import csv
import json
import logging
from collections.abc import Iterable
from pathlib import Path

import numpy as np
import torch

from ..constants import constants_bundle, constants_checks
from ..energy import (
    expanded_form_check,
    ff_ratio_check,
    gradient_check,
    h_transform_check,
    ps_bound_check,
    psi_growth_check,
)
from ..kernels import (
    check_kernel_inequalities,
    hls_ratio,
    kernel_convergence_order,
    phi_power_bound_check,
)
from ..mountain_pass import (
    ContinuationResult,
    SaddleResult,
    SaddleSearch,
    continuation,
    default_rim_radius,
    endpoint_check,
    find_endpoint,
    level_and_norm_audit,
    ray_level_check,
    rim_minimum,
)
from ..nonlinearity import BaseNonlinearity, verify_assumptions
from ..poisson import (
    F_decay_check,
    PotentialReport,
    asymptotic_check,
    decay_fit,
    gmu_convolution_bound,
    holder_check,
    laplace_residual_2d,
    poisson_potential,
)
from ..radial import (
    RadialField,
    RadialGrid,
    bump_field,
    hat_field,
    mt_integrability_check,
    plateau_checks,
    plateau_test_function,
    seminorm_oracle_check,
)
from ..types import float_dtype
from ..verification import CheckRecord, VerificationReport
from .config import RunConfig, parse_config_text

logger = logging.getLogger(__name__)


class RunDirectory:
    """Files of one run.

    Parameters
    ----------
    path
        the directory, created if needed
    """

    def __init__(self, path: str | Path) -> None:
        self.path = Path(path)
        self.fields = self.path / "fields"
        self.fields.mkdir(parents=True, exist_ok=True)

    def write_config(self, config: RunConfig) -> None:
        (self.path / "config.echo").write_text(config.echo() + "\n")

    def read_config(self) -> RunConfig:
        """Configuration echoed by a previous run."""
        text = (self.path / "config.echo").read_text()
        return config_from_echo(text, source=str(self.path / "config.echo"))

    def write_report(self, report: VerificationReport) -> Path:
        path = self.path / "report.json"
        report.write(path)
        return path

    def write_field(self, name: str, field: RadialField) -> Path:
        path = self.fields / f"{name}.csv"
        field.to_csv(path)
        return path

    def read_field(self, name: str, order: int = 8) -> RadialField:
        return RadialField.from_csv(self.fields / f"{name}.csv", order=order)

    def write_levels(self, results: list[SaddleResult]) -> Path:
        path = self.path / "levels.csv"
        with path.open("w", newline="") as file:
            writer = csv.writer(file)
            writer.writerow(["mu", "c_mu", "norm", "residual"])
            for r in results:
                writer.writerow(
                    [repr(r.mu), repr(r.c_mu), repr(r.norm), repr(r.residual)]
                )
        return path

    def write_saddles(self, results: list[SaddleResult]) -> Path:
        path = self.path / "saddles.json"
        payload = [result.as_dict() for result in results]
        path.write_text(json.dumps(payload, indent=2) + "\n")
        for result in results:
            self.write_field(f"u_mu_{result.mu:g}", result.u_mu)
        return path

    def write_potential(self, report: PotentialReport) -> Path:
        path = self.path / "potential.json"
        path.write_text(json.dumps(report.as_dict(), indent=2) + "\n")
        self.write_field("phi", report.phi)
        return path


def config_from_echo(text: str, source: str = "<echo>") -> RunConfig:
    """Rebuild a configuration from its echoed JSON."""
    data = json.loads(text)
    # top-level keys come before the first table
    lines = [
        f"{key} = {json.dumps(data.pop(key))}"
        for key in ("seed", "mu_form", "R", "tol")
    ]
    for table, values in data.items():
        lines.append(f"[{table}]")
        for key, value in values.items():
            if value is not None:
                lines.append(f"{key} = {json.dumps(value)}")
    return parse_config_text("\n".join(lines) + "\n", source=source)


def _tagged(records: Iterable[CheckRecord], mu: float) -> list[CheckRecord]:
    return [r._replace(check_id=f"{r.check_id}@mu={mu:g}") for r in records]


def resolve(config: RunConfig) -> tuple[RunConfig, BaseNonlinearity]:
    """Build the nonlinearity and record a calibrated amplitude."""
    nl = config.make_nonlinearity()
    if config.nonlinearity.lam is None:
        config = config._replace(
            nonlinearity=config.nonlinearity._replace(lam=nl.lam)
        )
    return config, nl


def constants_records(config: RunConfig) -> list[CheckRecord]:
    report = constants_bundle(
        config.problem, config.R, mu_form=config.mu_form, tol=config.tol
    )
    return constants_checks(config.problem, report, config.tol)


def kernel_records(config: RunConfig, grid: RadialGrid) -> list[CheckRecord]:
    """Kernel inequalities, convergence in mu, Phi powers and HLS."""
    N, s = config.problem.N, config.problem.s
    t_grid = torch.logspace(-6, 3, 2001, dtype=float_dtype)
    records = []
    for mu in (1.0, 0.5, 0.25):
        records += check_kernel_inequalities(mu, min(1.0, 2 * mu), t_grid)
    records.append(kernel_convergence_order().record())
    records += phi_power_bound_check(
        config.nonlinearity.alpha,
        2.0,
        3.0,
        torch.logspace(-3, 0.5, 801, dtype=float_dtype),
        N,
        s,
    )
    f = bump_field(grid, radius=1.0)
    h = bump_field(grid, radius=2.0, height=0.5)
    records.append(hls_ratio(f, h, N / 2, 4 / 3, 4 / 3, N).record())
    return records


def seminorm_fields(config: RunConfig, grid: RadialGrid) -> dict:
    """Test fields of the Monte-Carlo oracle: hat, bump and plateau."""
    return {
        "hat": hat_field(grid),
        "bump": bump_field(grid),
        "plateau": plateau_test_function(config.R, grid),
    }


def seminorm_records(
    config: RunConfig, grid: RadialGrid
) -> list[CheckRecord]:
    """Plateau bounds, Monte-Carlo oracle and Moser-Trudinger finiteness."""
    N, s = config.problem.N, config.problem.s
    records = plateau_checks(config.problem, grid, config.R)
    for name, u in seminorm_fields(config, grid).items():
        records.append(
            seminorm_oracle_check(
                u,
                s,
                N,
                n_samples=config.verification.monte_carlo_samples,
                seed=config.seed,
                check_id=f"seminorm-oracle-{name}",
            )
        )
    alpha = constants_bundle(config.problem, config.R).alpha_star
    w = plateau_test_function(config.R, grid)
    records.append(mt_integrability_check(w, alpha, N, s))
    return records


def gradient_records(
    config: RunConfig, grid: RadialGrid, nl: BaseNonlinearity, V
) -> list[CheckRecord]:
    """Central differences for two fields and every configured mu."""
    fields = {
        "plateau": plateau_test_function(1 / 4, grid) * 0.5,
        "bump": bump_field(grid, radius=2.0, height=0.3),
    }
    records = []
    for name, u in fields.items():
        for mu in config.verification.gradient_mus:
            record = gradient_check(
                u,
                float(mu),
                nl,
                config.problem,
                V,
                every=config.verification.gradient_every,
            )
            records.append(
                record._replace(check_id=f"{record.check_id}-{name}")
            )
    return records


def saddle_records(
    result: SaddleResult, nl: BaseNonlinearity, config: RunConfig, V
) -> list[CheckRecord]:
    """Audits of one saddle: level, norm, PS bound and transforms."""
    params = config.problem
    u, c = result.u_mu, result.c_mu
    records = level_and_norm_audit(result, params)
    records.append(ps_bound_check(u, c, params, V))
    records.append(expanded_form_check(u, result.mu, nl, params, V))
    records += ff_ratio_check(u, nl, params)
    records += h_transform_check(u, c, nl, params, V=V)
    return _tagged(records, result.mu)


def solve(
    config: RunConfig,
    nl: BaseNonlinearity,
    mu: float,
    *,
    verbose: int = 0,
) -> tuple[SaddleResult, list[CheckRecord]]:
    """Single saddle search at mu with the geometry and saddle audits."""
    grid, V = config.make_grid(), config.make_potential()
    params = config.problem
    rho = config.continuation.rho
    if rho is None:
        rho = default_rim_radius(params.N, params.s)
    e = find_endpoint(mu, nl, params, grid, V)
    records = endpoint_check(e, mu, nl, params, V, rho=rho)
    records += rim_minimum(
        mu,
        rho,
        config.verification.rim_samples,
        nl,
        params,
        grid,
        V,
        seed=config.seed,
    ).records()
    records.append(psi_growth_check(e, nl, params))
    search = SaddleSearch(
        mu=mu,
        nl=nl,
        params=params,
        grid=grid,
        options=config.solver,
        V=V,
        verbose=verbose,
    ).fit(endpoint=e)
    result = search.result_
    records = _tagged(records, mu)
    records += saddle_records(result, nl, config, V)
    records += _tagged(ray_level_check(result, nl, params, V), mu)
    return result, records


def run_continuation(
    config: RunConfig, nl: BaseNonlinearity, *, verbose: int = 0
) -> tuple[ContinuationResult, list[CheckRecord]]:
    grid, V = config.make_grid(), config.make_potential()
    out = continuation(
        nl,
        config.problem,
        grid,
        config.continuation.schedule,
        config.solver,
        V,
        rho=config.continuation.rho,
        cold_start=config.continuation.cold_start,
        verbose=verbose,
    )
    records = []
    for result in out.results:
        records += saddle_records(result, nl, config, V)
    records += out.records
    return out, records


def poisson_records(
    u: RadialField,
    nl: BaseNonlinearity,
    config: RunConfig,
    mu: float,
) -> tuple[PotentialReport, list[CheckRecord]]:
    """Potential of u, its asymptotics, decay, G_mu bound and regularity."""
    N, s = config.problem.N, config.problem.s
    report = poisson_potential(u, nl, N)
    records = report.records()
    records.append(asymptotic_check(report))
    records.append(decay_fit(u, N=N, s=s).record())
    records += F_decay_check(u, nl, config.problem)
    r_max = u.grid.r_max
    x_samples = torch.logspace(
        np.log10(0.05), np.log10(0.8 * r_max), 33, dtype=float_dtype
    )
    records.append(gmu_convolution_bound(u, nl, mu, x_samples, N))
    if N == 2:
        records.append(laplace_residual_2d(report).record())
    # K bounds the right-hand side V u^{N/s-1} - phi f(u) of the equation
    with torch.no_grad():
        rhs = config.problem.V_upper * u.values.abs() ** (N / s - 1) + (
            report.phi.values.abs() * nl.f(u.values)
        )
    K = float(rhs.max())
    records.append(holder_check(u, K, 1.0, (0.0, 1.0, 2.0), N, s))
    return report, records


def run_verify_all(
    config: RunConfig,
    run_dir: str | Path | None = None,
    *,
    verbose: int = 0,
) -> VerificationReport:
    """Run every enabled check and collect the records.

    The report is written to ``run_dir`` (when given) even if a stage
    raises; the exception is then propagated.

    With the solver disabled only the constants, kernel and nonlinearity
    stages run.
    """
    report = VerificationReport()
    directory = RunDirectory(run_dir) if run_dir is not None else None
    toggles = config.verification
    try:
        config, nl = resolve(config)
        if directory is not None:
            directory.write_config(config)
        grid, V = config.make_grid(), config.make_potential()

        if toggles.constants:
            report.extend(constants_records(config))
        if toggles.kernels:
            report.extend(kernel_records(config, grid))
        if toggles.nonlinearity:
            audit = verify_assumptions(
                nl,
                config.problem,
                limit_threshold=config.nonlinearity.limit_threshold,
                mu_form=config.mu_form,
            )
            report.extend(audit.records())
        if not config.solver_enabled:
            return report

        if toggles.seminorm:
            report.extend(seminorm_records(config, grid))
        if toggles.gradient:
            report.extend(gradient_records(config, grid, nl, V))

        if config.continuation.enabled:
            out, records = run_continuation(config, nl, verbose=verbose)
            results, u0 = list(out.results), out.u0
        else:
            result, records = solve(config, nl, 1.0, verbose=verbose)
            results, u0 = [result], result.u_mu
        report.extend(records)
        if directory is not None:
            directory.write_saddles(results)
            directory.write_levels(results)
            directory.write_field("u0", u0)

        if toggles.poisson:
            potential, records = poisson_records(
                u0, nl, config, results[-1].mu
            )
            report.extend(records)
            if directory is not None:
                directory.write_potential(potential)
    finally:
        if directory is not None:
            path = directory.write_report(report)
            logger.info("Wrote %d records to %s", len(report), path)
    return report
