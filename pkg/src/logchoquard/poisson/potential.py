"""Poisson potential phi_u = C_N log(1/|.|) * F(u) and its integrals.

The potential of a nonnegative radial density F is assembled with the
logarithmic convolution of `logchoquard.kernels`. Beyond the support of F
it behaves like -C_N ||F||_1 log r, which gives the asymptotic audit and the
analytic tails of the weighted integrals.
"""

from __future__ import annotations

import logging
from typing import NamedTuple

import numpy as np
import torch
from scipy import integrate

from ..constants import riesz_constant, sphere_measure
from ..errors import InvalidParameterError
from ..input_validation import convert_inputs, typecheck
from ..kernels import KernelSpec, convolution_operator, radial_convolution
from ..nonlinearity import BaseNonlinearity
from ..radial import RadialField, tail_bound
from ..types import Float1dTensor, FloatSequence, Number, float_dtype
from ..verification import CheckRecord, make_record, skip_record

logger = logging.getLogger(__name__)

DEFAULT_GAMMAS = (0.5, 1.0, 2.0)
# audits stay inside this fraction of r_max
AUDIT_FRACTION = 0.8


class PotentialReport(NamedTuple):
    """Poisson potential of a density and its audited integrals.

    Parameters
    ----------
    phi : RadialField
        The potential at the grid nodes.
    density : RadialField
        The density F(u).
    F_mass : float
        ||F(u)||_1.
    asymptotic_deviation : float
        sup over the audit radii of |phi(r) + C_N F_mass log r|.
    audit_radii : tuple of float
        Radii of the asymptotic audit.
    lgamma_norms : dict
        int |phi| / (1 + |x|^{N + 2 gamma}) for every sampled gamma.
    logF_integral : float
        int log(1 + |x|) F(u).
    tail_mass : float
        Bound on the mass of F(u) beyond r_max, from its fitted decay.
    N : int
        Dimension.
    """

    phi: RadialField
    density: RadialField
    F_mass: float
    asymptotic_deviation: float
    audit_radii: tuple[float, ...]
    lgamma_norms: dict[float, float]
    logF_integral: float
    tail_mass: float
    N: int

    def records(self) -> list[CheckRecord]:
        records = []
        for gamma, value in self.lgamma_norms.items():
            record = make_record(
                f"lgamma-norm-{gamma:g}",
                "lgamma-membership",
                measured=value,
                bound=float("inf"),
                note=f"gamma={gamma:g}",
            )
            records.append(record._replace(passed=bool(np.isfinite(value))))
        moment = make_record(
            "log-moment",
            "potential-log-moment",
            measured=self.logF_integral,
            bound=float("inf"),
        )
        records.append(
            moment._replace(passed=bool(np.isfinite(self.logF_integral)))
        )
        return records

    def as_dict(self) -> dict:
        """Plain dictionary without the field values."""
        out = self._asdict()
        out["phi"] = {"sup": self.phi.sup, "n_nodes": self.phi.grid.n_nodes}
        out["density"] = {"sup": self.density.sup}
        out["audit_radii"] = list(self.audit_radii)
        out["lgamma_norms"] = {
            f"{g:g}": v for g, v in self.lgamma_norms.items()
        }
        return out


def _default_audit_radii(r_max: float) -> torch.Tensor:
    return torch.logspace(
        np.log10(r_max / 10),
        np.log10(AUDIT_FRACTION * r_max),
        16,
        dtype=float_dtype,
    )


@typecheck
def lgamma_norm(
    phi: RadialField, gamma: Number, N: int, *, F_mass: Number = 0.0
) -> float:
    """Weighted integral int |phi| / (1 + |x|^{N + 2 gamma}).

    Beyond r_max, phi is replaced by its asymptotic model -C_N F_mass log r
    and the tail is integrated with scipy.

    Raises
    ------
    InvalidParameterError
        if gamma <= 0
    """
    if gamma <= 0:
        msg = f"gamma must be positive, got gamma={gamma}"
        raise InvalidParameterError(msg)
    grid = phi.grid
    weight = 1 / (1 + grid.points ** (N + 2 * gamma))
    inner = float(grid.integrate(phi.at_points().abs() * weight, N))
    C_N = riesz_constant(N)

    def tail(r):
        return abs(C_N * F_mass * np.log(r)) * r ** (N - 1) / (
            1 + r ** (N + 2 * gamma)
        )

    outer, _ = integrate.quad(tail, grid.r_max, np.inf, limit=200)
    return inner + sphere_measure(N) * outer


@typecheck
def logF_integral(u: RadialField, nl: BaseNonlinearity, N: int) -> float:
    """int log(1 + |x|) F(u(x)) dx."""
    grid = u.grid
    with torch.no_grad():
        F = nl.primitive(u.at_points())
    return float(grid.integrate(torch.log1p(grid.points) * F, N))


@convert_inputs
@typecheck
def potential_from_density(
    density: RadialField,
    N: int,
    *,
    gammas: FloatSequence = DEFAULT_GAMMAS,
    audit_radii: Float1dTensor | None = None,
    log_moment: Number | None = None,
) -> PotentialReport:
    """Poisson potential C_N log(1/|.|) * F of a nonnegative density F.

    ``log_moment`` is int log(1 + |x|) F; it is computed from the nodal
    interpolant of F when not given.

    Raises
    ------
    NonpositiveFieldError
        if the density takes negative values
    TailDivergenceError
        if the fitted decay of the density is not integrable

    Examples
    --------
    >>> grid = lcq.RadialGrid(lcq.GridSpec(n_uniform=64, breakpoints=(1.0,)))
    >>> F = lcq.RadialField(grid, function=lambda r: (r <= 1).double())
    >>> report = lcq.potential_from_density(F, 2)
    >>> report.asymptotic_deviation < 1e-6
    True
    """
    grid = density.grid
    C_N = riesz_constant(N)
    phi = C_N * radial_convolution(KernelSpec("log"), density, N)
    F_mass = float(grid.integrate(density.at_points(), N))
    tail_mass = tail_bound(density, 1, N).lp_tail
    if log_moment is None:
        log_moment = float(
            grid.integrate(torch.log1p(grid.points) * density.at_points(), N)
        )

    if audit_radii is None:
        audit_radii = _default_audit_radii(grid.r_max)
    operator = convolution_operator(grid, KernelSpec("log"), N).at(audit_radii)
    with torch.no_grad():
        phi_audit = C_N * operator(density)
    deviation = float(
        (phi_audit + C_N * F_mass * torch.log(audit_radii)).abs().max()
    )
    lgamma = {
        float(g): lgamma_norm(phi, float(g), N, F_mass=F_mass) for g in gammas
    }
    logger.info(
        "Poisson potential: mass %.8g, asymptotic deviation %.3g",
        F_mass,
        deviation,
    )
    return PotentialReport(
        phi=phi,
        density=density,
        F_mass=F_mass,
        asymptotic_deviation=deviation,
        audit_radii=tuple(audit_radii.tolist()),
        lgamma_norms=lgamma,
        logF_integral=float(log_moment),
        tail_mass=tail_mass,
        N=N,
    )


@typecheck
def poisson_potential(
    u: RadialField,
    nl: BaseNonlinearity,
    N: int,
    *,
    gammas: FloatSequence = DEFAULT_GAMMAS,
) -> PotentialReport:
    """Poisson potential phi_u = C_N log(1/|.|) * F(u) of a radial field.

    See `potential_from_density`; the density is the nodal interpolant of
    F(u) and the log moment is computed with F evaluated on u.
    """
    with torch.no_grad():
        density = RadialField(u.grid, values=nl.primitive(u.values))
    return potential_from_density(
        density, N, gammas=gammas, log_moment=logF_integral(u, nl, N)
    )


@typecheck
def asymptotic_check(
    report: PotentialReport,
    audit_radius: Number | None = None,
    *,
    rtol: Number = 0.05,
) -> CheckRecord:
    """Check |phi(r) / (-C_N F_mass log r) - 1| <= rtol at one radius.

    The radius defaults to the largest audit radius of the report, which
    stays below 0.8 r_max. The check is skipped when F_mass vanishes.
    """
    if report.F_mass == 0:
        return skip_record(
            "potential-asymptotics",
            "potential-asymptotics",
            "the density has zero mass",
        )
    if audit_radius is None:
        audit_radius = max(report.audit_radii)
    if audit_radius <= 1:
        msg = f"The audit radius must exceed 1, got {audit_radius}"
        raise InvalidParameterError(msg)
    C_N = riesz_constant(report.N)
    r = torch.tensor([float(audit_radius)], dtype=float_dtype)
    phi = float(report.phi(r)[0])
    model = -C_N * report.F_mass * float(np.log(audit_radius))
    return make_record(
        "potential-asymptotics",
        "potential-asymptotics",
        measured=abs(phi / model - 1),
        bound=rtol,
        witness=float(audit_radius),
        note=f"density mass beyond r_max <= {report.tail_mass:.3g}",
    )
