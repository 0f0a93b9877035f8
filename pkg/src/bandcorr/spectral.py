"""Spectral parameters (alpha, u, zeta, b, R) and the regime classification."""
from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass

from .profile import BandModel, ProfileMoments, build_moments, epsilon_cutoff

__all__ = [
    "Regime",
    "Status",
    "SpectralParams",
    "AssumptionCheck",
    "AssumptionReport",
    "ParameterError",
    "compute_params",
    "alpha_parameter",
    "semicircle_density",
    "validate_assumptions",
    "thouless_energy",
    "b_from_u",
]

MEAN_FIELD_MAX_B = 0.1
DIFFUSIVE_MIN_B = 10.0
# "much larger" is read as a ratio of at least this much
DOMINANCE_RATIO = 10.0


class ParameterError(ValueError):
    pass


class Regime(str, enum.Enum):
    MEAN_FIELD = "mean-field"
    CROSSOVER = "crossover"
    DIFFUSIVE = "diffusive"


class Status(str, enum.Enum):
    PASS = "pass"
    WARN = "warn"
    FAIL = "fail"
    INFO = "info"


@dataclass(frozen=True)
class SpectralParams:
    E1: float
    E2: float
    eta: float
    omega: float
    E: float
    nu: float
    alpha: complex
    u: float
    zeta: complex
    b: float
    R: float
    regime: Regime


def semicircle_density(E: float) -> float:
    """nu(E) = 2 sqrt(1 - E^2) / pi."""
    return 2.0 * math.sqrt(1.0 - E * E) / math.pi


def alpha_parameter(E1: float, E2: float, eta: float) -> complex:
    """exp(i (arcsin(E1 + i eta) - arcsin(E2 - i eta))), principal branch."""
    return cmath.exp(1j * (cmath.asin(complex(E1, eta)) - cmath.asin(complex(E2, -eta))))


def b_from_u(u: float, model: BandModel, D: float) -> float:
    return (math.sqrt(u) * model.L / (2.0 * math.pi * model.W)) ** 2 / D


def _regime(b: float) -> Regime:
    if b < MEAN_FIELD_MAX_B:
        return Regime.MEAN_FIELD
    if b > DIFFUSIVE_MIN_B:
        return Regime.DIFFUSIVE
    return Regime.CROSSOVER


def compute_params(
    E1: float,
    E2: float,
    eta: float,
    model: BandModel,
    moments: ProfileMoments | None = None,
    eps: float | None = None,
) -> SpectralParams:
    """Derive all spectral parameters for the energy pair (E1, E2) at scale eta.

    ``eps`` overrides the cutoff radius used for R; by default it comes from
    :func:`bandcorr.profile.epsilon_cutoff`, which needs an enumerable profile
    for non top-hat models.
    """
    if not (-1.0 < E1 < 1.0 and -1.0 < E2 < 1.0):
        raise ParameterError(f"energies must lie in (-1, 1), got E1={E1}, E2={E2}")
    if E2 <= E1:
        raise ParameterError(f"need E2 > E1, got E1={E1}, E2={E2}")
    if eta <= 0:
        raise ParameterError(f"eta must be positive, got {eta}")
    moments = moments or build_moments(model)
    alpha = alpha_parameter(E1, E2, eta)
    one_minus = 1.0 - alpha
    u = abs(one_minus)
    zeta = one_minus / u if u > 0 else 1j
    b = b_from_u(u, model, moments.Dscalar)
    if eps is None:
        eps = epsilon_cutoff(model).eps
    E = 0.5 * (E1 + E2)
    return SpectralParams(
        E1=E1,
        E2=E2,
        eta=eta,
        omega=E2 - E1,
        E=E,
        nu=semicircle_density(E),
        alpha=alpha,
        u=u,
        zeta=zeta,
        b=b,
        R=eps * model.L / (2.0 * math.pi * model.W),
        regime=_regime(b),
    )


def thouless_energy(model: BandModel) -> float:
    return model.W**2 / model.L**2


@dataclass(frozen=True)
class AssumptionCheck:
    name: str
    measured: float
    status: Status
    note: str = ""


@dataclass(frozen=True)
class AssumptionReport:
    checks: tuple[AssumptionCheck, ...]

    @property
    def hard_failure(self) -> bool:
        return any(c.status is Status.FAIL for c in self.checks)

    @property
    def warnings(self) -> list[AssumptionCheck]:
        return [c for c in self.checks if c.status is Status.WARN]

    def by_name(self, name: str) -> AssumptionCheck:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def format(self) -> str:
        width = max(len(c.name) for c in self.checks)
        lines = []
        for c in self.checks:
            line = f"[{c.status.value:>4}] {c.name:<{width}}  measured={c.measured:.6g}"
            if c.note:
                line += f"  ({c.note})"
            lines.append(line)
        return "\n".join(lines)


def _ratio_check(name: str, ratio: float, fail_if_below_one: bool, note: str) -> AssumptionCheck:
    if fail_if_below_one and ratio <= 1.0:
        status = Status.FAIL
    elif ratio >= DOMINANCE_RATIO:
        status = Status.PASS
    else:
        status = Status.WARN
    return AssumptionCheck(name, ratio, status, note)


def validate_assumptions(
    params: SpectralParams, model: BandModel, moments: ProfileMoments | None = None
) -> AssumptionReport:
    """One entry per standing assumption, with the measured ratio.

    Order reversals (omega <= eta, W >= L) are hard failures; other
    violations of "much larger" only warn.  The unquantified exponent C in
    ``L <= W^C``, the edge margin kappa and the bound ``omega <= c_*`` are
    reported as information.
    """
    moments = moments or build_moments(model)
    checks = [
        _ratio_check("omega >> eta", params.omega / params.eta, True, "omega/eta"),
        _ratio_check("W << L", model.L / model.W, True, "L/W"),
        _ratio_check("eta << 1", 1.0 / params.eta, False, "1/eta"),
        _ratio_check(
            "eta >> M^(-1/3)", params.eta * moments.M ** (1.0 / 3.0), False, "eta*M^(1/3)"
        ),
    ]
    C = math.log(model.L) / math.log(model.W) if model.W > 1 else math.inf
    checks.append(AssumptionCheck("L <= W^C", C, Status.INFO, "log L / log W"))
    kappa = 1.0 - max(abs(params.E1), abs(params.E2))
    checks.append(
        AssumptionCheck(
            "E1,E2 in [-1+kappa, 1-kappa]",
            kappa,
            Status.INFO if kappa > 0 else Status.FAIL,
            "kappa margin",
        )
    )
    checks.append(AssumptionCheck("omega <= c_*", params.omega, Status.INFO, "omega"))
    return AssumptionReport(tuple(checks))
