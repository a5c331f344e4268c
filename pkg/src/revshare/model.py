"""Core domain types and the market's utility/demand functions.

The economy: a content provider (CP) earns r per unit demand and offers
revenue-share fractions beta_i to ISPs; ISP i invests effort a_i at cost
c_i per unit; demand is log(sum of efforts + 1). Natural log throughout,
since the W-based closed forms are only consistent with base e.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

__all__ = [
    "Branch",
    "ScenarioKind",
    "MarketParams",
    "Contract",
    "EffortProfile",
    "EquilibriumOutcome",
    "BargainingResult",
    "DisagreementPolicy",
    "ValidationReport",
    "DegenerateRegimeError",
    "InfeasibleEffortError",
    "InfeasibleBargainError",
    "demand",
    "cp_utility",
    "isp_utility",
    "validate",
]

# Slack for validating stored invariants against floating-point noise.
_ATOL = 1e-9


class DegenerateRegimeError(Exception):
    """Raised when an operation needs a non-degenerate regime but r is below
    the scenario's cost threshold."""


class InfeasibleEffortError(Exception):
    """Raised when an imposed effort level leaves no room for a non-negative
    complementary effort."""


class InfeasibleBargainError(Exception):
    """Raised when no effort/share allocation gives every bargainer strictly
    more than its disagreement utility."""


class Branch(str, Enum):
    """Which ISP's first-order condition pins total effort in joint-contract
    scenarios with asymmetric costs."""

    ISP1 = "isp1"
    ISP2 = "isp2"


class ScenarioKind(str, Enum):
    PUBLIC_PRIVATE = "public-private"
    PUBLIC_PRIVATE_REGULATED = "public-private-regulated"
    SYMMETRIC_COMPETITIVE = "symmetric-competitive"
    SYMMETRIC_COOPERATIVE = "symmetric-cooperative"
    ASYMMETRIC_COMPETITIVE = "asymmetric-competitive"
    REGULATED_COMPETITIVE = "regulated-competitive"
    REGULATED_COOPERATIVE = "regulated-cooperative"
    FIXED_PUBLIC_EFFORT_COOPERATIVE = "fixed-public-effort-cooperative"
    MULTI_CP_COMPETITIVE = "multi-cp-competitive"
    MULTI_CP_COOPERATIVE = "multi-cp-cooperative"


@dataclass(frozen=True)
class MarketParams:
    """Exogenous inputs: revenue rate r, per-ISP effort costs, and the
    optional second CP's rate for the two-CP market."""

    r: float
    costs: tuple[float, ...]
    second_cp_rate: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "costs", tuple(float(c) for c in self.costs))
        if not self.r > 0.0:
            raise ValueError(f"revenue rate must be positive, got {self.r!r}")
        if not self.costs:
            raise ValueError("at least one ISP cost is required")
        if any(c <= 0.0 for c in self.costs):
            raise ValueError(f"all costs must be positive, got {self.costs!r}")
        if self.second_cp_rate is not None and not self.second_cp_rate > 0.0:
            raise ValueError("second CP rate must be positive when given")

    @property
    def n(self) -> int:
        return len(self.costs)

    @property
    def costs_ascending(self) -> bool:
        """True when costs are ordered c1 <= c2 <= ...; the asymmetric
        results assume the second ISP is the costlier one."""
        return all(a <= b for a, b in zip(self.costs, self.costs[1:]))


@dataclass(frozen=True)
class Contract:
    """Revenue-share fractions beta_i, plus the total share for scenarios
    where the CP pays the ISPs jointly."""

    shares: tuple[float, ...]
    joint_share: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "shares", tuple(float(b) for b in self.shares))
        for b in self.shares:
            if b < -_ATOL or b > 1.0 + _ATOL:
                raise ValueError(f"share out of [0, 1]: {b!r}")
        if sum(self.shares) > 1.0 + _ATOL:
            raise ValueError(f"shares sum to more than 1: {self.shares!r}")
        if self.joint_share is not None and not -_ATOL <= self.joint_share <= 1.0 + _ATOL:
            raise ValueError(f"joint share out of [0, 1]: {self.joint_share!r}")

    @property
    def total_share(self) -> float:
        return self.joint_share if self.joint_share is not None else sum(self.shares)


@dataclass(frozen=True)
class EffortProfile:
    """Non-negative ISP investment efforts a_i."""

    efforts: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "efforts", tuple(float(a) for a in self.efforts))
        if any(a < -_ATOL for a in self.efforts):
            raise ValueError(f"efforts must be non-negative, got {self.efforts!r}")

    @property
    def total(self) -> float:
        return sum(self.efforts)


@dataclass(frozen=True)
class EquilibriumOutcome:
    """A solved scenario: contract, efforts, and derived quantities.

    ``foc_residual`` is the largest absolute violation of the scenario's
    first-order conditions at the returned point. ``degenerate`` marks the
    zero-share, zero-effort equilibrium that applies when r is below the
    scenario's cost threshold. ``matches_competitive_total`` is only set by
    the fixed-public-effort cooperative solve, where it records that total
    effort coincides with the one-public-ISP competitive total.
    """

    contract: Contract
    efforts: EffortProfile
    demand: float
    cp_utility: float
    isp_utilities: tuple[float, ...]
    total_effort: float
    foc_residual: float
    degenerate: bool
    matches_competitive_total: bool | None = None

    def __post_init__(self):
        object.__setattr__(self, "isp_utilities", tuple(float(u) for u in self.isp_utilities))
        if abs(self.total_effort - self.efforts.total) > _ATOL * max(1.0, self.efforts.total):
            raise ValueError("total_effort disagrees with the effort profile")
        if abs(self.demand - math.log(self.total_effort + 1.0)) > 1e-12 * max(1.0, abs(self.demand)):
            raise ValueError("demand disagrees with log(total effort + 1)")


@dataclass(frozen=True)
class DisagreementPolicy:
    """How the bargaining disagreement point (d1, d2) is chosen.

    The competitive fallback is what each ISP would earn without a joint
    contract; it is an explicit parameter because the unregulated
    competitive scenario has a continuum of per-ISP utilities, so no single
    resolution is canonical.
    """

    kind: str  # "zero" | "regulated-competitive" | "custom"
    d1: float = 0.0
    d2: float = 0.0

    _KINDS = ("zero", "regulated-competitive", "custom")

    def __post_init__(self):
        if self.kind not in self._KINDS:
            raise ValueError(f"unknown disagreement policy {self.kind!r}")
        if self.kind == "custom" and not (math.isfinite(self.d1) and math.isfinite(self.d2)):
            raise ValueError("custom disagreement values must be finite")

    @classmethod
    def zero(cls) -> "DisagreementPolicy":
        return cls("zero")

    @classmethod
    def regulated_competitive(cls) -> "DisagreementPolicy":
        return cls("regulated-competitive")

    @classmethod
    def custom(cls, d1: float, d2: float) -> "DisagreementPolicy":
        return cls("custom", float(d1), float(d2))


@dataclass(frozen=True)
class BargainingResult:
    """Outcome of a Nash-bargaining stage.

    ``share_split`` is the implied (beta1, beta2) division of the joint
    share; ``surpluses`` are the factors F_i = U_i - d_i of the Nash
    product at the solution; ``multistart_agreement`` is the largest
    pairwise distance between multistart maximizers (uniqueness check).
    """

    efforts: EffortProfile
    share_split: tuple[float, float]
    surpluses: tuple[float, float]
    disagreement: tuple[float, float]
    converged: bool
    multistart_agreement: float


@dataclass(frozen=True)
class ValidationReport:
    """Whether a scenario's non-degeneracy condition holds for the given
    parameters; never raises, only reports."""

    scenario: ScenarioKind
    valid: bool
    degenerate: bool
    condition: str
    threshold: float
    notes: tuple[str, ...] = ()


def demand(efforts: EffortProfile) -> float:
    """Demand increment log(sum of efforts + 1); zero iff all efforts are zero."""
    return math.log(efforts.total + 1.0)


def cp_utility(params: MarketParams, contract: Contract, efforts: EffortProfile) -> float:
    """CP's retained revenue (1 - total share) * r * demand."""
    if contract.joint_share is None and len(contract.shares) != len(efforts.efforts):
        raise ValueError(
            f"contract has {len(contract.shares)} shares but profile has "
            f"{len(efforts.efforts)} efforts"
        )
    return (1.0 - contract.total_share) * params.r * demand(efforts)


def isp_utility(params: MarketParams, i: int, contract: Contract, efforts: EffortProfile) -> float:
    """ISP i's net payoff beta_i * r * demand - c_i * a_i."""
    if not 0 <= i < len(efforts.efforts):
        raise IndexError(f"ISP index {i} out of range for {len(efforts.efforts)} ISPs")
    if i >= len(contract.shares):
        raise ValueError("per-ISP share undefined: joint contract carries no split")
    if i >= len(params.costs):
        raise IndexError(f"ISP index {i} out of range for {len(params.costs)} costs")
    return contract.shares[i] * params.r * demand(efforts) - params.costs[i] * efforts.efforts[i]


def _threshold(params: MarketParams, scenario: ScenarioKind) -> tuple[float, str, list[str]]:
    notes: list[str] = []
    if scenario in (ScenarioKind.SYMMETRIC_COMPETITIVE, ScenarioKind.SYMMETRIC_COOPERATIVE):
        c = params.costs[0]
        if any(abs(ci - c) > _ATOL * max(1.0, c) for ci in params.costs):
            notes.append("symmetric scenario given unequal costs; using the first cost")
        return c, "r > c", notes
    if scenario in (
        ScenarioKind.PUBLIC_PRIVATE,
        ScenarioKind.PUBLIC_PRIVATE_REGULATED,
        ScenarioKind.FIXED_PUBLIC_EFFORT_COOPERATIVE,
    ):
        if params.n < 2:
            notes.append("scenario expects two ISPs (public, private)")
        return params.costs[-1], "r > c2", notes
    if scenario in (ScenarioKind.ASYMMETRIC_COMPETITIVE, ScenarioKind.REGULATED_COMPETITIVE,
                    ScenarioKind.MULTI_CP_COMPETITIVE):
        return sum(params.costs), "r > c1 + c2", notes
    if scenario in (ScenarioKind.REGULATED_COOPERATIVE, ScenarioKind.MULTI_CP_COOPERATIVE):
        return max(params.costs), "r > max(c1, c2)", notes
    raise AssertionError(f"unhandled scenario {scenario}")


def validate(params: MarketParams, scenario: ScenarioKind) -> ValidationReport:
    """Report whether the scenario's non-degeneracy condition holds.

    When it does not, the zero-share, zero-effort equilibrium applies: the
    CP has no incentive to share because total effort would stay below one
    demand unit. Multi-CP scenarios require the condition for both rates.
    """
    threshold, condition, notes = _threshold(params, scenario)
    valid = params.r > threshold
    if scenario in (ScenarioKind.MULTI_CP_COMPETITIVE, ScenarioKind.MULTI_CP_COOPERATIVE):
        if params.second_cp_rate is None:
            notes.append("two-CP scenario without a second rate; checked the first rate only")
        else:
            if not params.second_cp_rate > threshold:
                notes.append("second CP rate is in the degenerate regime")
            valid = valid and params.second_cp_rate > threshold
    if not valid:
        notes.append("degenerate regime: zero shares and zero efforts are the equilibrium")
    return ValidationReport(
        scenario=scenario,
        valid=valid,
        degenerate=not valid,
        condition=condition,
        threshold=threshold,
        notes=tuple(notes),
    )
