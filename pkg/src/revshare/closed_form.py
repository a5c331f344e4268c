"""Closed-form equilibrium solvers.

Every scenario with an explicit W-based equilibrium formula is solved here.
Conventions shared by all solvers:

* Degenerate regimes (r at or below the scenario's cost threshold) return an
  explicit zero outcome flagged ``degenerate=True`` instead of raising, so
  parameter sweeps never abort.
* ``foc_residual`` is the largest absolute violation of the scenario's
  leader and follower first-order conditions at the returned point.
* Joint contracts carry both the total share and the canonical per-ISP
  split (proportional to effort), so per-ISP utilities are always defined.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .lambertw import lambert_w0
from .model import (
    Branch,
    Contract,
    EffortProfile,
    EquilibriumOutcome,
    InfeasibleEffortError,
    ScenarioKind,
)

__all__ = [
    "ContinuumEquilibrium",
    "solve_public_private",
    "solve_public_private_regulated",
    "solve_symmetric_competitive",
    "solve_symmetric_cooperative",
    "solve_asymmetric_competitive",
    "solve_regulated_competitive",
    "solve_regulated_cooperative",
    "solve_regulated_cooperative_cp_preferred",
    "solve_fixed_public_effort_coop",
    "solve_multi_cp",
    "boundary_case_cp_utility",
    "symmetric_per_isp_utility_forms",
]

E = math.e


def _require_positive(**values: float) -> None:
    for name, v in values.items():
        if not v > 0.0:
            raise ValueError(f"{name} must be positive, got {v!r}")


def _zero_outcome(n_isps: int, joint: bool = False) -> EquilibriumOutcome:
    return EquilibriumOutcome(
        contract=Contract(shares=(0.0,) * n_isps, joint_share=0.0 if joint else None),
        efforts=EffortProfile((0.0,) * n_isps),
        demand=0.0,
        cp_utility=0.0,
        isp_utilities=(0.0,) * n_isps,
        total_effort=0.0,
        foc_residual=0.0,
        degenerate=True,
    )


def _outcome(r, costs, shares, efforts, foc_residual, joint_share=None,
             matches_competitive_total=None) -> EquilibriumOutcome:
    total = sum(efforts)
    d = math.log(total + 1.0)
    total_share = joint_share if joint_share is not None else sum(shares)
    return EquilibriumOutcome(
        contract=Contract(shares=tuple(shares), joint_share=joint_share),
        efforts=EffortProfile(tuple(efforts)),
        demand=d,
        cp_utility=(1.0 - total_share) * r * d,
        isp_utilities=tuple(b * r * d - c * a for b, c, a in zip(shares, costs, efforts)),
        total_effort=total,
        foc_residual=foc_residual,
        degenerate=False,
        matches_competitive_total=matches_competitive_total,
    )


def solve_public_private(r: float, c1: float, c2: float) -> EquilibriumOutcome:
    """One public (break-even) and one private ISP, no obligation on the CP.

    The CP optimally shares nothing with the public ISP, so beta1 = 0,
    beta2 = 1/W(r*e/c2), and only the private ISP invests:
    a2 = r/(c2*W(r*e/c2)) - 1. The public ISP's cost c1 is irrelevant.
    Degenerate for r <= c2.
    """
    _require_positive(r=r, c1=c1, c2=c2)
    if r <= c2:
        return _zero_outcome(2)
    w = lambert_w0(r * E / c2)
    beta2 = 1.0 / w
    a2 = r / (c2 * w) - 1.0
    leader = abs(math.log(beta2 * r / c2) - (1.0 - beta2) / beta2)
    follower = abs(beta2 * r / (a2 + 1.0) - c2)
    return _outcome(r, (c1, c2), (0.0, beta2), (0.0, a2), max(leader, follower))


def solve_public_private_regulated(r: float, c1: float, c2: float,
                                   a1_bar: float) -> EquilibriumOutcome:
    """Public/private market where a regulator forces beta1 > 0.

    The public ISP is held to effort a1_bar and paid exactly break-even:
    beta1 = a1_bar*c1 / (r*log(beta2*r/c2)) so its utility is zero. The
    private share beta2 = 1/W(r*e/c2) is unchanged, and the private effort
    shrinks one-for-one: a2 = r/(c2*W) - a1_bar - 1.
    """
    _require_positive(r=r, c1=c1, c2=c2)
    if a1_bar < 0.0:
        raise ValueError(f"imposed public effort must be non-negative, got {a1_bar!r}")
    if r <= c2:
        return _zero_outcome(2)
    w = lambert_w0(r * E / c2)
    beta2 = 1.0 / w
    a2 = r / (c2 * w) - a1_bar - 1.0
    if a2 < -1e-12:
        raise InfeasibleEffortError(
            f"a1_bar={a1_bar!r} exceeds the total effort budget "
            f"{r / (c2 * w) - 1.0:.6g}; private effort would be negative"
        )
    a2 = max(a2, 0.0)
    log_ratio = math.log(beta2 * r / c2)
    beta1 = a1_bar * c1 / (r * log_ratio)
    if beta1 + beta2 > 1.0 + 1e-12:
        raise InfeasibleEffortError(
            "break-even share for the public ISP pushes the total share above one"
        )
    leader = abs(math.log(beta2 * r / c2) - (1.0 - beta2) / beta2)
    follower = abs(beta2 * r / (a1_bar + a2 + 1.0) - c2)
    return _outcome(r, (c1, c2), (beta1, beta2), (a1_bar, a2), max(leader, follower))


def solve_symmetric_competitive(r: float, c: float, n: int) -> EquilibriumOutcome:
    """n private ISPs with equal cost c, each contracted individually.

    Per-ISP share beta = 1/(n*W(r*e/c)); each effort a = beta*r/c - 1/n, so
    total effort r/(c*W) - 1 and demand W - 1 are independent of n, as is
    the CP's utility r*(W-1)^2/W.
    """
    _require_positive(r=r, c=c)
    if n < 1:
        raise ValueError(f"need at least one ISP, got n={n!r}")
    if r <= c:
        return _zero_outcome(n)
    w = lambert_w0(r * E / c)
    beta = 1.0 / (n * w)
    a = beta * r / c - 1.0 / n
    total = n * a
    # Leader optimum of (1 - n*beta) * r * log(n*beta*r/c).
    leader = abs(math.log(n * beta * r / c) - (1.0 - n * beta) / (n * beta))
    follower = abs(total + 1.0 - n * beta * r / c)
    return _outcome(r, (c,) * n, (beta,) * n, (a,) * n, max(leader, follower))


def solve_symmetric_cooperative(r: float, c: float, n: int) -> EquilibriumOutcome:
    """n equal-cost ISPs under a single joint contract, split equally.

    Joint share beta = 1/W(r*e/c) with per-ISP efforts (beta*r/c - 1)/n;
    totals coincide exactly with the competitive solve, which is why
    symmetric markets gain nothing from forcing cooperation.
    """
    _require_positive(r=r, c=c)
    if n < 1:
        raise ValueError(f"need at least one ISP, got n={n!r}")
    if r <= c:
        return _zero_outcome(n, joint=True)
    w = lambert_w0(r * E / c)
    beta = 1.0 / w
    a = (beta * r / c - 1.0) / n
    total = n * a
    leader = abs(math.log(beta * r / c) - (1.0 - beta) / beta)
    follower = abs(total + 1.0 - beta * r / c)
    return _outcome(r, (c,) * n, (beta / n,) * n, (a,) * n, max(leader, follower),
                    joint_share=beta)


@dataclass(frozen=True)
class ContinuumEquilibrium:
    """Asymmetric competitive equilibrium: shares and total effort are
    pinned, but any split a1 = t*total, a2 = (1-t)*total is a best-response
    pair, so the equilibrium is a continuum indexed by t in [0, 1].

    The canonical split t = c1/(c1+c2) matches the regulated scenario and
    makes the two directly comparable.
    """

    r: float
    c1: float
    c2: float
    total_effort: float
    shares: Contract
    split_parameter: float
    canonical: bool
    degenerate: bool

    @property
    def cp_utility(self) -> float:
        return (1.0 - self.shares.total_share) * self.r * math.log(self.total_effort + 1.0)

    def outcome_at(self, t: float) -> EquilibriumOutcome:
        """Materialize the equilibrium at split a1 = t*total_effort."""
        if not 0.0 <= t <= 1.0:
            raise ValueError(f"split parameter must lie in [0, 1], got {t!r}")
        if self.degenerate:
            return _zero_outcome(2)
        a1 = t * self.total_effort
        a2 = self.total_effort - a1
        b1, b2 = self.shares.shares
        residual = max(
            abs(b1 * self.r / (self.total_effort + 1.0) - self.c1),
            abs(b2 * self.r / (self.total_effort + 1.0) - self.c2),
        )
        return _outcome(self.r, (self.c1, self.c2), (b1, b2), (a1, a2), residual)


def solve_asymmetric_competitive(r: float, c1: float, c2: float) -> ContinuumEquilibrium:
    """Two private ISPs with costs c1, c2, contracted individually.

    The CP's optimum keeps both ISPs interior, which forces
    beta1/beta2 = c1/c2 and gives beta_i = c_i/((c1+c2)*W(r*e/(c1+c2)))
    with total effort r/((c1+c2)*W) - 1. Degenerate for r <= c1+c2.
    """
    _require_positive(r=r, c1=c1, c2=c2)
    k = c1 + c2
    if r <= k:
        return ContinuumEquilibrium(
            r=r, c1=c1, c2=c2, total_effort=0.0,
            shares=Contract(shares=(0.0, 0.0)),
            split_parameter=c1 / k, canonical=True, degenerate=True,
        )
    w = lambert_w0(r * E / k)
    b1 = c1 / (k * w)
    b2 = c2 / (k * w)
    total = r / (k * w) - 1.0
    return ContinuumEquilibrium(
        r=r, c1=c1, c2=c2, total_effort=total,
        shares=Contract(shares=(b1, b2)),
        split_parameter=c1 / k, canonical=True, degenerate=False,
    )


def solve_regulated_competitive(r: float, c1: float, c2: float) -> EquilibriumOutcome:
    """Asymmetric competitive market with efforts regulated to follow shares.

    The intervention a1/a2 = beta1/beta2 selects the canonical point of the
    competitive continuum: shares and total effort as in the unregulated
    case, with the unique split a_i = c_i/(c1+c2) * total.
    """
    cont = solve_asymmetric_competitive(r, c1, c2)
    return cont.outcome_at(cont.split_parameter)


def solve_regulated_cooperative(r: float, c1: float, c2: float,
                                branch: Branch) -> EquilibriumOutcome:
    """Joint contract under the effort-follows-share regulation.

    The coalition's first-order condition pins total effort through one
    ISP's cost: total + 1 = beta*r/c_b for branch cost c_b, giving
    beta = 1/W(r*e/c_b) and efforts a_i = c_i/(c1+c2) * total. Both
    branches are stationary; use the CP-preferred wrapper to pick one.
    """
    _require_positive(r=r, c1=c1, c2=c2)
    cb = c1 if branch is Branch.ISP1 else c2
    if r <= cb:
        return _zero_outcome(2, joint=True)
    k = c1 + c2
    w = lambert_w0(r * E / cb)
    beta = 1.0 / w
    total = r / (cb * w) - 1.0
    a1 = c1 / k * total
    a2 = c2 / k * total
    # Split proportional to effort, the constraint the regulation imposes.
    shares = (beta * c1 / k, beta * c2 / k)
    leader = abs(math.log(beta * r / cb) - (1.0 - beta) / beta)
    follower = abs(total + 1.0 - beta * r / cb)
    return _outcome(r, (c1, c2), shares, (a1, a2), max(leader, follower),
                    joint_share=beta)


def solve_regulated_cooperative_cp_preferred(
        r: float, c1: float, c2: float) -> tuple[Branch, EquilibriumOutcome]:
    """Resolve the branch choice by maximizing the CP's utility.

    The cheaper-cost branch wins because x/W(x) is increasing, so the raw
    per-branch solver remains available for the dominated branch.
    """
    best: tuple[Branch, EquilibriumOutcome] | None = None
    for branch in (Branch.ISP1, Branch.ISP2):
        outcome = solve_regulated_cooperative(r, c1, c2, branch)
        if best is None or outcome.cp_utility > best[1].cp_utility:
            best = (branch, outcome)
    return best


def solve_fixed_public_effort_coop(r: float, c1: float, c2: float,
                                   a1_bar: float) -> EquilibriumOutcome:
    """Joint contract when the public ISP's effort is fixed at a1_bar.

    The private ISP maximizes the coalition payoff, so total + 1 = beta*r/c2
    with beta = 1/W(r*e/c2): total effort is independent of a1_bar and equal
    to the one-public competitive total, which the outcome records in
    ``matches_competitive_total``.
    """
    _require_positive(r=r, c1=c1, c2=c2)
    if a1_bar < 0.0:
        raise ValueError(f"fixed public effort must be non-negative, got {a1_bar!r}")
    if r <= c2:
        return _zero_outcome(2, joint=True)
    w = lambert_w0(r * E / c2)
    beta = 1.0 / w
    total = r / (c2 * w) - 1.0
    a2 = total - a1_bar
    if a2 < -1e-12:
        raise InfeasibleEffortError(
            f"a1_bar={a1_bar!r} exceeds the total effort budget {total:.6g}"
        )
    a2 = max(a2, 0.0)
    shares = (beta * a1_bar / total, beta * a2 / total)
    leader = abs(math.log(beta * r / c2) - (1.0 - beta) / beta)
    follower = abs(beta * r / (total + 1.0) - c2)
    competitive_total = solve_public_private(r, c1, c2).total_effort
    return _outcome(
        r, (c1, c2), shares, (a1_bar, a2), max(leader, follower), joint_share=beta,
        matches_competitive_total=abs(total - competitive_total) <= 1e-9 * max(1.0, total),
    )


def solve_multi_cp(r1: float, r2: float, c1: float, c2: float,
                   mode: ScenarioKind, branch: Branch | None = None,
                   ) -> list[EquilibriumOutcome]:
    """Two CPs with rates r1, r2 contracting the same two ISPs.

    Utilities are additive across CPs and each (ISP, CP) effort is its own
    decision variable, so the market decouples into two single-CP problems
    solved at the respective rate. Competitive mode uses the regulated
    split; cooperative mode needs a branch. Degeneracy is per CP.
    """
    _require_positive(r1=r1, r2=r2, c1=c1, c2=c2)
    if mode is ScenarioKind.MULTI_CP_COMPETITIVE:
        return [solve_regulated_competitive(rj, c1, c2) for rj in (r1, r2)]
    if mode is ScenarioKind.MULTI_CP_COOPERATIVE:
        if branch is None:
            raise ValueError("cooperative two-CP solve needs a branch")
        return [solve_regulated_cooperative(rj, c1, c2, branch) for rj in (r1, r2)]
    raise ValueError(f"mode must be one of the two-CP scenarios, got {mode!r}")


def boundary_case_cp_utility(r: float, c1: float, c2: float, multiplier: float) -> float:
    """CP utility if a boundary best-response case with multiplier lam >= 0
    were imposed: the cost sum shifts to c1 + c2 + lam, which can only
    lower r*(W-1)^2/W. The interior case is multiplier = 0."""
    _require_positive(r=r, c1=c1, c2=c2)
    if multiplier < 0.0:
        raise ValueError("multiplier must be non-negative")
    k = c1 + c2 + multiplier
    if r <= k:
        return 0.0
    w = lambert_w0(r * E / k)
    return r * (w - 1.0) ** 2 / w


def symmetric_per_isp_utility_forms(r: float, c: float, n: int) -> tuple[float, float]:
    """Direct per-ISP utility at the symmetric competitive equilibrium and
    its algebraically distributed variant r*(1 - (n+1)/(n*W)) + c/n.

    The two agree only at n = 1; the direct definition is authoritative and
    is what the solvers report. Both are returned so the gap stays visible
    rather than silently patched.
    """
    out = solve_symmetric_competitive(r, c, n)
    if out.degenerate:
        return 0.0, 0.0
    w = lambert_w0(r * E / c)
    return out.isp_utilities[0], r * (1.0 - (n + 1.0) / (n * w)) + c / n
