import math

import numpy as np
import pytest

from revshare.closed_form import (
    solve_asymmetric_competitive,
    solve_regulated_competitive,
    solve_symmetric_cooperative,
)
from revshare.model import DisagreementPolicy, InfeasibleBargainError
from revshare.oracle import (
    KktRegion,
    SearchConfig,
    best_response_effort,
    kkt_classify,
    leader_optimum,
    nash_product_maximize,
    regulated_competitive_utilities_numeric,
    shapley_brute,
    solve_asymmetric_cooperative,
)

from conftest import bisection_w

E = math.e


class TestBestResponseEffort:
    def test_zero_share_means_zero_effort(self):
        assert best_response_effort(0.0, 10.0, 0.5, 0.0) == 0.0

    def test_interior_response(self):
        # beta*r/c - 1 = 0.3421*10/0.5 - 1 = 5.842
        got = best_response_effort(0.3421, 10.0, 0.5, 0.0)
        assert got == pytest.approx(5.842, abs=1e-8)

    def test_corner_when_others_cover_the_market(self):
        assert best_response_effort(0.3421, 10.0, 0.5, 6.0) == 0.0
        assert best_response_effort(0.3421, 10.0, 0.5, 5.842) == pytest.approx(0.0, abs=1e-8)

    def test_matches_stationary_form_on_random_inputs(self):
        rng = np.random.default_rng(42)
        for _ in range(1000):
            beta = float(rng.uniform(0.01, 1.0))
            r = float(rng.uniform(0.5, 40.0))
            c = float(rng.uniform(0.05, 3.0))
            others = float(rng.uniform(0.0, 8.0))
            expected = max(0.0, beta * r / c - 1.0 - others)
            got = best_response_effort(beta, r, c, others)
            assert got == pytest.approx(expected, abs=1e-8)


class TestLeaderOptimum:
    def test_matches_w_closed_form(self):
        def objective(b):
            return (1.0 - b) * 10.0 * math.log(max(20.0 * b, 1e-300))

        beta, value = leader_optimum(objective)
        assert beta == pytest.approx(0.34210364569921, abs=1e-7)
        assert value == pytest.approx(objective(0.34210364569921), rel=1e-10)

    def test_constant_objective(self):
        beta, value = leader_optimum(lambda b: 3.5)
        assert value == 3.5
        assert 0.0 <= beta <= 1.0

    def test_maximum_at_right_endpoint(self):
        beta, value = leader_optimum(lambda b: b)
        assert beta == pytest.approx(1.0, abs=1e-9)
        assert value == pytest.approx(1.0, abs=1e-9)

    def test_config_validation(self):
        with pytest.raises(ValueError):
            SearchConfig(grid_points=2)
        with pytest.raises(ValueError):
            SearchConfig(refine_tolerance=-1.0)


class TestKktClassify:
    def test_interior_on_the_cost_ray(self):
        case = kkt_classify(0.1, 0.2, 0.5, 1.0)
        assert case.region is KktRegion.INTERIOR
        assert case.multiplier == 0.0

    def test_boundary_with_multiplier_two(self):
        # beta1/beta2 = 3 above the cost ratio 1: ISP2 idles and the ratio
        # equation beta1/beta2 = (c1 + lam)/c2 gives lam = 2
        case = kkt_classify(0.3, 0.1, 1.0, 1.0)
        assert case.region is KktRegion.BOUNDARY1
        assert case.multiplier == pytest.approx(2.0, abs=1e-12)

    def test_underpaid_isp1_idles(self):
        case = kkt_classify(0.05, 0.4, 0.5, 1.0)
        assert case.region is KktRegion.BOUNDARY2
        assert case.multiplier >= 0.0

    def test_zero_share_degenerate_boundaries(self):
        assert kkt_classify(0.3, 0.0, 1.0, 1.0).region is KktRegion.BOUNDARY1
        assert kkt_classify(0.0, 0.3, 1.0, 1.0).region is KktRegion.BOUNDARY2
        with pytest.raises(ValueError):
            kkt_classify(0.0, 0.0, 1.0, 1.0)

    @pytest.mark.parametrize("beta1,beta2,c1,c2", [
        (0.2, 0.4, 0.5, 1.0),   # interior
        (0.35, 0.1, 0.5, 1.0),  # ISP2 idles
        (0.05, 0.45, 0.5, 1.0),  # ISP1 idles
        (0.25, 0.25, 1.0, 1.0),  # interior, equal costs
    ])
    def test_agrees_with_best_response_iteration(self, beta1, beta2, c1, c2):
        # iterate the two ISPs' numerical best responses to a fixed point
        # and check it lands in the classified region
        r = 10.0
        a1, a2 = 1.0, 1.0
        for _ in range(300):
            a1_new = best_response_effort(beta1, r, c1, a2)
            a2_new = best_response_effort(beta2, r, c2, a1_new)
            if abs(a1_new - a1) < 1e-11 and abs(a2_new - a2) < 1e-11:
                a1, a2 = a1_new, a2_new
                break
            a1, a2 = a1_new, a2_new
        case = kkt_classify(beta1, beta2, c1, c2)
        tol = 1e-6
        if case.region is KktRegion.INTERIOR:
            assert a1 + a2 > tol
        elif case.region is KktRegion.BOUNDARY1:
            assert a2 <= tol
        else:
            assert a1 <= tol


class TestNashProductMaximize:
    def test_symmetric_costs_reproduce_cooperative_split(self):
        coop = solve_symmetric_cooperative(10.0, 0.5, 2)
        result = nash_product_maximize(10.0, 0.5, 0.5, coop.contract.joint_share)
        for a in result.efforts.efforts:
            assert a == pytest.approx(coop.efforts.efforts[0], abs=1e-4)
        assert result.converged
        assert result.multistart_agreement < 1e-6

    def test_asymmetric_interior_point(self):
        # frozen from the multistart probe; with zero disagreement the
        # product factorizes as s*(1-s)*(...), so the efforts come out equal
        result = nash_product_maximize(10.0, 0.5, 1.0, 0.4)
        assert result.efforts.efforts[0] == pytest.approx(1.93725409, abs=1e-5)
        assert result.efforts.efforts[1] == pytest.approx(1.93725409, abs=1e-5)
        assert result.surpluses[0] > 0.0 and result.surpluses[1] > 0.0
        assert result.share_split[0] + result.share_split[1] == pytest.approx(0.4, abs=1e-12)

    def test_zero_disagreement_equalizes_efforts(self):
        rng = np.random.default_rng(5)
        for _ in range(5):
            c1 = float(rng.uniform(0.1, 1.0))
            c2 = float(c1 * rng.uniform(1.0, 3.0))
            r = float((c1 + c2) * rng.uniform(2.0, 6.0))
            beta = float(rng.uniform(0.3, 0.7))
            result = nash_product_maximize(r, c1, c2, beta)
            a1, a2 = result.efforts.efforts
            assert a1 == pytest.approx(a2, rel=1e-5)

    def test_dense_grid_cross_check(self):
        r, c1, c2, beta = 10.0, 0.5, 1.0, 0.4
        result = nash_product_maximize(r, c1, c2, beta)
        lo, hi = math.log(1e-3), math.log(beta * r / min(c1, c2))
        n = 100
        zs = np.linspace(lo, hi, n)
        best, best_xy = -np.inf, None
        for z1 in zs:
            x = math.exp(z1)
            for z2 in zs:
                y = math.exp(z2)
                total = x + y
                rev = beta * r * math.log(total + 1.0) / total
                f1 = rev * x - c1 * x
                f2 = rev * y - c2 * y
                if f1 > 0 and f2 > 0 and f1 * f2 > best:
                    best, best_xy = f1 * f2, (x, y)
        cell = (hi - lo) / (n - 1)
        for grid_val, nm_val in zip(best_xy, result.efforts.efforts):
            assert abs(math.log(grid_val) - math.log(nm_val)) <= cell

    def test_stationarity_at_maximizer(self):
        r, c1, c2, beta = 10.0, 0.5, 1.0, 0.4
        result = nash_product_maximize(r, c1, c2, beta)
        a1, a2 = result.efforts.efforts

        def log_product(x, y):
            total = x + y
            rev = beta * r * math.log(total + 1.0) / total
            return math.log(rev * x - c1 * x) + math.log(rev * y - c2 * y)

        h = 1e-6
        g1 = (log_product(a1 + h, a2) - log_product(a1 - h, a2)) / (2 * h)
        g2 = (log_product(a1, a2 + h) - log_product(a1, a2 - h)) / (2 * h)
        assert abs(g1) < 1e-4 and abs(g2) < 1e-4

    def test_unreachable_disagreement_raises(self):
        with pytest.raises(InfeasibleBargainError):
            nash_product_maximize(10.0, 0.5, 1.0, 0.4, d1=50.0, d2=50.0)

    def test_rejects_bad_share(self):
        with pytest.raises(ValueError):
            nash_product_maximize(10.0, 0.5, 1.0, 0.0)
        with pytest.raises(ValueError):
            nash_product_maximize(10.0, 0.5, 1.0, 1.0)


class TestSolveAsymmetricCooperative:
    def test_equal_costs_reduce_to_symmetric_cooperative(self):
        outcome, result = solve_asymmetric_cooperative(
            10.0, 0.5, 0.5, disagreement=DisagreementPolicy.zero())
        coop = solve_symmetric_cooperative(10.0, 0.5, 2)
        assert outcome.contract.joint_share == pytest.approx(
            coop.contract.joint_share, abs=1e-4)
        assert outcome.total_effort == pytest.approx(coop.total_effort, abs=2e-3)
        assert outcome.cp_utility == pytest.approx(coop.cp_utility, abs=1e-4)

    def test_cooperation_beats_competition_for_the_cp(self):
        outcome, result = solve_asymmetric_cooperative(
            10.0, 0.5, 1.0, disagreement=DisagreementPolicy.zero())
        competitive = solve_asymmetric_competitive(10.0, 0.5, 1.0)
        assert outcome.cp_utility >= competitive.outcome_at(0.5).cp_utility
        assert result.converged

    def test_fixed_share_skips_outer_stage(self):
        outcome, result = solve_asymmetric_cooperative(
            10.0, 0.5, 1.0, disagreement=DisagreementPolicy.zero(), beta=0.4)
        assert outcome.contract.joint_share == 0.4
        assert result.efforts.efforts[0] == pytest.approx(1.93725409, abs=1e-5)

    def test_competitive_disagreement_shifts_share_up(self):
        # the bargain only clears once the joint pie beats both competitive
        # utilities, which takes a larger share than the zero-disagreement
        # optimum (frozen from the scan probe: 0.3997 vs ~0.45+)
        zero_out, _ = solve_asymmetric_cooperative(
            10.0, 0.5, 1.0, disagreement=DisagreementPolicy.zero())
        comp_out, comp_res = solve_asymmetric_cooperative(
            10.0, 0.5, 1.0, disagreement=DisagreementPolicy.regulated_competitive())
        assert zero_out.contract.joint_share == pytest.approx(0.3997, abs=2e-3)
        assert comp_out.contract.joint_share > zero_out.contract.joint_share
        assert comp_res.surpluses[0] >= -1e-10
        assert comp_res.surpluses[1] >= -1e-10

    def test_custom_disagreement_passthrough(self):
        _, result = solve_asymmetric_cooperative(
            10.0, 0.5, 1.0, disagreement=DisagreementPolicy.custom(0.1, 0.2), beta=0.5)
        assert result.disagreement == (0.1, 0.2)


def test_numeric_disagreement_matches_closed_form():
    # the benchmark utilities pass through two nested value-based searches,
    # so the achievable localization is a few 1e-6 in utility units
    closed = solve_regulated_competitive(10.0, 0.5, 1.0)
    numeric = regulated_competitive_utilities_numeric(10.0, 0.5, 1.0)
    assert numeric[0] == pytest.approx(closed.isp_utilities[0], abs=2e-5)
    assert numeric[1] == pytest.approx(closed.isp_utilities[1], abs=2e-5)


class TestShapleyBrute:
    def test_symmetric_game(self):
        values = {frozenset(): 0.0, frozenset({1}): 1.0,
                  frozenset({2}): 1.0, frozenset({1, 2}): 3.0}
        assert shapley_brute(lambda s: values[frozenset(s)]) == (1.5, 1.5)

    def test_dummy_player(self):
        values = {frozenset(): 0.0, frozenset({1}): 0.0,
                  frozenset({2}): 2.0, frozenset({1, 2}): 2.0}
        assert shapley_brute(lambda s: values[frozenset(s)]) == (0.0, 2.0)

    def test_efficiency_exact_on_random_games(self):
        rng = np.random.default_rng(17)
        for _ in range(50):
            v1, v2, v12 = rng.uniform(-3.0, 5.0, size=3)
            values = {frozenset(): 0.0, frozenset({1}): float(v1),
                      frozenset({2}): float(v2), frozenset({1, 2}): float(v12)}
            phi1, phi2 = shapley_brute(lambda s: values[frozenset(s)])
            assert phi1 + phi2 == pytest.approx(float(v12), abs=1e-12)

    def test_market_coalition_values(self):
        # v({i}) = r*(1 - 2/W(r*e/c_i)) + c_i with bisection-oracle W,
        # v({1,2}) per the joint-coalition derivation at the branch effort
        r, c1, c2 = 10.0, 0.5, 1.0
        w1 = bisection_w(r * E / c1)
        w2 = bisection_w(r * E / c2)
        a1 = 0.5 / 1.5 * (r / (c1 * w1) - 1.0)
        values = {
            frozenset(): 0.0,
            frozenset({1}): r * (1 - 2 / w1) + c1,
            frozenset({2}): r * (1 - 2 / w2) + c2,
            frozenset({1, 2}): r * (1 - 2 / w2) + a1 * (c2 - c1) + c2,
        }
        phi1, phi2 = shapley_brute(lambda s: values[frozenset(s)])
        assert phi1 == pytest.approx(2.31580295250659, abs=1e-9)
        assert phi2 == pytest.approx(1.39055481791391, abs=1e-9)

    def test_nonzero_empty_coalition_rejected(self):
        with pytest.raises(ValueError):
            shapley_brute(lambda s: 1.0)


def test_three_isp_asymmetric_total_share_follows_cost_sum():
    # no closed form is shipped for three unequal costs; the oracle confirms
    # the two-ISP structure generalizes: total share 1/W(r*e/sum(c)) and the
    # cost-proportional split is consistent with every best response
    r, costs = 10.0, (0.5, 0.8, 1.2)
    k = sum(costs)

    def objective(u):
        total = max(0.0, u * r / k - 1.0)
        return (1.0 - u) * r * math.log(total + 1.0)

    u_star, _ = leader_optimum(objective)
    assert u_star == pytest.approx(1.0 / bisection_w(r * E / k), abs=1e-7)
    total = u_star * r / k - 1.0
    for ci in costs:
        beta_i = u_star * ci / k
        a_i = ci / k * total
        br = best_response_effort(beta_i, r, ci, total - a_i)
        assert br == pytest.approx(a_i, abs=1e-7)
