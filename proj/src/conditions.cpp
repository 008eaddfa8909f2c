#include "pod/conditions.hpp"

#include <algorithm>

#include "pod/watchtower.hpp"

namespace pod {

namespace {

ConditionRow greater_than(std::string name, std::string formula, double lhs, double rhs) {
    return ConditionRow{std::move(name), std::move(formula), lhs, rhs, lhs - rhs, lhs > rhs};
}

}  // namespace

double t2_bound(const EconomicParams& p, int i) {
    const double phi_i = p.phi_of(i);
    return (p.n - 1.0) / p.n * (p.expected_slash(i) + phi_i * p.reward_bounty + p.reward_challenge - p.cost_execute);
}

double whistleblower_bound(const EconomicParams& p, int i) {
    return p.phi_of(i) * p.reward_bounty + p.cost_validate + p.expected_slash(i) + p.cost_execute;
}

double dc_bound(const EconomicParams& p) {
    return p.reward_challenge - p.cost_validate / (p.n - 1) - p.collusion_rent;
}

std::vector<ConditionRow> check_conditions(const EconomicParams& p) {
    double t2 = 0.0, rw = 0.0;
    for (int i = 0; i < p.n; ++i) {
        t2 = std::max(t2, t2_bound(p, i));
        rw = std::max(rw, whistleblower_bound(p, i));
    }
    const double unit_stake = p.alpha_0 * p.total_stake;
    const double t = p.collusion_deposit;

    std::vector<ConditionRow> rows;
    rows.push_back(greater_than("bounty_bound", "R_B > c_T/phi(alpha_0)", p.reward_bounty,
                                p.cost_execute / phi(p.theta, p.alpha_0)));
    rows.push_back(greater_than("challenge_bound", "R_C > c_T", p.reward_challenge, p.cost_execute));
    ConditionRow stake = greater_than("stake_bound", "alpha_0*S >= c_V + (n-1)*R_C", unit_stake,
                                      p.cost_validate + (p.n - 1) * p.reward_challenge);
    stake.holds = stake.lhs >= stake.rhs;
    rows.push_back(stake);
    rows.push_back(greater_than("lc_t1", "t > R_C - c_T", t, p.reward_challenge - p.cost_execute));
    rows.push_back(greater_than("lc_t2", "t > (n-1)/n*(alpha_i*S*phi_i + phi_i*R_B + R_C - c_T)", t, t2));
    rows.push_back(greater_than("dc", "t > R_C - c_V/(n-1) - h", t, dc_bound(p)));
    rows.push_back(greater_than("whistleblower", "R_w > phi_i*R_B + c_V + alpha_i*S*phi_i + c_T",
                                p.reward_whistleblower, rw));
    ConditionRow rent = greater_than("dc_rent", "h < c_T", p.cost_execute, p.collusion_rent);
    rows.push_back(rent);
    return rows;
}

}  // namespace pod
