#include "pod/param_calc.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "pod/conditions.hpp"
#include "pod/watchtower.hpp"

namespace pod {

ParamReport compute_bounds(const BoundsInput& in) {
    if (in.n < 2) throw std::invalid_argument("n: expected >= 2, got " + std::to_string(in.n));
    if (!(in.theta > 0.0 && in.theta < 1.0)) {
        throw std::invalid_argument("theta: expected in (0,1), got " + std::to_string(in.theta));
    }
    if (!(in.cost_execute > 0.0)) throw std::invalid_argument("c_T: expected > 0");
    if (!(in.cost_validate >= 0.0)) throw std::invalid_argument("c_V: expected >= 0");

    std::vector<double> stakes = in.stakes;
    if (stakes.empty()) stakes.assign(in.n, 1.0 / in.n);
    if (static_cast<int>(stakes.size()) != in.n) throw std::invalid_argument("stakes: expected n entries");
    for (double a : stakes) {
        if (!(a > 0.0 && a <= 1.0)) throw std::invalid_argument("stakes: every alpha_i must lie in (0,1]");
    }
    const double sum = std::accumulate(stakes.begin(), stakes.end(), 0.0);
    if (std::fabs(sum - 1.0) > 1e-9) throw std::invalid_argument("stakes: expected sum 1");

    ParamReport r;
    r.n = in.n;
    r.theta = in.theta;
    r.alpha_0 = *std::min_element(stakes.begin(), stakes.end());
    r.phi_unit = phi(in.theta, r.alpha_0);
    r.R_B_min = in.cost_execute / r.phi_unit;
    // Past the largest amount the ledger can hold the bound is as good as infinite.
    constexpr double kMaxUnits = 9.2e12;
    r.R_B_diverges = !std::isfinite(r.R_B_min) || r.R_B_min > kMaxUnits;
    if (r.R_B_diverges) {
        char buf[128];
        std::snprintf(buf, sizeof buf, "R_B bound diverges: phi(alpha_0) = %.3g, c_T/phi exceeds any payable bounty",
                      r.phi_unit);
        r.diagnostics.emplace_back(buf);
        r.R_B_min = std::numeric_limits<double>::infinity();
    }
    r.R_B_min_ceil = std::ceil(r.R_B_min);
    r.R_C_min = in.cost_execute;
    r.R_C_used = in.reward_challenge.value_or(in.cost_execute);
    r.R_B_used = in.reward_bounty.value_or(r.R_B_min_ceil);

    r.min_stake = in.cost_validate + (in.n - 1) * r.R_C_used;

    EconomicParams e;
    e.n = in.n;
    e.theta = in.theta;
    e.reward_bounty = r.R_B_used;
    e.reward_challenge = r.R_C_used;
    e.cost_execute = in.cost_execute;
    e.cost_validate = in.cost_validate;
    e.alpha_0 = r.alpha_0;
    e.total_stake = r.min_stake / r.alpha_0;
    e.stakes = stakes;

    r.t1_min = r.R_C_used - in.cost_execute;
    r.t2_min = 0.0;
    r.R_w_min = 0.0;
    r.per_batch_reward = 0.0;
    for (int i = 0; i < in.n; ++i) {
        r.t2_min = std::max(r.t2_min, t2_bound(e, i));
        r.R_w_min = std::max(r.R_w_min, whistleblower_bound(e, i));
        r.per_batch_reward += e.phi_of(i) * r.R_B_used;
    }
    r.t_min = std::max(r.t1_min, r.t2_min);
    return r;
}

SecuredValue secured_value_estimate(const SecuredValueInput& in) {
    if (!(in.apy > 0.0)) throw std::invalid_argument("apy: expected > 0, got " + std::to_string(in.apy));
    for (double v : {in.fee_per_tx, in.batch_size, in.reward_margin, in.phi, in.batches_per_year, in.exec_cost_scale}) {
        if (!(v >= 0.0)) throw std::invalid_argument("secured value inputs must be non-negative");
    }
    SecuredValue s;
    s.cost_execute = in.fee_per_tx * in.exec_cost_scale;
    s.cost_validate = in.fee_per_tx * in.batch_size;
    s.annual_reward = in.reward_margin * s.cost_execute * in.phi * in.batches_per_year;
    s.value = s.annual_reward / in.apy - s.cost_validate;
    s.positive = s.value > 0.0;
    return s;
}

}  // namespace pod
