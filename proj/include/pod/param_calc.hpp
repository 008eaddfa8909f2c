#pragma once

#include <optional>
#include <string>
#include <vector>

namespace pod {

struct BoundsInput {
    int n = 10;
    double theta = 0.9;
    double cost_execute = 1.0;
    double cost_validate = 100000.0;
    /// Operating point used for the stake / deposit / whistleblower bounds.
    /// Defaults: R_C = c_T, R_B = ceil(c_T/phi(alpha_0)).
    std::optional<double> reward_challenge;
    std::optional<double> reward_bounty;
    /// Relative stakes; equal 1/n when empty. alpha_0 is their minimum.
    std::vector<double> stakes;
};

struct ParamReport {
    int n = 0;
    double theta = 0.0;
    double alpha_0 = 0.0;
    double phi_unit = 0.0;      // phi(alpha_0)
    double R_B_min = 0.0;       // c_T / phi(alpha_0), strict bound
    double R_B_min_ceil = 0.0;  // ceil(R_B_min)
    bool R_B_diverges = false;
    double R_C_min = 0.0;       // c_T
    double R_B_used = 0.0;
    double R_C_used = 0.0;
    double min_stake = 0.0;     // alpha_0*S >= c_V + (n-1)R_C
    double t1_min = 0.0;
    double t2_min = 0.0;
    double t_min = 0.0;         // max(t1, t2) at the minimum stake
    double R_w_min = 0.0;
    double per_batch_reward = 0.0;  // expected bounty spend per batch, sum_i phi_i*R_B
    std::vector<std::string> diagnostics;
};

/// Throws std::invalid_argument on an invalid domain.
ParamReport compute_bounds(const BoundsInput& in);

struct SecuredValueInput {
    double fee_per_tx = 3.0;
    double batch_size = 200.0;
    double reward_margin = 4.0;   // R_B/c_T - 1 style multiplier on c_T
    double phi = 0.2;
    double batches_per_year = 700000.0;
    double apy = 0.06;
    double exec_cost_scale = 0.002; // c_T = fee_per_tx * scale
};

struct SecuredValue {
    double cost_execute = 0.0;
    double cost_validate = 0.0;
    double annual_reward = 0.0;  // margin*c_T*phi*batches_per_year
    double value = 0.0;
    bool positive = false;
};

/// Largest transaction value v with annual_reward / (c_V + v) > apy.
/// Throws std::invalid_argument when apy <= 0 or an input is negative.
SecuredValue secured_value_estimate(const SecuredValueInput& in);

}  // namespace pod
