#pragma once

#include <string>
#include <vector>

#include "pod/payoffs.hpp"

namespace pod {

/// One incentive condition: holds iff `lhs <op> rhs`; slack is positive
/// exactly when it holds.
struct ConditionRow {
    std::string name;
    std::string formula;
    double lhs = 0.0;
    double rhs = 0.0;
    double slack = 0.0;
    bool holds = false;
};

/// Rows, in order: bounty_bound, challenge_bound, stake_bound, lc_t1, lc_t2, dc, whistleblower,
/// dc_rent. Per-player bounds are maximised over the stake vector.
std::vector<ConditionRow> check_conditions(const EconomicParams& p);

/// Right-hand sides, shared with the parameter calculator.
double t2_bound(const EconomicParams& p, int i);
double whistleblower_bound(const EconomicParams& p, int i);
double dc_bound(const EconomicParams& p);

}  // namespace pod
