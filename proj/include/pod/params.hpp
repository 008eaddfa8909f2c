#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pod/money.hpp"

namespace pod {

/// Economic and timing constants of one protocol deployment.
struct ProtocolParams {
    std::uint32_t n = 10;
    Micros total_stake{};  // S
    double theta = 0.9;
    Micros reward_bounty{};        // R_B
    Micros reward_challenge{};     // R_C
    Micros reward_whistleblower{}; // R_w
    Micros cost_execute{};         // c_T
    Micros cost_validate{};        // c_V
    double alpha_0 = 0.1;          // unit stake fraction
    Micros collusion_deposit{};    // t
    Micros collusion_rent{};       // h
    Micros whistleblower_deposit{};
    std::uint32_t t1_ticks = 4;
    std::uint32_t tc_ticks = 2;
    std::uint32_t tlc_ticks = 1;

    bool operator==(const ProtocolParams&) const = default;
};

/// Invariant violations as human-readable messages; empty when valid.
/// `diligent_collusion` enables the h < c_T check.
std::vector<std::string> check_params(const ProtocolParams& p, bool diligent_collusion);

}  // namespace pod
