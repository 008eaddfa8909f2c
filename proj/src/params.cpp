#include "pod/params.hpp"

#include <cstdio>

namespace pod {

namespace {

std::string fmt(const char* pattern, const std::string& a, const std::string& b) {
    char buf[256];
    std::snprintf(buf, sizeof buf, pattern, a.c_str(), b.c_str());
    return buf;
}

std::string num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

}  // namespace

std::vector<std::string> check_params(const ProtocolParams& p, bool diligent_collusion) {
    std::vector<std::string> errs;
    if (p.n < 2) errs.push_back(fmt("params.n: expected >= 2, got %s%s", std::to_string(p.n), ""));
    if (!(p.theta > 0.0 && p.theta < 1.0)) errs.push_back(fmt("params.theta: expected in (0,1), got %s%s", num(p.theta), ""));
    if (!(p.alpha_0 > 0.0 && p.alpha_0 <= 1.0)) {
        errs.push_back(fmt("params.alpha_0: expected in (0,1], got %s%s", num(p.alpha_0), ""));
    }
    const std::pair<const char*, Micros> money[] = {
        {"total_stake", p.total_stake},
        {"reward_bounty", p.reward_bounty},
        {"reward_challenge", p.reward_challenge},
        {"reward_whistleblower", p.reward_whistleblower},
        {"cost_execute", p.cost_execute},
        {"cost_validate", p.cost_validate},
        {"collusion_deposit", p.collusion_deposit},
        {"collusion_rent", p.collusion_rent},
        {"whistleblower_deposit", p.whistleblower_deposit},
    };
    for (const auto& [name, v] : money) {
        if (v < Micros{0}) errs.push_back(fmt("params.%s: expected >= 0, got %s", name, v.str()));
    }
    if (p.t1_ticks < 2) errs.push_back(fmt("params.t1_ticks: expected >= 2, got %s%s", std::to_string(p.t1_ticks), ""));
    if (p.tc_ticks < 1) errs.push_back(fmt("params.tc_ticks: expected >= 1, got %s%s", std::to_string(p.tc_ticks), ""));
    if (p.tlc_ticks < 1) {
        errs.push_back(fmt("params.tlc_ticks: expected >= 1, got %s%s", std::to_string(p.tlc_ticks), ""));
    }
    if (diligent_collusion && !(p.collusion_rent < p.cost_execute)) {
        errs.push_back(fmt("params.collusion_rent: expected < cost_execute (%s), got %s", p.cost_execute.str(),
                           p.collusion_rent.str()));
    }
    return errs;
}

}  // namespace pod
