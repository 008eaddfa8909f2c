#include "pod/payoffs.hpp"

#include <stdexcept>

#include "pod/watchtower.hpp"

namespace pod {

double EconomicParams::phi_of(int i) const { return phi(theta, stakes.at(i)); }

EconomicParams economic_view(const ProtocolParams& p, const std::vector<double>& stakes) {
    EconomicParams e;
    e.n = static_cast<int>(p.n);
    e.theta = p.theta;
    e.reward_bounty = p.reward_bounty.units();
    e.reward_challenge = p.reward_challenge.units();
    e.reward_whistleblower = p.reward_whistleblower.units();
    e.cost_execute = p.cost_execute.units();
    e.cost_validate = p.cost_validate.units();
    e.total_stake = p.total_stake.units();
    e.collusion_deposit = p.collusion_deposit.units();
    e.collusion_rent = p.collusion_rent.units();
    e.alpha_0 = p.alpha_0;
    e.stakes = stakes;
    return e;
}

std::vector<double> equal_stakes(int n) { return std::vector<double>(n, 1.0 / n); }

double payoff_pod(const EconomicParams& p, int i, PodAction a, int n_d) {
    if (n_d < 0 || n_d > p.n) throw std::invalid_argument("payoff_pod: n_d out of range");
    const double phi_i = p.phi_of(i);
    if (a == PodAction::Diligent) {
        if (n_d == 0) throw std::invalid_argument("payoff_pod: diligent player implies n_d >= 1");
        double u = phi_i * p.reward_bounty - p.cost_execute;
        return n_d < p.n ? u + p.reward_challenge : u;
    }
    if (n_d == p.n) throw std::invalid_argument("payoff_pod: lazy player implies n_d < n");
    return n_d == 0 ? phi_i * p.reward_bounty : -p.expected_slash(i);
}

double payoff_lc(const EconomicParams& p, int i, LcAction a, int n_o) {
    if (n_o < 0 || n_o > p.n) throw std::invalid_argument("payoff_lc: n_o out of range");
    const double phi_i = p.phi_of(i);
    const double t = p.collusion_deposit;
    if (a == LcAction::Obey) {
        if (n_o == 0) throw std::invalid_argument("payoff_lc: obeying player implies n_o >= 1");
        if (n_o == p.n) return phi_i * p.reward_bounty;
        return -p.expected_slash(i) + (p.n - n_o) * t / n_o;
    }
    if (n_o == p.n) throw std::invalid_argument("payoff_lc: betraying player implies n_o < n");
    if (n_o == 0) return phi_i * p.reward_bounty - p.cost_execute;
    return phi_i * p.reward_bounty + p.reward_challenge - p.cost_execute - t;
}

double payoff_dc(const EconomicParams& p, int i, DcRole role, DcLeaderAction a, int n_C, bool all_join, DcMode mode) {
    if (n_C < 2 || n_C > p.n) throw std::invalid_argument("payoff_dc: n_C out of range");
    const double phi_i = p.phi_of(i);
    const double rb = phi_i * p.reward_bounty;
    const double h = p.collusion_rent;
    const double t = p.collusion_deposit;
    const bool leader = role == DcRole::Leader;
    switch (a) {
        case DcLeaderAction::Obey:
            return leader ? rb - p.cost_execute + (n_C - 1) * h : rb - h;
        case DcLeaderAction::Betray:
            return leader ? rb - p.cost_execute + p.reward_challenge - p.cost_validate / (p.n - n_C + 1) - t
                          : -p.expected_slash(i) + t / (n_C - 1);
        case DcLeaderAction::Cheat:
            if (mode == DcMode::ProofNarrative && !all_join) {
                return leader ? -p.expected_slash(i) + (n_C - 1) * h : -p.expected_slash(i) - h;
            }
            return leader ? rb + (p.n - 1) * h : rb - h;
    }
    throw std::logic_error("payoff_dc: unreachable");
}

double payoff_whistleblower(const EconomicParams& p, int i, WhistleblowerContext ctx) {
    const double phi_i = p.phi_of(i);
    switch (ctx) {
        case WhistleblowerContext::ReportInAllObey:
            return -p.expected_slash(i) - p.cost_validate + p.reward_challenge - p.cost_execute +
                   p.reward_whistleblower;
        case WhistleblowerContext::ObeyWithReporter:
            return -p.expected_slash(i);
        case WhistleblowerContext::DiligentWithReporter:
            return phi_i * p.reward_bounty - p.cost_execute - p.cost_validate / 2 + p.reward_challenge;
    }
    throw std::logic_error("payoff_whistleblower: unreachable");
}

}  // namespace pod
