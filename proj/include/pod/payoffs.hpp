#pragma once

#include <vector>

#include "pod/params.hpp"

namespace pod {

/// Real-valued view of the protocol economics used by the analytic side.
/// Currency amounts are in whole units.
struct EconomicParams {
    int n = 10;
    double theta = 0.9;
    double reward_bounty = 0.0;        // R_B
    double reward_challenge = 0.0;     // R_C
    double reward_whistleblower = 0.0; // R_w
    double cost_execute = 0.0;         // c_T
    double cost_validate = 0.0;        // c_V
    double total_stake = 0.0;          // S
    double collusion_deposit = 0.0;    // t
    double collusion_rent = 0.0;       // h
    double alpha_0 = 0.1;
    std::vector<double> stakes;        // alpha_i, sums to 1

    double phi_of(int i) const;
    double stake_of(int i) const { return stakes.at(i) * total_stake; }
    /// alpha_i * S * phi(alpha_i): expected slash of a lazy submitter.
    double expected_slash(int i) const { return stake_of(i) * phi_of(i); }
};

EconomicParams economic_view(const ProtocolParams& p, const std::vector<double>& stakes);

/// n equal stakes alpha_i = 1/n with alpha_0 = 1/n.
std::vector<double> equal_stakes(int n);

enum class PodAction { Diligent, Lazy };
enum class LcAction { Obey, Betray };
enum class DcRole { Leader, Follower };
enum class DcLeaderAction { Obey, Betray, Cheat };

/// How the diligent-collusion table treats a cheating leader when not every
/// watchtower joined.
enum class DcMode {
    TableLiteral,   // payoffs exactly as tabulated (same in both columns)
    ProofNarrative, // colluders are slashed by independent diligent peers
};

enum class WhistleblowerContext { ReportInAllObey, ObeyWithReporter, DiligentWithReporter };

/// PoD-Game payoff. n_d counts diligent watchtowers including i when i is
/// diligent. Throws std::invalid_argument for an inconsistent (action, n_d).
double payoff_pod(const EconomicParams& p, int i, PodAction a, int n_d);

/// LC-Game payoff. n_o counts obeyers including i when i obeys.
double payoff_lc(const EconomicParams& p, int i, LcAction a, int n_o);

/// DC-Game table entry for player i in the given role. n_C is the size of
/// the colluding group including the leader, 2 <= n_C <= n.
double payoff_dc(const EconomicParams& p, int i, DcRole role, DcLeaderAction a, int n_C, bool all_join,
                 DcMode mode = DcMode::TableLiteral);

/// Payoffs quoted for the whistleblower extension of the all-obey lazy
/// collusion.
double payoff_whistleblower(const EconomicParams& p, int i, WhistleblowerContext ctx);

}  // namespace pod
