#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string_view>
#include <utility>
#include <vector>

#include "pod/state_machine.hpp"
#include "pod/vrf.hpp"

namespace pod {

enum class Strategy {
    Diligent,
    LazyDeceitful,
    LcObey,     // lazy-collusion member that follows the shared root
    LcBetray,   // lazy-collusion member that executes and submits a real proof
    LcReport,   // lazy-collusion member that obeys and blows the whistle
    DcLeaderObey,
    DcLeaderBetray,
    DcLeaderCheat,
    DcFollower,
};

std::string_view to_string(Strategy s);
std::optional<Strategy> parse_strategy(std::string_view tag);

bool is_lazy_collusion_member(Strategy s);
bool is_diligent_collusion_leader(Strategy s);

struct WatchtowerConfig {
    WatchtowerId id = 0;
    double alpha = 0.0;
    KeyPair keys;
    Strategy strategy = Strategy::Diligent;
};

/// Bounty threshold 1-(1-theta)^alpha, evaluated via expm1/log1p so small
/// theta keeps full precision. Throws std::domain_error outside
/// theta in (0,1), alpha in (0,1].
double phi(double theta, double alpha);

struct ProofSubmission {
    WatchtowerId watchtower_id = 0;
    PoDProof proof;
    Digest claimed_r_S;
    Digest claimed_r_E;
    std::uint64_t epoch = 0;
};

/// VRF input: r_S then r_E, 32 bytes each, no separator.
Bytes vrf_input(const Digest& r_S, const Digest& r_E);

/// Evaluates the VRF over (r_S, r_E) and returns a submission iff d < phi.
std::optional<ProofSubmission> prove_from_roots(const Vrf& vrf, const WatchtowerConfig& config, const Digest& r_S,
                                                const Digest& r_E, double theta, std::uint64_t epoch);

struct CheckResult {
    bool valid = false;
    Digest computed_r_S;
    Digest r_E;
    std::optional<ProofSubmission> submission;
};

/// Diligent verification of an assertion: execute, commit, mine the bounty,
/// compare roots.
CheckResult check_state(const Vrf& vrf, const LedgerState& prior, const TransactionBatch& batch, const Digest& r_S,
                        const WatchtowerConfig& config, double theta, std::uint64_t epoch);

struct LazyResult {
    bool claimed_valid = true;
    Digest fake_r_S;
    Digest fake_r_E;
    std::optional<ProofSubmission> submission;
};

/// Lazy-deceitful behavior: fabricate roots without executing and mimic the
/// genuine submission rate. With `copies_assertion` the posted r_S is reused
/// and only r_E is fabricated.
LazyResult lazy_act(const Vrf& vrf, const WatchtowerConfig& config, const Digest& r_S, double theta,
                    std::uint64_t rng_seed, std::uint64_t epoch, bool copies_assertion = false);

/// True iff the peer's proof is consistent with the verifier's own roots.
bool verify_peer_proof(const Vrf& vrf, const ProofSubmission& submission, const Digest& my_r_S, const Digest& my_r_E,
                       ByteView peer_public_key);

struct AlertEvent {
    WatchtowerId watchtower = 0;
    std::uint64_t batch_id = 0;
    Digest computed_r_S;
};

/// Alerts deduplicated per (watchtower, batch).
class AlertBook {
public:
    /// Returns the new alert, or nullopt if this watchtower already alerted
    /// on this batch.
    std::optional<AlertEvent> raise_alert(WatchtowerId watchtower, std::uint64_t batch_id, const Digest& computed_r_S);

    const std::vector<AlertEvent>& alerts() const { return alerts_; }
    bool any_for(std::uint64_t batch_id) const;

private:
    std::set<std::pair<WatchtowerId, std::uint64_t>> seen_;
    std::vector<AlertEvent> alerts_;
};

}  // namespace pod
