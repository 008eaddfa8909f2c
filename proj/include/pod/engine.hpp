#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "pod/ledger.hpp"
#include "pod/scenario.hpp"
#include "pod/state_machine.hpp"
#include "pod/vrf.hpp"
#include "pod/watchtower.hpp"

namespace pod {

// --- dispute path ---------------------------------------------------------

struct Dispute {
    ProofSubmission submission;
    std::vector<WatchtowerId> challengers;  // ascending ids; empty for operator-initiated
    bool exposure = false;                  // raised by a whistleblower report, validation already paid
};

struct DisputeRecord {
    WatchtowerId submitter = 0;
    std::vector<WatchtowerId> challengers;
    bool exposure = false;
    bool submitter_faulty = false;
    Micros slashed{};
    Micros paid_from_pool{};
    Micros paid_by_operator{};
};

/// c_V split across challengers; the remainder goes one micro at a time to
/// the lowest ids.
std::vector<Micros> split_evenly(Micros total, std::size_t parts);

/// Charges each challenger its share of c_V (DISPUTE events).
void open_dispute(Books& books, const ProtocolParams& p, const Dispute& d, std::uint32_t tick);

/// Runs validate on the claimed roots. A faulty submitter loses its whole
/// stake to the pool (SLASH); each challenger then receives R_C plus its
/// c_V share back, paid from the pool first and the operator for the rest.
DisputeRecord resolve_dispute(Books& books, const ProtocolParams& p, const Dispute& d, const LedgerState& prior,
                              const TransactionBatch& batch, std::uint32_t tick);

/// Pays `amount` to `to`, draining the slashed pool before the operator.
/// Returns {from_pool, from_operator}.
std::pair<Micros, Micros> pay_out(Books& books, std::uint32_t tick, EventKind kind, const std::string& actor,
                                  AccountRef to, Micros amount, const std::string& reason, bool hidden = false);

// --- lazy collusion -------------------------------------------------------

struct LazyCollusion {
    bool formed = false;
    WatchtowerId leader = 0;
    std::vector<WatchtowerId> members;  // ascending
    Digest shared_r_E;
    Micros deposit{};
};

/// Every member deposits t. The contract forms iff the members are all
/// `active_count` watchtowers; otherwise the deposits are refunded at once.
LazyCollusion form_lazy_collusion(Books& books, const ProtocolParams& p, std::vector<WatchtowerId> members,
                                  std::size_t active_count, std::optional<WatchtowerId> leader,
                                  std::uint64_t rng_seed, std::uint32_t tick);

struct LazySettlement {
    std::vector<WatchtowerId> traitors;
    std::vector<std::pair<WatchtowerId, Micros>> paid;
};

/// Traitors forfeit t; the other members share the forfeits on top of their
/// own t. All-traitor contracts refund everyone.
LazySettlement settle_lazy_collusion(Books& books, const LazyCollusion& c, const std::vector<WatchtowerId>& traitors,
                                     std::uint32_t tick);

// --- diligent collusion ---------------------------------------------------

enum class LeaderPlan { Obey, Betray, Cheat };

struct DiligentCollusion {
    bool formed = false;
    WatchtowerId leader = 0;
    LeaderPlan plan = LeaderPlan::Obey;
    std::vector<WatchtowerId> followers;  // ascending
    Digest committed_r_S;
    Digest committed_r_E;
    Micros deposit{};
    Micros rent{};
};

/// Leader escrows t, each follower pays h into escrow. An obeying leader
/// commits the true roots; otherwise the asserted r_S and a random r_E.
/// Forms only with at least one follower. Throws std::invalid_argument when
/// h >= c_T.
DiligentCollusion form_diligent_collusion(Books& books, const ProtocolParams& p, WatchtowerId leader, LeaderPlan plan,
                                          std::vector<WatchtowerId> followers, const Digest& true_r_S,
                                          const Digest& true_r_E, const Digest& asserted_r_S,
                                          std::uint64_t rng_seed, std::uint32_t tick);

/// A slashed follower costs the leader t, split across followers. Rents go
/// to the leader unless anyone in the group was slashed, then back to the
/// followers.
void settle_diligent_collusion(Books& books, const DiligentCollusion& c, bool follower_slashed, bool leader_slashed,
                               std::uint32_t tick);

// --- whistleblower --------------------------------------------------------

struct WhistleblowerContract {
    Micros reward{};
    Micros deposit{};
    std::optional<WatchtowerId> first_reporter;
    bool resolved = false;
};

enum class WhistleblowResult { Accepted, Rejected, AlreadyResolved };

/// Reporter posts the deposit and pays c_V for validate on `claimed_r_E`.
/// A wrong root forfeits the deposit to the pool. Reports after resolution
/// are no-ops. The reporter's identity never appears in the log.
WhistleblowResult whistleblow(Books& books, WhistleblowerContract& c, const ProtocolParams& p, WatchtowerId reporter,
                              const Digest& claimed_r_E, const LedgerState& prior, const TransactionBatch& batch,
                              std::uint32_t tick);

/// Pays the accepted reporter R_w plus its deposit, and R_C when the
/// exposure slashed someone.
void settle_whistleblower(Books& books, const WhistleblowerContract& c, const ProtocolParams& p, bool exposure_slashed,
                          std::uint32_t tick);

// --- epochs ---------------------------------------------------------------

struct SimulationOptions {
    bool serial = false;               // evaluate watchtowers on one thread
    std::ostream* events_out = nullptr; // JSONL sink
    bool keep_events = false;
};

struct EpochOutcome {
    std::uint64_t epoch = 0;
    StateAssertion assertion;
    bool finalized = false;
    std::vector<ProofSubmission> submissions;
    std::vector<AlertEvent> alerts;
    std::vector<DisputeRecord> disputes;
    std::vector<std::pair<WatchtowerId, Micros>> payoffs;  // active watchtowers, ascending id
    bool lazy_collusion_formed = false;
    bool diligent_collusion_formed = false;
    bool whistleblown = false;
};

struct WatchtowerStats {
    WatchtowerId id = 0;
    Strategy strategy = Strategy::Diligent;
    double alpha = 0.0;
    std::uint64_t epochs_active = 0;
    std::uint64_t submissions = 0;
    std::uint64_t bounties = 0;
    std::uint64_t slashes = 0;
    std::uint64_t disputes_won = 0;
    double payoff_sum = 0.0;     // units
    double payoff_sq_sum = 0.0;
    std::optional<double> model_expectation;
    Micros final_stake{};
    Micros final_earnings{};

    double mean_payoff() const;
    double std_error() const;
    double submission_rate() const;
};

struct SimulationReport {
    std::string scenario_name;
    std::uint64_t seed = 0;
    std::uint64_t epochs = 0;
    std::uint64_t faulty_assertions = 0;
    std::uint64_t reverted = 0;
    std::uint64_t incorrect_finalized = 0;
    std::uint64_t honest_reverted = 0;
    std::uint64_t lazy_submissions = 0;
    std::uint64_t lazy_slashed = 0;
    std::uint64_t disputes = 0;
    std::uint64_t lazy_collusion_epochs = 0;
    std::uint64_t diligent_collusion_epochs = 0;
    std::uint64_t whistleblows = 0;
    std::uint64_t detection_latency_sum = 0;  // ticks, over detected faulty assertions
    std::uint64_t detected = 0;
    std::uint64_t events = 0;
    std::uint64_t conservation_checks = 0;
    bool conserved = true;
    Micros operator_spend{};
    Micros pool{};
    Micros escrow{};
    Micros external{};
    Micros initial_stake{};
    std::vector<WatchtowerStats> watchtowers;
};

class Engine {
public:
    Engine(Scenario scenario, SimulationOptions options = {});
    ~Engine();
    Engine(const Engine&) = delete;
    Engine& operator=(const Engine&) = delete;

    EpochOutcome run_epoch();
    SimulationReport report() const;

    const Books& books() const;
    const Scenario& scenario() const;
    const std::vector<WatchtowerConfig>& watchtowers() const;
    const KeyRegistry& registry() const;
    const LedgerState& rollup_state() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

/// Runs scenario.epochs epochs. Throws InsolventError when the operator
/// budget runs out.
SimulationReport run_simulation(const Scenario& scenario, const SimulationOptions& options = {});

/// Per-watchtower expected epoch payoff under the closed-form game payoffs for
/// the scenario's strategy profile; nullopt where no game models the profile.
std::vector<std::optional<double>> model_expectations(const Scenario& scenario);

std::string render_report_json(const SimulationReport& r);
std::string render_report_text(const SimulationReport& r);

}  // namespace pod
