#include "pod/watchtower.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

namespace pod {

namespace {

constexpr std::array<std::pair<Strategy, std::string_view>, 9> kStrategyNames{{
    {Strategy::Diligent, "diligent"},
    {Strategy::LazyDeceitful, "lazy"},
    {Strategy::LcObey, "lc-obey"},
    {Strategy::LcBetray, "lc-betray"},
    {Strategy::LcReport, "lc-report"},
    {Strategy::DcLeaderObey, "dc-leader-obey"},
    {Strategy::DcLeaderBetray, "dc-leader-betray"},
    {Strategy::DcLeaderCheat, "dc-leader-cheat"},
    {Strategy::DcFollower, "dc-follower"},
}};

}  // namespace

std::string_view to_string(Strategy s) {
    for (const auto& [k, name] : kStrategyNames) {
        if (k == s) return name;
    }
    return "unknown";
}

std::optional<Strategy> parse_strategy(std::string_view tag) {
    for (const auto& [k, name] : kStrategyNames) {
        if (name == tag) return k;
    }
    return std::nullopt;
}

bool is_lazy_collusion_member(Strategy s) {
    return s == Strategy::LcObey || s == Strategy::LcBetray || s == Strategy::LcReport;
}

bool is_diligent_collusion_leader(Strategy s) {
    return s == Strategy::DcLeaderObey || s == Strategy::DcLeaderBetray || s == Strategy::DcLeaderCheat;
}

double phi(double theta, double alpha) {
    if (!(theta > 0.0 && theta < 1.0)) throw std::domain_error("phi: theta must lie in (0,1)");
    if (!(alpha > 0.0 && alpha <= 1.0)) throw std::domain_error("phi: alpha must lie in (0,1]");
    return -std::expm1(alpha * std::log1p(-theta));
}

Bytes vrf_input(const Digest& r_S, const Digest& r_E) { return concat(r_S, r_E); }

std::optional<ProofSubmission> prove_from_roots(const Vrf& vrf, const WatchtowerConfig& config, const Digest& r_S,
                                                const Digest& r_E, double theta, std::uint64_t epoch) {
    PoDProof proof = vrf.eval(config.keys, vrf_input(r_S, r_E));
    if (!(proof.d < phi(theta, config.alpha))) return std::nullopt;
    return ProofSubmission{config.id, std::move(proof), r_S, r_E, epoch};
}

CheckResult check_state(const Vrf& vrf, const LedgerState& prior, const TransactionBatch& batch, const Digest& r_S,
                        const WatchtowerConfig& config, double theta, std::uint64_t epoch) {
    ApplyResult exec = apply(prior, batch);
    CheckResult out;
    out.computed_r_S = state_root(exec.state);
    out.r_E = trace_root(exec.trace);
    out.submission = prove_from_roots(vrf, config, out.computed_r_S, out.r_E, theta, epoch);
    out.valid = (r_S == out.computed_r_S);
    return out;
}

LazyResult lazy_act(const Vrf& vrf, const WatchtowerConfig& config, const Digest& r_S, double theta,
                    std::uint64_t rng_seed, std::uint64_t epoch, bool copies_assertion) {
    Rng rng(rng_seed);
    LazyResult out;
    out.fake_r_E = rng.digest();
    out.fake_r_S = copies_assertion ? r_S : rng.digest();
    out.submission = prove_from_roots(vrf, config, out.fake_r_S, out.fake_r_E, theta, epoch);
    return out;
}

bool verify_peer_proof(const Vrf& vrf, const ProofSubmission& submission, const Digest& my_r_S, const Digest& my_r_E,
                       ByteView peer_public_key) {
    return vrf.verify(peer_public_key, submission.proof, vrf_input(my_r_S, my_r_E));
}

std::optional<AlertEvent> AlertBook::raise_alert(WatchtowerId watchtower, std::uint64_t batch_id,
                                                 const Digest& computed_r_S) {
    if (!seen_.emplace(watchtower, batch_id).second) return std::nullopt;
    alerts_.push_back(AlertEvent{watchtower, batch_id, computed_r_S});
    return alerts_.back();
}

bool AlertBook::any_for(std::uint64_t batch_id) const {
    for (const auto& a : alerts_) {
        if (a.batch_id == batch_id) return true;
    }
    return false;
}

}  // namespace pod
