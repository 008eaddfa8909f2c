#include "pod/engine.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "json.hpp"
#include "pod/games.hpp"
#include "pod/payoffs.hpp"
#include "pod/rng.hpp"

namespace pod {

namespace {

// Stream tags for derive_seed.
enum : std::uint64_t {
    kKeys = 1,
    kRegistry,
    kBatch,
    kAsserter,
    kAsserterRoot,
    kLazy,
    kLcRoot,
    kDcRoot,
    kReporter,
};

std::string short_hex(const Digest& d) { return d.hex().substr(0, 16); }

bool contains(const std::vector<WatchtowerId>& v, WatchtowerId id) {
    return std::find(v.begin(), v.end(), id) != v.end();
}

bool faulty_submission(const ProofSubmission& s, const LedgerState& prior, const TransactionBatch& batch) {
    return !validate({s.claimed_r_E}, prior, batch, RootKind::Trace).empty() ||
           !validate({s.claimed_r_S}, prior, batch, RootKind::State).empty();
}

}  // namespace

// --- dispute path ---------------------------------------------------------

std::vector<Micros> split_evenly(Micros total, std::size_t parts) {
    std::vector<Micros> out;
    if (parts == 0) return out;
    const std::int64_t base = total.raw() / static_cast<std::int64_t>(parts);
    const std::int64_t rem = total.raw() % static_cast<std::int64_t>(parts);
    for (std::size_t k = 0; k < parts; ++k) out.emplace_back(base + (static_cast<std::int64_t>(k) < rem ? 1 : 0));
    return out;
}

std::pair<Micros, Micros> pay_out(Books& books, std::uint32_t tick, EventKind kind, const std::string& actor,
                                  AccountRef to, Micros amount, const std::string& reason, bool hidden) {
    const Micros from_pool = std::min(amount, books.ledger().pool());
    const Micros from_op = amount - from_pool;
    if (from_pool > Micros{0} || amount == Micros{0}) {
        books.post(tick, kind, actor, AccountRef::pool(), to, from_pool, reason + ":pool", hidden);
    }
    if (from_op > Micros{0}) books.post(tick, kind, actor, AccountRef::op(), to, from_op, reason + ":operator", hidden);
    return {from_pool, from_op};
}

void open_dispute(Books& books, const ProtocolParams& p, const Dispute& d, std::uint32_t tick) {
    const std::string target = actor_name(d.submission.watchtower_id);
    if (d.challengers.empty()) {
        books.note(tick, EventKind::Dispute, "operator", (d.exposure ? "exposed_proof " : "operator_check ") + target);
        return;
    }
    const auto shares = split_evenly(p.cost_validate, d.challengers.size());
    for (std::size_t k = 0; k < d.challengers.size(); ++k) {
        const WatchtowerId c = d.challengers[k];
        books.post(tick, EventKind::Dispute, actor_name(c), AccountRef::earnings(c), AccountRef::external(), shares[k],
                   "validate_cost vs " + target);
    }
}

DisputeRecord resolve_dispute(Books& books, const ProtocolParams& p, const Dispute& d, const LedgerState& prior,
                              const TransactionBatch& batch, std::uint32_t tick) {
    DisputeRecord r;
    r.submitter = d.submission.watchtower_id;
    r.challengers = d.challengers;
    r.exposure = d.exposure;
    r.submitter_faulty = faulty_submission(d.submission, prior, batch);
    if (!r.submitter_faulty) return r;

    r.slashed = books.ledger().stake(r.submitter);
    books.post(tick, EventKind::Slash, actor_name(r.submitter), AccountRef::stake(r.submitter), AccountRef::pool(),
               r.slashed, d.exposure ? "exposed_proof" : "faulty_proof");
    const auto shares = split_evenly(p.cost_validate, d.challengers.size());
    for (std::size_t k = 0; k < d.challengers.size(); ++k) {
        const WatchtowerId c = d.challengers[k];
        auto [pool, op] = pay_out(books, tick, EventKind::Settle, actor_name(c), AccountRef::earnings(c),
                                  p.reward_challenge + shares[k], "dispute_reward");
        r.paid_from_pool += pool;
        r.paid_by_operator += op;
    }
    return r;
}

// --- lazy collusion -------------------------------------------------------

LazyCollusion form_lazy_collusion(Books& books, const ProtocolParams& p, std::vector<WatchtowerId> members,
                                  std::size_t active_count, std::optional<WatchtowerId> leader,
                                  std::uint64_t rng_seed, std::uint32_t tick) {
    std::sort(members.begin(), members.end());
    LazyCollusion c;
    c.members = members;
    c.deposit = p.collusion_deposit;
    for (WatchtowerId m : members) {
        books.post(tick, EventKind::ColludeForm, actor_name(m), AccountRef::earnings(m), AccountRef::escrow(),
                   c.deposit, "lc_deposit");
    }
    c.formed = members.size() >= 2 && members.size() == active_count;
    if (!c.formed) {
        for (WatchtowerId m : members) {
            books.post(tick, EventKind::ColludeForm, actor_name(m), AccountRef::escrow(), AccountRef::earnings(m),
                       c.deposit, "lc_refund_not_formed");
        }
        return c;
    }
    c.leader = (leader && contains(members, *leader)) ? *leader : members.front();
    c.shared_r_E = Rng(rng_seed).digest();
    books.note(tick, EventKind::ColludeForm, actor_name(c.leader),
               "lc_formed members=" + std::to_string(members.size()) + " r_E=" + short_hex(c.shared_r_E));
    return c;
}

LazySettlement settle_lazy_collusion(Books& books, const LazyCollusion& c, const std::vector<WatchtowerId>& traitors,
                                     std::uint32_t tick) {
    LazySettlement s;
    for (WatchtowerId m : c.members) {
        if (contains(traitors, m)) s.traitors.push_back(m);
    }
    if (s.traitors.size() == c.members.size()) {
        for (WatchtowerId m : c.members) {
            books.post(tick, EventKind::ColludeSettle, actor_name(m), AccountRef::escrow(), AccountRef::earnings(m),
                       c.deposit, "lc_refund_all_betrayed");
            s.paid.emplace_back(m, c.deposit);
        }
        return s;
    }
    std::vector<WatchtowerId> loyal;
    for (WatchtowerId m : c.members) {
        if (!contains(s.traitors, m)) loyal.push_back(m);
    }
    for (WatchtowerId t : s.traitors) books.note(tick, EventKind::ColludeSettle, actor_name(t), "lc_traitor_forfeit");
    const auto shares = split_evenly(c.deposit * static_cast<std::int64_t>(s.traitors.size()), loyal.size());
    for (std::size_t k = 0; k < loyal.size(); ++k) {
        const Micros amount = c.deposit + shares[k];
        books.post(tick, EventKind::ColludeSettle, actor_name(loyal[k]), AccountRef::escrow(),
                   AccountRef::earnings(loyal[k]), amount, "lc_settle");
        s.paid.emplace_back(loyal[k], amount);
    }
    return s;
}

// --- diligent collusion ---------------------------------------------------

DiligentCollusion form_diligent_collusion(Books& books, const ProtocolParams& p, WatchtowerId leader, LeaderPlan plan,
                                          std::vector<WatchtowerId> followers, const Digest& true_r_S,
                                          const Digest& true_r_E, const Digest& asserted_r_S,
                                          std::uint64_t rng_seed, std::uint32_t tick) {
    if (!(p.collusion_rent < p.cost_execute)) {
        throw std::invalid_argument("diligent collusion: rent " + p.collusion_rent.str() + " must be below c_T " +
                                    p.cost_execute.str());
    }
    std::sort(followers.begin(), followers.end());
    DiligentCollusion c;
    c.leader = leader;
    c.plan = plan;
    c.followers = followers;
    c.deposit = p.collusion_deposit;
    c.rent = p.collusion_rent;
    if (followers.empty()) return c;
    c.formed = true;
    if (plan == LeaderPlan::Obey) {
        c.committed_r_S = true_r_S;
        c.committed_r_E = true_r_E;
    } else {
        c.committed_r_S = asserted_r_S;
        c.committed_r_E = Rng(rng_seed).digest();
    }
    books.post(tick, EventKind::ColludeForm, actor_name(leader), AccountRef::earnings(leader), AccountRef::escrow(),
               c.deposit, "dc_deposit");
    for (WatchtowerId f : followers) {
        books.post(tick, EventKind::ColludeForm, actor_name(f), AccountRef::earnings(f), AccountRef::escrow(), c.rent,
                   "dc_rent");
    }
    return c;
}

void settle_diligent_collusion(Books& books, const DiligentCollusion& c, bool follower_slashed, bool leader_slashed,
                               std::uint32_t tick) {
    if (!c.formed) return;
    const std::string leader = actor_name(c.leader);
    if (follower_slashed) {
        const auto shares = split_evenly(c.deposit, c.followers.size());
        for (std::size_t k = 0; k < c.followers.size(); ++k) {
            books.post(tick, EventKind::ColludeSettle, actor_name(c.followers[k]), AccountRef::escrow(),
                       AccountRef::earnings(c.followers[k]), shares[k], "dc_leader_deposit_forfeit");
        }
    } else {
        books.post(tick, EventKind::ColludeSettle, leader, AccountRef::escrow(), AccountRef::earnings(c.leader),
                   c.deposit, "dc_deposit_return");
    }
    if (!follower_slashed && !leader_slashed) {
        books.post(tick, EventKind::ColludeSettle, leader, AccountRef::escrow(), AccountRef::earnings(c.leader),
                   c.rent * static_cast<std::int64_t>(c.followers.size()), "dc_rent_income");
    } else {
        for (WatchtowerId f : c.followers) {
            books.post(tick, EventKind::ColludeSettle, actor_name(f), AccountRef::escrow(), AccountRef::earnings(f),
                       c.rent, "dc_rent_refund");
        }
    }
}

// --- whistleblower --------------------------------------------------------

WhistleblowResult whistleblow(Books& books, WhistleblowerContract& c, const ProtocolParams& p, WatchtowerId reporter,
                              const Digest& claimed_r_E, const LedgerState& prior, const TransactionBatch& batch,
                              std::uint32_t tick) {
    if (c.resolved) {
        books.note(tick, EventKind::Whistleblow, "anon", "already_resolved");
        return WhistleblowResult::AlreadyResolved;
    }
    books.post(tick, EventKind::Whistleblow, "anon", AccountRef::earnings(reporter), AccountRef::escrow(), c.deposit,
               "wb_deposit", true);
    books.post(tick, EventKind::Whistleblow, "anon", AccountRef::earnings(reporter), AccountRef::external(),
               p.cost_validate, "wb_validate_cost", true);
    if (!validate({claimed_r_E}, prior, batch, RootKind::Trace).empty()) {
        books.post(tick, EventKind::Whistleblow, "anon", AccountRef::escrow(), AccountRef::pool(), c.deposit,
                   "wb_deposit_forfeit", true);
        return WhistleblowResult::Rejected;
    }
    c.resolved = true;
    c.first_reporter = reporter;
    books.note(tick, EventKind::Whistleblow, "anon", "collusion_exposed");
    return WhistleblowResult::Accepted;
}

void settle_whistleblower(Books& books, const WhistleblowerContract& c, const ProtocolParams& p, bool exposure_slashed,
                          std::uint32_t tick) {
    if (!c.resolved || !c.first_reporter) return;
    const WatchtowerId r = *c.first_reporter;
    if (exposure_slashed) {
        pay_out(books, tick, EventKind::Whistleblow, "anon", AccountRef::earnings(r), p.reward_challenge,
                "wb_challenge_reward", true);
    }
    books.post(tick, EventKind::Whistleblow, "anon", AccountRef::op(), AccountRef::earnings(r), c.reward, "wb_reward",
               true);
    books.post(tick, EventKind::Whistleblow, "anon", AccountRef::escrow(), AccountRef::earnings(r), c.deposit,
               "wb_deposit_return", true);
}

// --- report helpers -------------------------------------------------------

double WatchtowerStats::mean_payoff() const {
    return epochs_active ? payoff_sum / static_cast<double>(epochs_active) : 0.0;
}

double WatchtowerStats::std_error() const {
    if (epochs_active < 2) return 0.0;
    const double n = static_cast<double>(epochs_active);
    const double mean = payoff_sum / n;
    const double var = std::max(0.0, (payoff_sq_sum - n * mean * mean) / (n - 1.0));
    return std::sqrt(var / n);
}

double WatchtowerStats::submission_rate() const {
    return epochs_active ? static_cast<double>(submissions) / static_cast<double>(epochs_active) : 0.0;
}

std::vector<std::optional<double>> model_expectations(const Scenario& s) {
    const int n = static_cast<int>(s.params.n);
    std::vector<std::optional<double>> out(n);
    if (static_cast<int>(s.strategies.size()) != n || static_cast<int>(s.stakes.size()) != n) return out;

    // Player order for the game; the diligent-collusion leader must be player 0.
    std::vector<int> order(n);
    for (int i = 0; i < n; ++i) order[i] = i;
    GameSpec spec;
    Profile profile(n);

    if (s.collusion == CollusionKind::Diligent) {
        auto leader = std::find_if(s.strategies.begin(), s.strategies.end(), is_diligent_collusion_leader);
        if (leader == s.strategies.end()) return out;
        std::swap(order[0], order[leader - s.strategies.begin()]);
        spec.kind = GameKind::DC;
    } else if (s.collusion == CollusionKind::Lazy) {
        spec.kind = s.whistleblower ? GameKind::PoDWithCollusionAndWhistleblower : GameKind::PoDWithCollusion;
    } else {
        spec.kind = GameKind::PoD;
    }

    for (int k = 0; k < n; ++k) {
        const Strategy st = s.strategies[order[k]];
        std::optional<Action> a;
        switch (st) {
            case Strategy::Diligent: a = spec.kind == GameKind::DC ? Action::Independent : Action::Diligent; break;
            case Strategy::LazyDeceitful: if (spec.kind != GameKind::DC) a = Action::Lazy; break;
            case Strategy::LcObey: a = Action::Obey; break;
            case Strategy::LcBetray: a = Action::Betray; break;
            case Strategy::LcReport: a = Action::Report; break;
            case Strategy::DcLeaderObey: a = Action::Obey; break;
            case Strategy::DcLeaderBetray: a = Action::Betray; break;
            case Strategy::DcLeaderCheat: a = Action::Cheat; break;
            case Strategy::DcFollower: a = Action::Join; break;
        }
        if (!a) return out;
        profile[k] = *a;
    }

    std::vector<double> stakes(n);
    for (int k = 0; k < n; ++k) stakes[k] = s.stakes[order[k]];
    spec.params = economic_view(s.params, stakes);
    try {
        auto game = make_game(spec);
        const auto u = game->payoffs(profile);
        for (int k = 0; k < n; ++k) out[order[k]] = u[k];
    } catch (const std::exception&) {
        // profile outside the game (e.g. inconsistent counts): leave unset
    }
    return out;
}

// --- engine ---------------------------------------------------------------

struct Engine::Impl {
    enum class Mode { Execute, Lazy, ProveShared, ProveCommitted };

    struct Plan {
        WatchtowerId id = 0;
        Mode mode = Mode::Execute;
        bool reporter = false;
    };

    struct Act {
        bool valid = true;
        Digest r_S, r_E;  // executor's own roots
        std::optional<ProofSubmission> submission;
    };

    Scenario sc;
    SimulationOptions opt;
    KeyRegistry registry;
    EscrowVrf vrf;
    std::vector<WatchtowerConfig> wts;
    Books books;
    LedgerState l2;
    AlertBook alerts;
    std::uint64_t next_epoch = 0;
    SimulationReport rep;

    static Scenario checked(Scenario s) {
        auto errors = validate_scenario(s);
        if (!errors.empty()) throw ScenarioError(std::move(errors));
        return s;
    }

    Impl(Scenario s, SimulationOptions o)
        : sc(checked(std::move(s))),
          opt(o),
          registry(derive_seed(sc.seed, {kRegistry})),
          vrf(registry),
          books(Ledger(initial_stakes(sc), sc.operator_budget), o.events_out, o.keep_events),
          l2(genesis_state(sc.workload)) {
        for (WatchtowerId i = 0; i < sc.params.n; ++i) {
            KeyPair keys = generate_keypair(derive_seed(sc.seed, {kKeys, i}), i);
            registry.enroll(keys);
            wts.push_back(WatchtowerConfig{i, sc.stakes[i], std::move(keys), sc.strategies[i]});
        }
        rep.scenario_name = sc.name;
        rep.seed = sc.seed;
        rep.initial_stake = books.ledger().initial_stake();
        const auto expected = model_expectations(sc);
        for (const auto& w : wts) {
            WatchtowerStats st;
            st.id = w.id;
            st.strategy = w.strategy;
            st.alpha = w.alpha;
            st.model_expectation = expected[w.id];
            rep.watchtowers.push_back(st);
        }
    }

    Plan plan_for(WatchtowerId i, const LazyCollusion& lc, const DiligentCollusion& dc) const {
        Plan pl{i, Mode::Execute, false};
        switch (wts[i].strategy) {
            case Strategy::Diligent:
            case Strategy::LcBetray:
            case Strategy::DcLeaderObey:
            case Strategy::DcLeaderBetray: break;
            case Strategy::LazyDeceitful: pl.mode = Mode::Lazy; break;
            case Strategy::LcObey:
                if (lc.formed) pl.mode = Mode::ProveShared;
                break;
            case Strategy::LcReport:
                if (lc.formed) {
                    pl.mode = Mode::ProveShared;
                    pl.reporter = true;
                }
                break;
            case Strategy::DcLeaderCheat: pl.mode = dc.formed ? Mode::ProveCommitted : Mode::Lazy; break;
            case Strategy::DcFollower:
                if (dc.formed) pl.mode = Mode::ProveCommitted;
                break;
        }
        return pl;
    }

    Act act(const Plan& pl, std::uint64_t e, const TransactionBatch& batch, const StateAssertion& assertion,
            const LazyCollusion& lc, const DiligentCollusion& dc) const {
        const auto& cfg = wts[pl.id];
        const double theta = sc.params.theta;
        Act a;
        if (pl.mode == Mode::Execute || pl.reporter) {
            CheckResult cr = check_state(vrf, l2, batch, assertion.r_S, cfg, theta, e);
            a.valid = cr.valid;
            a.r_S = cr.computed_r_S;
            a.r_E = cr.r_E;
            a.submission = std::move(cr.submission);
        }
        switch (pl.mode) {
            case Mode::Execute: break;
            case Mode::Lazy:
                a.submission = lazy_act(vrf, cfg, assertion.r_S, theta, derive_seed(sc.seed, {kLazy, e, pl.id}), e,
                                        sc.lazy_copies_assertion)
                                   .submission;
                break;
            case Mode::ProveShared:
                a.submission = prove_from_roots(vrf, cfg, assertion.r_S, lc.shared_r_E, theta, e);
                break;
            case Mode::ProveCommitted:
                a.submission = prove_from_roots(vrf, cfg, dc.committed_r_S, dc.committed_r_E, theta, e);
                break;
        }
        return a;
    }

    EpochOutcome run_epoch() {
        const auto& p = sc.params;
        const std::uint64_t e = next_epoch++;
        books.set_epoch(e);
        const std::uint32_t T0 = p.tlc_ticks;
        const std::uint32_t Tw = T0 + 1;
        const std::uint32_t Ts = T0 + p.t1_ticks;
        const std::uint32_t Tc = Ts + p.tc_ticks;
        Ledger& ledger = books.ledger();

        EpochOutcome out;
        out.epoch = e;

        std::vector<WatchtowerId> active;
        for (const auto& w : wts) {
            if (ledger.stake(w.id) > Micros{0}) active.push_back(w.id);
        }
        std::vector<Micros> before(wts.size());
        for (WatchtowerId i : active) before[i] = ledger.wealth(i);

        Rng batch_rng(sc.seed, {kBatch, e});
        const TransactionBatch batch = generate_batch(l2, sc.workload, e, batch_rng);
        ApplyResult truth = apply(l2, batch);
        const Digest true_r_S = state_root(truth.state);
        const Digest true_r_E = trace_root(truth.trace);

        LazyCollusion lc;
        if (sc.collusion == CollusionKind::Lazy) {
            std::vector<WatchtowerId> members;
            for (WatchtowerId i : active) {
                if (is_lazy_collusion_member(wts[i].strategy)) members.push_back(i);
            }
            if (!members.empty()) {
                lc = form_lazy_collusion(books, p, members, active.size(), sc.collusion_leader,
                                         derive_seed(sc.seed, {kLcRoot, e}), 0);
            }
        }

        Rng asserter(sc.seed, {kAsserter, e});
        const bool honest = !asserter.bernoulli(sc.asserter_fault_rate);
        out.assertion = assert_state(l2, batch, honest, derive_seed(sc.seed, {kAsserterRoot, e}));
        const bool assertion_correct = out.assertion.r_S == true_r_S;
        books.note(T0, EventKind::Assert, "asserter",
                   "batch=" + std::to_string(e) + " r_S=" + short_hex(out.assertion.r_S));

        DiligentCollusion dc;
        if (sc.collusion == CollusionKind::Diligent) {
            auto it = std::find_if(wts.begin(), wts.end(),
                                   [](const WatchtowerConfig& w) { return is_diligent_collusion_leader(w.strategy); });
            const WatchtowerId leader = it->id;
            std::vector<WatchtowerId> followers;
            for (WatchtowerId i : active) {
                if (wts[i].strategy == Strategy::DcFollower) followers.push_back(i);
            }
            if (ledger.stake(leader) > Micros{0} && !followers.empty()) {
                const LeaderPlan plan = it->strategy == Strategy::DcLeaderObey    ? LeaderPlan::Obey
                                        : it->strategy == Strategy::DcLeaderBetray ? LeaderPlan::Betray
                                                                                   : LeaderPlan::Cheat;
                dc = form_diligent_collusion(books, p, leader, plan, followers, true_r_S, true_r_E,
                                             out.assertion.r_S, derive_seed(sc.seed, {kDcRoot, e}), T0);
            }
        }
        out.lazy_collusion_formed = lc.formed;
        out.diligent_collusion_formed = dc.formed;

        // Watchtower actions are independent given the epoch inputs.
        std::vector<Plan> plans;
        for (WatchtowerId i : active) plans.push_back(plan_for(i, lc, dc));
        std::vector<Act> acts(plans.size());
        const long np = static_cast<long>(plans.size());
#pragma omp parallel for schedule(static) if (!opt.serial)
        for (long k = 0; k < np; ++k) acts[k] = act(plans[k], e, batch, out.assertion, lc, dc);

        std::vector<std::size_t> executors;
        for (std::size_t k = 0; k < plans.size(); ++k) {
            if (plans[k].mode == Mode::Execute || plans[k].reporter) {
                const WatchtowerId i = plans[k].id;
                books.post(Tw, EventKind::Settle, actor_name(i), AccountRef::earnings(i), AccountRef::external(),
                           p.cost_execute, "execution_cost");
            }
            if (plans[k].mode == Mode::Execute) executors.push_back(k);
        }

        std::vector<std::size_t> submitted;  // indices into plans
        for (std::size_t k = 0; k < plans.size(); ++k) {
            if (!acts[k].submission) continue;
            submitted.push_back(k);
            out.submissions.push_back(*acts[k].submission);
            char d[32];
            std::snprintf(d, sizeof d, "d=%.6f", acts[k].submission->proof.d);
            books.note(Tw, EventKind::Submit, actor_name(plans[k].id), d);
        }

        for (std::size_t k : executors) {
            if (acts[k].valid) continue;
            if (auto alert = alerts.raise_alert(plans[k].id, e, acts[k].r_S)) {
                out.alerts.push_back(*alert);
                books.note(Tw, EventKind::Alert, actor_name(plans[k].id), "batch=" + std::to_string(e) +
                                                                             " computed_r_S=" + short_hex(acts[k].r_S));
            }
        }

        WhistleblowerContract wb;
        wb.reward = p.reward_whistleblower;
        wb.deposit = p.whistleblower_deposit;
        if (lc.formed && sc.whistleblower) {
            std::vector<std::size_t> reporters;
            for (std::size_t k = 0; k < plans.size(); ++k) {
                if (plans[k].reporter) reporters.push_back(k);
            }
            if (!reporters.empty()) {
                // Reports race; the winner is drawn uniformly.
                Rng race(sc.seed, {kReporter, e});
                const std::size_t first = race.below(reporters.size());
                std::rotate(reporters.begin(), reporters.begin() + static_cast<long>(first), reporters.end());
                for (std::size_t k : reporters) {
                    whistleblow(books, wb, p, plans[k].id, acts[k].r_E, l2, batch, Tw);
                }
                out.whistleblown = wb.resolved;
            }
        }

        // Peer verification: each executor checks every other submission
        // against its own roots.
        std::vector<std::vector<char>> challenge(executors.size(), std::vector<char>(submitted.size(), 0));
        const long ne = static_cast<long>(executors.size());
#pragma omp parallel for schedule(static) if (!opt.serial)
        for (long x = 0; x < ne; ++x) {
            const Act& me = acts[executors[x]];
            for (std::size_t j = 0; j < submitted.size(); ++j) {
                const ProofSubmission& s = *acts[submitted[j]].submission;
                if (s.watchtower_id == plans[executors[x]].id) continue;
                challenge[x][j] = !verify_peer_proof(vrf, s, me.r_S, me.r_E, wts[s.watchtower_id].keys.public_key);
            }
        }

        std::vector<Dispute> disputes;
        std::vector<char> disputed(submitted.size(), 0);
        for (std::size_t j = 0; j < submitted.size(); ++j) {
            const ProofSubmission& s = *acts[submitted[j]].submission;
            Dispute d;
            d.submission = s;
            if (wb.resolved && s.claimed_r_E == lc.shared_r_E) {
                d.exposure = true;
            } else {
                for (std::size_t x = 0; x < executors.size(); ++x) {
                    if (challenge[x][j]) d.challengers.push_back(plans[executors[x]].id);
                }
                if (d.challengers.empty()) continue;
            }
            disputed[j] = 1;
            open_dispute(books, p, d, Tw);
            disputes.push_back(std::move(d));
        }

        std::vector<char> bounty(wts.size(), 0);
        for (std::size_t j = 0; j < submitted.size(); ++j) {
            if (disputed[j]) continue;
            const WatchtowerId i = plans[submitted[j]].id;
            books.post(Ts, EventKind::Settle, actor_name(i), AccountRef::op(), AccountRef::earnings(i), p.reward_bounty,
                       "bounty");
            bounty[i] = 1;
        }
        out.finalized = out.alerts.empty();
        books.note(Ts, EventKind::Settle, "asserter", out.finalized ? "assertion_finalized" : "assertion_reverted");

        bool exposure_slashed = false, follower_slashed = false, leader_slashed = false;
        std::vector<char> slashed(wts.size(), 0);
        for (const auto& d : disputes) {
            DisputeRecord r = resolve_dispute(books, p, d, l2, batch, Tc);
            if (r.submitter_faulty) {
                slashed[r.submitter] = 1;
                exposure_slashed |= r.exposure;
                follower_slashed |= dc.formed && contains(dc.followers, r.submitter);
                leader_slashed |= dc.formed && r.submitter == dc.leader;
            } else {
                books.post(Tc, EventKind::Settle, actor_name(r.submitter), AccountRef::op(),
                           AccountRef::earnings(r.submitter), p.reward_bounty, "bounty_after_dispute");
                bounty[r.submitter] = 1;
            }
            out.disputes.push_back(std::move(r));
        }
        if (wb.resolved) settle_whistleblower(books, wb, p, exposure_slashed, Tc);
        if (lc.formed) {
            std::vector<WatchtowerId> traitors;
            for (std::size_t k : submitted) {
                if (wts[plans[k].id].strategy == Strategy::LcBetray) traitors.push_back(plans[k].id);
            }
            settle_lazy_collusion(books, lc, traitors, Tc);
        }
        settle_diligent_collusion(books, dc, follower_slashed, leader_slashed, Tc);

        l2 = std::move(truth.state);

        // Bookkeeping for the report.
        rep.epochs += 1;
        rep.disputes += out.disputes.size();
        rep.lazy_collusion_epochs += lc.formed;
        rep.diligent_collusion_epochs += dc.formed;
        rep.whistleblows += wb.resolved;
        if (!assertion_correct) {
            rep.faulty_assertions += 1;
            if (out.finalized) rep.incorrect_finalized += 1;
        } else if (!out.finalized) {
            rep.honest_reverted += 1;
        }
        if (!out.finalized) rep.reverted += 1;
        if (!assertion_correct && !out.finalized) {
            rep.detected += 1;
            rep.detection_latency_sum += Tw - T0;
        }
        for (std::size_t k = 0; k < plans.size(); ++k) {
            const WatchtowerId i = plans[k].id;
            auto& st = rep.watchtowers[i];
            const Micros delta = ledger.wealth(i) - before[i];
            out.payoffs.emplace_back(i, delta);
            const double u = delta.units();
            st.epochs_active += 1;
            st.payoff_sum += u;
            st.payoff_sq_sum += u * u;
            st.bounties += bounty[i];
            st.slashes += slashed[i];
            if (acts[k].submission) {
                st.submissions += 1;
                if (wts[i].strategy == Strategy::LazyDeceitful) {
                    rep.lazy_submissions += 1;
                    rep.lazy_slashed += slashed[i];
                }
            }
        }
        for (const auto& r : out.disputes) {
            if (!r.submitter_faulty) continue;
            for (WatchtowerId c : r.challengers) rep.watchtowers[c].disputes_won += 1;
        }
        rep.conservation_checks += 1;
        rep.conserved = rep.conserved && ledger.conserved();
        return out;
    }

    SimulationReport report() const {
        SimulationReport r = rep;
        const Ledger& l = books.ledger();
        r.events = books.event_count();
        r.operator_spend = l.operator_spend();
        r.pool = l.pool();
        r.escrow = l.escrow();
        r.external = l.external();
        for (auto& st : r.watchtowers) {
            st.final_stake = l.stake(st.id);
            st.final_earnings = l.earnings(st.id);
        }
        return r;
    }
};

Engine::Engine(Scenario scenario, SimulationOptions options)
    : impl_(std::make_unique<Impl>(std::move(scenario), options)) {}
Engine::~Engine() = default;

EpochOutcome Engine::run_epoch() { return impl_->run_epoch(); }
SimulationReport Engine::report() const { return impl_->report(); }
const Books& Engine::books() const { return impl_->books; }
const Scenario& Engine::scenario() const { return impl_->sc; }
const std::vector<WatchtowerConfig>& Engine::watchtowers() const { return impl_->wts; }
const KeyRegistry& Engine::registry() const { return impl_->registry; }
const LedgerState& Engine::rollup_state() const { return impl_->l2; }

SimulationReport run_simulation(const Scenario& scenario, const SimulationOptions& options) {
    Engine engine(scenario, options);
    for (std::uint64_t e = 0; e < scenario.epochs; ++e) engine.run_epoch();
    return engine.report();
}

// --- rendering ------------------------------------------------------------

std::string render_report_json(const SimulationReport& r) {
    nlohmann::json j;
    j["scenario"] = r.scenario_name;
    j["seed"] = r.seed;
    j["epochs"] = r.epochs;
    j["events"] = r.events;
    j["assertions"] = {{"faulty", r.faulty_assertions},
                       {"reverted", r.reverted},
                       {"incorrect_finalized", r.incorrect_finalized},
                       {"honest_reverted", r.honest_reverted},
                       {"detected", r.detected},
                       {"mean_detection_latency_ticks",
                        r.detected ? static_cast<double>(r.detection_latency_sum) / r.detected : 0.0}};
    j["lazy"] = {{"submissions", r.lazy_submissions}, {"slashed", r.lazy_slashed}};
    j["disputes"] = r.disputes;
    j["collusion"] = {{"lazy_epochs", r.lazy_collusion_epochs},
                      {"diligent_epochs", r.diligent_collusion_epochs},
                      {"whistleblows", r.whistleblows}};
    j["ledger_micros"] = {{"initial_stake", r.initial_stake.raw()}, {"operator_spend", r.operator_spend.raw()},
                          {"pool", r.pool.raw()},                   {"escrow", r.escrow.raw()},
                          {"external", r.external.raw()},           {"conserved", r.conserved},
                          {"checks", r.conservation_checks}};
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& w : r.watchtowers) {
        nlohmann::json row;
        row["id"] = w.id;
        row["strategy"] = std::string(to_string(w.strategy));
        row["alpha"] = w.alpha;
        row["epochs_active"] = w.epochs_active;
        row["submissions"] = w.submissions;
        row["submission_rate"] = w.submission_rate();
        row["bounties"] = w.bounties;
        row["slashes"] = w.slashes;
        row["disputes_won"] = w.disputes_won;
        row["event_level_mean"] = w.mean_payoff();
        row["event_level_std_error"] = w.std_error();
        row["model_expectation"] = w.model_expectation ? nlohmann::json(*w.model_expectation) : nlohmann::json();
        row["final_stake_micros"] = w.final_stake.raw();
        row["final_earnings_micros"] = w.final_earnings.raw();
        rows.push_back(std::move(row));
    }
    j["watchtowers"] = std::move(rows);
    return j.dump(2) + "\n";
}

std::string render_report_text(const SimulationReport& r) {
    std::ostringstream o;
    char line[256];
    o << "scenario " << r.scenario_name << "  seed " << r.seed << "  epochs " << r.epochs << "  events " << r.events
      << "\n";
    o << "assertions: faulty " << r.faulty_assertions << ", reverted " << r.reverted << ", incorrect finalized "
      << r.incorrect_finalized << ", honest reverted " << r.honest_reverted << "\n";
    o << "lazy submissions " << r.lazy_submissions << ", slashed " << r.lazy_slashed << "; disputes " << r.disputes
      << "; lc epochs " << r.lazy_collusion_epochs << ", dc epochs " << r.diligent_collusion_epochs
      << ", whistleblows " << r.whistleblows << "\n";
    o << "operator spend " << r.operator_spend.str() << ", pool " << r.pool.str() << ", escrow " << r.escrow.str()
      << ", external costs " << r.external.str() << ", conservation " << (r.conserved ? "ok" : "VIOLATED") << " ("
      << r.conservation_checks << " checks)\n\n";
    std::snprintf(line, sizeof line, "%4s  %-16s %7s %8s %8s %8s %6s %14s %10s %14s\n", "id", "strategy", "alpha",
                  "active", "submit", "bounty", "slash", "event-mean", "std-err", "model");
    o << line;
    for (const auto& w : r.watchtowers) {
        char expect[32] = "n/a";
        if (w.model_expectation) std::snprintf(expect, sizeof expect, "%.6f", *w.model_expectation);
        std::snprintf(line, sizeof line, "%4u  %-16s %7.4f %8llu %8llu %8llu %6llu %14.6f %10.6f %14s\n", w.id,
                      std::string(to_string(w.strategy)).c_str(), w.alpha,
                      static_cast<unsigned long long>(w.epochs_active), static_cast<unsigned long long>(w.submissions),
                      static_cast<unsigned long long>(w.bounties), static_cast<unsigned long long>(w.slashes),
                      w.mean_payoff(), w.std_error(), expect);
        o << line;
    }
    return o.str();
}

}  // namespace pod
