#include <cmath>
#include <map>
#include <sstream>

#include "doctest.h"
#include "pod/engine.hpp"
#include "pod/payoffs.hpp"
#include "pod/rng.hpp"
#include "support.hpp"

using namespace pod;

namespace {

ProtocolParams small_params() {
    ProtocolParams p;
    p.n = 3;
    p.cost_execute = Micros::from_units(1);
    p.cost_validate = Micros::from_units(100);
    p.reward_challenge = Micros::from_units(2);
    p.reward_bounty = Micros::from_units(6);
    p.reward_whistleblower = Micros::from_units(500);
    p.whistleblower_deposit = Micros::from_units(10);
    p.collusion_deposit = Micros::from_units(30);
    p.collusion_rent = Micros::from_units(0.5);
    return p;
}

Books fresh_books(std::optional<Micros> budget = std::nullopt) {
    return Books(Ledger(std::vector<Micros>(3, Micros::from_units(1000)), budget), nullptr, true);
}

struct World {
    LedgerState prior = genesis_state({6, 0, 100});
    TransactionBatch batch;
    Digest r_S, r_E;
    World() {
        Rng rng(2);
        batch = generate_batch(prior, {6, 8, 100}, 0, rng);
        const auto t = apply(prior, batch);
        r_S = state_root(t.state);
        r_E = trace_root(t.trace);
    }
    ProofSubmission submission(WatchtowerId who, bool honest) const {
        ProofSubmission s;
        s.watchtower_id = who;
        s.claimed_r_S = r_S;
        s.claimed_r_E = honest ? r_E : sha256(std::string_view("fake"));
        return s;
    }
};

std::string run_log(const Scenario& s, bool serial) {
    std::ostringstream out;
    SimulationOptions o;
    o.serial = serial;
    o.events_out = &out;
    run_simulation(s, o);
    return out.str();
}

}  // namespace

TEST_CASE("split_evenly hands the remainder to the lowest indices") {
    CHECK(split_evenly(Micros{10}, 3) == std::vector<Micros>{Micros{4}, Micros{3}, Micros{3}});
    CHECK(split_evenly(Micros{10}, 0).empty());
    Rng rng(6);
    for (int k = 0; k < 200; ++k) {
        const Micros total{static_cast<std::int64_t>(rng.below(1'000'000))};
        const auto parts = split_evenly(total, 1 + rng.below(13));
        Micros sum{};
        for (auto m : parts) sum += m;
        CHECK(sum == total);
        CHECK(parts.front() - parts.back() <= Micros{1});
    }
}

TEST_CASE("dispute against a faulty proof slashes and rewards the challengers") {
    World w;
    auto books = fresh_books();
    const auto p = small_params();
    const Dispute d{w.submission(0, false), {1, 2}, false};
    open_dispute(books, p, d, 1);
    CHECK(books.ledger().earnings(1) == -Micros::from_units(50));
    const auto r = resolve_dispute(books, p, d, w.prior, w.batch, 3);
    CHECK(r.submitter_faulty);
    CHECK(r.slashed == Micros::from_units(1000));
    CHECK(books.ledger().stake(0) == Micros{0});
    CHECK(books.ledger().earnings(1) == Micros::from_units(2));
    CHECK(books.ledger().earnings(2) == Micros::from_units(2));
    CHECK(r.paid_from_pool == Micros::from_units(104));
    CHECK(r.paid_by_operator == Micros{0});
    CHECK(books.ledger().pool() == Micros::from_units(896));
    CHECK(books.ledger().conserved());
}

TEST_CASE("dispute against a correct proof costs the challengers") {
    World w;
    auto books = fresh_books();
    const auto p = small_params();
    const Dispute d{w.submission(0, true), {1, 2}, false};
    open_dispute(books, p, d, 1);
    const auto r = resolve_dispute(books, p, d, w.prior, w.batch, 3);
    CHECK_FALSE(r.submitter_faulty);
    CHECK(books.ledger().stake(0) == Micros::from_units(1000));
    CHECK(books.ledger().earnings(1) == -Micros::from_units(50));
    CHECK(books.ledger().conserved());
}

TEST_CASE("a wrong state root alone is faulty too") {
    World w;
    auto books = fresh_books();
    auto s = w.submission(0, true);
    s.claimed_r_S = sha256(std::string_view("other"));
    const auto r = resolve_dispute(books, small_params(), {s, {}, true}, w.prior, w.batch, 3);
    CHECK(r.submitter_faulty);
    CHECK(books.events().back().reason == "exposed_proof");
}

TEST_CASE("pay_out drains the pool before the operator") {
    auto books = fresh_books();
    books.post(0, EventKind::Slash, "wt0", AccountRef::stake(0), AccountRef::pool(), Micros{30}, "x");
    const auto [pool, op] = pay_out(books, 1, EventKind::Settle, "wt1", AccountRef::earnings(1), Micros{50}, "r");
    CHECK(pool == Micros{30});
    CHECK(op == Micros{20});
    CHECK(books.events()[1].reason == "r:pool");
    CHECK(books.events()[2].reason == "r:operator");
    CHECK(books.ledger().conserved());
}

TEST_CASE("lazy collusion forms only with every active watchtower") {
    const auto p = small_params();
    auto books = fresh_books();
    const auto partial = form_lazy_collusion(books, p, {2, 0}, 3, std::nullopt, 9, 0);
    CHECK_FALSE(partial.formed);
    CHECK(books.ledger().escrow() == Micros{0});
    CHECK(books.ledger().earnings(0) == Micros{0});

    const auto c = form_lazy_collusion(books, p, {2, 1, 0}, 3, WatchtowerId{1}, 9, 0);
    CHECK(c.formed);
    CHECK(c.leader == 1);
    CHECK(c.members == std::vector<WatchtowerId>{0, 1, 2});
    CHECK(c.shared_r_E == Rng(9).digest());
    CHECK(books.ledger().escrow() == Micros::from_units(90));

    const auto s = settle_lazy_collusion(books, c, {2}, 5);
    CHECK(s.traitors == std::vector<WatchtowerId>{2});
    CHECK(books.ledger().earnings(0) == Micros::from_units(15));
    CHECK(books.ledger().earnings(1) == Micros::from_units(15));
    CHECK(books.ledger().earnings(2) == -Micros::from_units(30));
    CHECK(books.ledger().escrow() == Micros{0});
    CHECK(books.ledger().conserved());
}

TEST_CASE("an all-traitor contract refunds everyone") {
    const auto p = small_params();
    auto books = fresh_books();
    const auto c = form_lazy_collusion(books, p, {0, 1, 2}, 3, std::nullopt, 1, 0);
    CHECK(c.leader == 0);
    settle_lazy_collusion(books, c, {0, 1, 2}, 5);
    for (WatchtowerId i = 0; i < 3; ++i) CHECK(books.ledger().earnings(i) == Micros{0});
}

TEST_CASE("diligent collusion: formation and settlement") {
    World w;
    auto p = small_params();
    const Digest asserted = sha256(std::string_view("asserted"));
    {
        auto books = fresh_books();
        const auto none = form_diligent_collusion(books, p, 0, LeaderPlan::Obey, {}, w.r_S, w.r_E, asserted, 3, 0);
        CHECK_FALSE(none.formed);
        CHECK(books.events().empty());
    }
    {
        auto books = fresh_books();
        const auto c = form_diligent_collusion(books, p, 0, LeaderPlan::Obey, {2, 1}, w.r_S, w.r_E, asserted, 3, 0);
        CHECK(c.formed);
        CHECK(c.committed_r_S == w.r_S);
        CHECK(c.committed_r_E == w.r_E);
        settle_diligent_collusion(books, c, false, false, 4);
        CHECK(books.ledger().earnings(0) == Micros::from_units(1));
        CHECK(books.ledger().earnings(1) == -Micros::from_units(0.5));
        CHECK(books.ledger().escrow() == Micros{0});
    }
    {
        auto books = fresh_books();
        const auto c = form_diligent_collusion(books, p, 0, LeaderPlan::Cheat, {1, 2}, w.r_S, w.r_E, asserted, 3, 0);
        CHECK(c.committed_r_S == asserted);
        CHECK(c.committed_r_E != w.r_E);
        settle_diligent_collusion(books, c, true, false, 4);
        CHECK(books.ledger().earnings(0) == -Micros::from_units(30));
        CHECK(books.ledger().earnings(1) == Micros::from_units(15));
        CHECK(books.ledger().escrow() == Micros{0});
        CHECK(books.ledger().conserved());
    }
    p.collusion_rent = p.cost_execute;
    auto books = fresh_books();
    CHECK_THROWS_AS(form_diligent_collusion(books, p, 0, LeaderPlan::Obey, {1}, w.r_S, w.r_E, asserted, 3, 0),
                    std::invalid_argument);
}

TEST_CASE("whistleblower: wrong root forfeits, right root pays, identity stays hidden") {
    World w;
    const auto p = small_params();
    auto books = fresh_books();
    WhistleblowerContract c{p.reward_whistleblower, p.whistleblower_deposit, std::nullopt, false};
    CHECK(whistleblow(books, c, p, 2, sha256(std::string_view("nope")), w.prior, w.batch, 1) ==
          WhistleblowResult::Rejected);
    CHECK(books.ledger().pool() == Micros::from_units(10));
    CHECK(books.ledger().earnings(2) == -Micros::from_units(110));
    CHECK(whistleblow(books, c, p, 2, w.r_E, w.prior, w.batch, 1) == WhistleblowResult::Accepted);
    CHECK(whistleblow(books, c, p, 1, w.r_E, w.prior, w.batch, 1) == WhistleblowResult::AlreadyResolved);
    CHECK(c.first_reporter == WatchtowerId{2});
    settle_whistleblower(books, c, p, true, 3);
    // -110 (rejected) -110 (accepted) +2 +500 +10
    CHECK(books.ledger().earnings(2) == Micros::from_units(292));
    CHECK(books.ledger().escrow() == Micros{0});
    CHECK(books.ledger().conserved());
    for (const auto& e : books.events()) {
        CHECK(e.actor == "anon");
        CHECK(e.from.find("wt") == std::string::npos);
        CHECK(e.to.find("wt") == std::string::npos);
    }
}

TEST_CASE("serial and parallel runs write identical event logs") {
    for (const char* name : {"lazy-mix.ini", "whistleblower.ini", "diligent-collusion.ini", "lc-betray.ini"}) {
        auto s = load_scenario(test::scenario_path(name));
        s.epochs = std::min<std::uint64_t>(s.epochs, 40);
        CAPTURE(name);
        const auto a = run_log(s, true);
        CHECK(!a.empty());
        CHECK(a == run_log(s, false));
    }
}

TEST_CASE("same seed replays, another seed diverges") {
    const auto s = test::baseline(30, 5);
    CHECK(run_log(s, false) == run_log(s, false));
    CHECK(run_log(s, false) != run_log(test::baseline(30, 6), false));
}

TEST_CASE("replaying the event log reconstructs the ledger") {
    for (const char* name : {"lazy-mix.ini", "lc-betray.ini", "dc-obey.ini", "whistleblower.ini"}) {
        auto s = load_scenario(test::scenario_path(name));
        s.epochs = std::min<std::uint64_t>(s.epochs, 60);
        s.asserter_fault_rate = 0.2;
        CAPTURE(name);
        std::ostringstream out;
        SimulationOptions o;
        o.events_out = &out;
        Engine engine(s, o);
        for (std::uint64_t e = 0; e < s.epochs; ++e) engine.run_epoch();

        std::map<std::string, std::int64_t> bal;
        const auto stakes = initial_stakes(s);
        for (WatchtowerId i = 0; i < stakes.size(); ++i) bal[actor_name(i) + ".stake"] = stakes[i].raw();
        std::istringstream in(out.str());
        std::string line;
        while (std::getline(in, line)) {
            const auto ev = parse_event_line(line);
            if (ev.from.empty()) continue;
            bal[ev.from] -= ev.amount.raw();
            bal[ev.to] += ev.amount.raw();
        }
        const auto& l = engine.books().ledger();
        CHECK(bal["pool"] == l.pool().raw());
        CHECK(bal["escrow"] == l.escrow().raw());
        CHECK(bal["external"] == l.external().raw());
        CHECK(-bal["operator"] == l.operator_spend().raw());
        // Hidden flows only appear as anon.*; the per-watchtower total still matches.
        std::int64_t logged = bal["anon.stake"] + bal["anon.earnings"], held = 0;
        for (WatchtowerId i = 0; i < stakes.size(); ++i) {
            logged += bal[actor_name(i) + ".stake"] + bal[actor_name(i) + ".earnings"];
            held += l.wealth(i).raw();
            if (!s.whistleblower) {
                CHECK(bal[actor_name(i) + ".stake"] == l.stake(i).raw());
                CHECK(bal[actor_name(i) + ".earnings"] == l.earnings(i).raw());
            }
        }
        CHECK(logged == held);
        CHECK(l.conserved());
    }
}

TEST_CASE("baseline epochs: faults revert, honest assertions finalize") {
    auto s = test::baseline(200, 3);
    s.asserter_fault_rate = 0.3;
    const auto r = run_simulation(s);
    CHECK(r.epochs == 200);
    CHECK(r.faulty_assertions > 30);
    CHECK(r.incorrect_finalized == 0);
    CHECK(r.honest_reverted == 0);
    CHECK(r.reverted == r.faulty_assertions);
    CHECK(r.detected == r.faulty_assertions);
    CHECK(r.conserved);
    CHECK(r.conservation_checks == 200);
    for (const auto& w : r.watchtowers) CHECK(w.slashes == 0);
}

TEST_CASE("lazy watchtowers are slashed whenever they submit") {
    auto s = load_scenario(test::scenario_path("lazy-mix.ini"));
    s.epochs = 300;
    const auto r = run_simulation(s);
    CHECK(r.lazy_submissions > 0);
    CHECK(r.lazy_slashed == r.lazy_submissions);
    CHECK(r.incorrect_finalized == 0);
    CHECK(r.conserved);
}

TEST_CASE("operator budget exhaustion raises InsolventError") {
    auto s = test::baseline(50, 1);
    s.operator_budget = Micros::from_units(10);
    CHECK_THROWS_AS(run_simulation(s), InsolventError);
    CHECK_THROWS_AS(Engine(Scenario{}), ScenarioError);
}

TEST_CASE("model expectations follow the game payoffs") {
    const auto s = test::baseline();
    const auto ex = model_expectations(s);
    const auto e = economic_view(s.params, s.stakes);
    for (const auto& v : ex) {
        REQUIRE(v);
        CHECK(*v == doctest::Approx(payoff_pod(e, 0, PodAction::Diligent, 10)));
    }
    const auto dc = load_scenario(test::scenario_path("diligent-collusion.ini"));
    for (const auto& v : model_expectations(dc)) CHECK(v.has_value());
}

TEST_CASE("report rendering") {
    const auto r = run_simulation(test::baseline(5, 2));
    const auto json = render_report_json(r);
    CHECK(json.find("\"event_level_mean\"") != std::string::npos);
    CHECK(json.find("\"model_expectation\"") != std::string::npos);
    CHECK(render_report_text(r).find("conservation ok") != std::string::npos);
}
