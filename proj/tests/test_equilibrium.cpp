#include <functional>
#include <set>

#include "doctest.h"
#include "pod/conditions.hpp"
#include "pod/equilibrium.hpp"
#include "pod/rng.hpp"
#include "pod/watchtower.hpp"

using namespace pod;

namespace {

EconomicParams params_for(int n, double rb = 6, double t = 20000, double rw = 121000) {
    EconomicParams p;
    p.n = n;
    p.theta = 0.9;
    p.reward_bounty = rb;
    p.reward_challenge = 2;
    p.reward_whistleblower = rw;
    p.cost_execute = 1;
    p.cost_validate = 100000;
    p.stakes = equal_stakes(n);
    p.alpha_0 = 1.0 / n;
    p.total_stake = n * (100000 + (n - 1) * 2 + 2.0);
    p.collusion_deposit = t;
    p.collusion_rent = 0.5;
    return p;
}

// Brute-force oracle: recursive enumeration, full payoff vectors, explicit
// unilateral deviations.
std::set<Profile> oracle_nash(const Game& g) {
    std::set<Profile> out;
    Profile p(g.players());
    std::function<void(int)> rec = [&](int i) {
        if (i == g.players()) {
            if (!g.admissible(count_actions(p))) return;
            const auto u = g.payoffs(p);
            for (int k = 0; k < g.players(); ++k) {
                for (Action b : g.actions(k)) {
                    Profile q = p;
                    q[k] = b;
                    if (strictly_greater(g.payoffs(q)[k], u[k])) return;
                }
            }
            out.insert(g.realize(p));
            return;
        }
        for (Action a : g.actions(i)) {
            p[i] = a;
            rec(i + 1);
        }
    };
    rec(0);
    return out;
}

std::set<Profile> as_set(const NashResult& r) {
    std::set<Profile> s;
    for (const auto& e : r.equilibria) s.insert(e.profile);
    return s;
}

}  // namespace

TEST_CASE("strictly_greater uses a relative tolerance") {
    CHECK(strictly_greater(1.0, 0.0));
    CHECK_FALSE(strictly_greater(1.0, 1.0));
    CHECK_FALSE(strictly_greater(1e6 + 1e-4, 1e6));
    CHECK(strictly_greater(1e6 + 1e-2, 1e6));
    CHECK_FALSE(strictly_greater(0.0, 1.0));
}

TEST_CASE("Nash sets agree with a brute-force oracle and the serial reference") {
    Rng rng(21);
    const GameKind kinds[] = {GameKind::PoD, GameKind::LC, GameKind::DC, GameKind::PoDWithCollusion,
                              GameKind::PoDWithCollusionAndWhistleblower};
    for (int trial = 0; trial < 40; ++trial) {
        const int n = 2 + static_cast<int>(rng.below(4));
        auto p = params_for(n, 0.5 + 10 * rng.uniform01(), 30000 * rng.uniform01(), 200000 * rng.uniform01());
        p.reward_challenge = 3 * rng.uniform01();
        p.collusion_rent = rng.uniform01();
        GameSpec spec{kinds[trial % 5], p};
        spec.dc_mode = rng.below(2) ? DcMode::TableLiteral : DcMode::ProofNarrative;
        auto g = make_game(spec);
        const auto fast = find_pure_nash(*g);
        const auto slow = find_pure_nash_serial(*g);
        CAPTURE(trial);
        CHECK(as_set(fast) == oracle_nash(*g));
        REQUIRE(fast.equilibria.size() == slow.equilibria.size());
        for (std::size_t k = 0; k < fast.equilibria.size(); ++k) {
            CHECK(fast.equilibria[k].profile == slow.equilibria[k].profile);
            CHECK(fast.equilibria[k].payoffs == slow.equilibria[k].payoffs);
        }
        CHECK(fast.raw_count == slow.raw_count);
        CHECK(fast.profiles_checked == slow.profiles_checked);
    }
}

TEST_CASE("dominance: parallel equals serial, including the witness") {
    Rng rng(5);
    for (int trial = 0; trial < 30; ++trial) {
        const int n = 2 + static_cast<int>(rng.below(5));
        auto p = params_for(n, 10 * rng.uniform01(), 30000 * rng.uniform01());
        auto g = make_game({trial % 2 ? GameKind::LC : GameKind::PoD, p});
        for (Action a : g->actions(0)) {
            const auto f = is_dominant(*g, a, 0);
            const auto s = is_dominant_serial(*g, a, 0);
            CHECK(f.dominant == s.dominant);
            CHECK(f.counterexample == s.counterexample);
            CHECK(f.alternative == s.alternative);
            CHECK(f.profiles_checked == s.profiles_checked);
        }
    }
}

TEST_CASE("diligence is dominant above the bounty bound and fails below it") {
    for (int n = 2; n <= 6; ++n) {
        auto p = params_for(n);
        const double bound = p.cost_execute / phi(p.theta, 1.0 / n);
        p.reward_bounty = 1.01 * bound;
        auto g = make_game({GameKind::PoD, p});
        for (int i = 0; i < n; ++i) CHECK(is_dominant(*g, Action::Diligent, i).dominant);
        p.reward_bounty = 0.99 * bound;
        auto h = make_game({GameKind::PoD, p});
        const auto r = is_dominant(*h, Action::Diligent, 0);
        CHECK_FALSE(r.dominant);
        REQUIRE(r.counterexample);
        CHECK(r.alternative == Action::Abstain);
        CHECK(r.action_payoff < 0.0);
    }
}

TEST_CASE("combined collusion game: two equilibria, collusion efficient") {
    auto g = make_game({GameKind::PoDWithCollusion, params_for(5)});
    const auto r = find_pure_nash(*g);
    REQUIRE(r.equilibria.size() == 2);
    CHECK(as_set(r) == std::set<Profile>{Profile(5, Action::Diligent), Profile(5, Action::Obey)});
    const auto eff = pareto_efficient(*g, r.equilibria);
    REQUIRE(eff.size() == 1);
    CHECK(r.equilibria[eff[0]].profile == Profile(5, Action::Obey));
    // Joining without the others is void: all-but-one obey realizes to diligent.
    CHECK(r.raw_count >= 2);
}

TEST_CASE("pareto helpers") {
    CHECK(pareto_dominates({1, 2}, {1, 1}));
    CHECK_FALSE(pareto_dominates({1, 1}, {1, 1}));
    CHECK_FALSE(pareto_dominates({2, 0}, {1, 1}));
    auto g = make_game({GameKind::PoD, params_for(3)});
    const auto r = find_pure_nash(*g);
    REQUIRE(r.equilibria.size() == 1);
    CHECK(pareto_efficient(*g, r.equilibria) == std::vector<std::size_t>{0});
    // All-diligent is Pareto-dominated by profiles outside the equilibrium set
    // (everyone lazy and unchecked would pay more), so the global scope drops it.
    CHECK(pareto_efficient(*g, r.equilibria, ParetoScope::Global).empty());
}

TEST_CASE("improving deviation") {
    auto g = make_game({GameKind::PoD, params_for(4)});
    const Profile lazy(4, Action::Lazy);
    CHECK(improving_deviation(*g, lazy, 0) == Action::Diligent);
    CHECK_FALSE(improving_deviation(*g, Profile(4, Action::Diligent), 2).has_value());
}

TEST_CASE("enumeration refuses oversized games") {
    auto big = make_game({GameKind::PoD, params_for(21)});
    CHECK_THROWS_AS(find_pure_nash(*big), EnumerationTooLarge);
    CHECK_THROWS_AS(profile_count(*big), EnumerationTooLarge);
    // 5^12 profiles exceeds 2^27.
    auto wide = make_game({GameKind::PoDWithCollusionAndWhistleblower, params_for(12)});
    CHECK_THROWS_AS(find_pure_nash(*wide), EnumerationTooLarge);
    auto ok = make_game({GameKind::PoD, params_for(8)});
    CHECK(profile_count(*ok) == 6561);
}
