#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "pod/watchtower.hpp"

using namespace pod;

namespace {

struct Fixture {
    KeyRegistry reg{4};
    std::vector<WatchtowerConfig> wts;
    EscrowVrf vrf{reg};
    LedgerState prior = genesis_state({8, 0, 1000});
    TransactionBatch batch;

    explicit Fixture(int n = 4, double alpha = 0.25) {
        for (int i = 0; i < n; ++i) {
            auto keys = generate_keypair(17, static_cast<WatchtowerId>(i));
            reg.enroll(keys);
            wts.push_back({static_cast<WatchtowerId>(i), alpha, keys, Strategy::Diligent});
        }
        Rng rng(8);
        batch = generate_batch(prior, {8, 6, 1000}, 0, rng);
    }
};

}  // namespace

TEST_CASE("phi closed form") {
    CHECK(phi(0.9, 0.1) == doctest::Approx(0.2056717653).epsilon(1e-9));
    CHECK(phi(0.9, 0.01) == doctest::Approx(0.0227627790).epsilon(1e-9));
    CHECK(phi(0.9, 1.0) == doctest::Approx(0.9).epsilon(1e-15));
    CHECK(phi(0.5, 0.5) == doctest::Approx(1.0 - std::sqrt(0.5)).epsilon(1e-15));
    // Tiny theta keeps relative precision: phi ~ alpha*theta.
    CHECK(phi(1e-12, 0.1) == doctest::Approx(1e-13).epsilon(1e-9));
    CHECK_THROWS_AS(phi(1.0, 0.1), std::domain_error);
    CHECK_THROWS_AS(phi(0.0, 0.1), std::domain_error);
    CHECK_THROWS_AS(phi(0.9, 0.0), std::domain_error);
    CHECK_THROWS_AS(phi(0.9, 1.5), std::domain_error);
}

TEST_CASE("phi is increasing in alpha and theta") {
    double prev = 0.0;
    for (double a = 0.05; a <= 1.0; a += 0.05) {
        CHECK(phi(0.9, a) > prev);
        prev = phi(0.9, a);
    }
    CHECK(phi(0.95, 0.1) > phi(0.9, 0.1));
}

TEST_CASE("Monte Carlo submission frequency matches phi") {
    Fixture f(1, 0.1);
    const double p = phi(0.9, 0.1);
    constexpr int kTrials = 20000;
    Rng rng(12);
    int hits = 0;
    for (int k = 0; k < kTrials; ++k) {
        if (prove_from_roots(f.vrf, f.wts[0], rng.digest(), rng.digest(), 0.9, k)) ++hits;
    }
    const double sigma = std::sqrt(p * (1 - p) / kTrials);
    CHECK(std::abs(hits / double(kTrials) - p) < 4 * sigma);
}

TEST_CASE("check_state executes and compares roots") {
    Fixture f;
    const auto truth = apply(f.prior, f.batch);
    const Digest good = state_root(truth.state);
    const auto ok = check_state(f.vrf, f.prior, f.batch, good, f.wts[0], 0.9, 0);
    CHECK(ok.valid);
    CHECK(ok.computed_r_S == good);
    CHECK(ok.r_E == trace_root(truth.trace));
    const auto bad = check_state(f.vrf, f.prior, f.batch, sha256(std::string_view("junk")), f.wts[0], 0.9, 0);
    CHECK_FALSE(bad.valid);
    CHECK(bad.computed_r_S == good);
    // Eligibility depends on the true roots, never on the assertion.
    CHECK(bad.submission.has_value() == ok.submission.has_value());
}

TEST_CASE("honest peers verify each other; lazy proofs fail") {
    Fixture f(4, 0.999);  // alpha near 1 so every proof is submitted
    const auto truth = apply(f.prior, f.batch);
    const Digest rS = state_root(truth.state), rE = trace_root(truth.trace);
    std::vector<ProofSubmission> subs;
    for (const auto& w : f.wts) {
        auto c = check_state(f.vrf, f.prior, f.batch, rS, w, 0.9, 0);
        REQUIRE(c.submission);
        subs.push_back(*c.submission);
    }
    for (const auto& s : subs) CHECK(verify_peer_proof(f.vrf, s, rS, rE, f.wts[s.watchtower_id].keys.public_key));
    // Wrong key.
    CHECK_FALSE(verify_peer_proof(f.vrf, subs[0], rS, rE, f.wts[1].keys.public_key));

    const auto lazy = lazy_act(f.vrf, f.wts[2], rS, 0.9, 5, 0);
    REQUIRE(lazy.submission);
    CHECK(lazy.fake_r_S != rS);
    CHECK_FALSE(verify_peer_proof(f.vrf, *lazy.submission, rS, rE, f.wts[2].keys.public_key));

    const auto copier = lazy_act(f.vrf, f.wts[2], rS, 0.9, 5, 0, true);
    CHECK(copier.fake_r_S == rS);
    REQUIRE(copier.submission);
    CHECK_FALSE(verify_peer_proof(f.vrf, *copier.submission, rS, rE, f.wts[2].keys.public_key));
}

TEST_CASE("lazy submission rate mimics phi") {
    Fixture f(1, 0.1);
    const double p = phi(0.9, 0.1);
    constexpr int kTrials = 20000;
    int hits = 0;
    const Digest rS = sha256(std::string_view("asserted"));
    for (int k = 0; k < kTrials; ++k) hits += lazy_act(f.vrf, f.wts[0], rS, 0.9, 1000 + k, k).submission.has_value();
    CHECK(std::abs(hits / double(kTrials) - p) < 4 * std::sqrt(p * (1 - p) / kTrials));
}

TEST_CASE("alerts are deduplicated per watchtower and batch") {
    AlertBook book;
    const Digest r = sha256(std::string_view("r"));
    CHECK(book.raise_alert(1, 7, r).has_value());
    CHECK_FALSE(book.raise_alert(1, 7, r).has_value());
    CHECK(book.raise_alert(2, 7, r).has_value());
    CHECK(book.raise_alert(1, 8, r).has_value());
    CHECK(book.alerts().size() == 3);
    CHECK(book.any_for(7));
    CHECK_FALSE(book.any_for(9));
}

TEST_CASE("strategy tags roundtrip") {
    for (auto s : {Strategy::Diligent, Strategy::LazyDeceitful, Strategy::LcObey, Strategy::LcBetray,
                   Strategy::LcReport, Strategy::DcLeaderObey, Strategy::DcLeaderBetray, Strategy::DcLeaderCheat,
                   Strategy::DcFollower}) {
        CHECK(parse_strategy(to_string(s)) == s);
    }
    CHECK_FALSE(parse_strategy("sleepy").has_value());
}
