// Acceptance suite: one PASS/FAIL line per criterion. Exit status is the
// number of failed criteria (0 when all pass).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "pod/conditions.hpp"
#include "pod/engine.hpp"
#include "pod/equilibrium.hpp"
#include "pod/merkle.hpp"
#include "pod/param_calc.hpp"
#include "pod/rng.hpp"
#include "pod/vrf.hpp"

using namespace pod;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& what) {
        if (ok) return;
        pass = false;
        if (!detail.empty()) detail += "; ";
        detail += what;
    }
};

std::string fmt(const char* pattern, double a, double b = 0.0, double c = 0.0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, pattern, a, b, c);
    return buf;
}

const char* kScenarios[] = {"baseline.ini",      "lazy-mix.ini", "lazy-collusion.ini",     "whistleblower.ini",
                            "lc-betray.ini",     "dc-obey.ini",  "diligent-collusion.ini"};

std::string scenario(const char* name) { return std::string(POD_SCENARIO_DIR) + "/" + name; }

// Parameters a hair above the bounty, challenge and stake bounds.
EconomicParams above_bounds(int n, double scale = 1.01) {
    BoundsInput in;
    in.n = n;
    in.reward_challenge = scale * in.cost_execute;
    const auto r = compute_bounds(in);
    EconomicParams p;
    p.n = n;
    p.theta = in.theta;
    p.cost_execute = in.cost_execute;
    p.cost_validate = in.cost_validate;
    p.reward_bounty = scale * r.R_B_min;
    p.reward_challenge = scale * r.R_C_min;
    p.stakes = equal_stakes(n);
    p.alpha_0 = 1.0 / n;
    p.total_stake = scale * (p.cost_validate + (n - 1) * p.reward_challenge) / p.alpha_0;
    p.collusion_rent = 0.5;
    return p;
}

double rhs_of(const EconomicParams& p, const std::string& row) {
    for (const auto& c : check_conditions(p)) {
        if (c.name == row) return c.rhs;
    }
    throw std::logic_error("no condition row " + row);
}

std::set<Profile> nash_set(const Game& g) {
    std::set<Profile> s;
    for (const auto& e : find_pure_nash(g).equilibria) s.insert(e.profile);
    return s;
}

Outcome params_reproduction() {
    Outcome o;
    const auto r = compute_bounds({});
    o.require(std::abs(r.phi_unit - 0.205672) <= 0.0005, fmt("phi %.6f", r.phi_unit));
    o.require(r.R_B_min_ceil == 5.0, fmt("R_B bound %.0f", r.R_B_min_ceil));
    o.require(r.min_stake == 100009.0, fmt("min stake %.2f", r.min_stake));
    o.require(std::abs(r.t_min - 18514) <= 2, fmt("t bound %.2f", r.t_min));
    o.require(std::abs(r.R_w_min - 120572) <= 2, fmt("R_w bound %.2f", r.R_w_min));
    BoundsInput hundred;
    hundred.n = 100;
    const auto h = compute_bounds(hundred);
    o.require(h.R_B_min_ceil == 44.0, fmt("n=100 R_B bound %.0f", h.R_B_min_ceil));
    o.require(std::abs(h.R_w_min - 102281) <= 2, fmt("n=100 R_w bound %.2f", h.R_w_min));
    // Exercise the command itself as well as the library call.
    std::ostringstream out, err;
    o.require(cli::run({"pod", "params", "--n", "10", "--theta", "0.9", "--c-t", "1", "--c-v", "100000"}, out, err) ==
                  0,
              "pod params failed: " + err.str());
    if (o.pass) {
        o.detail = fmt("phi %.6f, R_B 5, stake 100009, t %.2f", r.phi_unit, r.t_min) +
                   fmt(", R_w %.2f; n=100: R_B 44, R_w %.2f", r.R_w_min, h.R_w_min);
    }
    return o;
}

Outcome secured_value() {
    Outcome o;
    SecuredValueInput in;
    in.fee_per_tx = 3;
    in.batch_size = 200;
    in.phi = 0.2;
    in.batches_per_year = 700000;
    in.apy = 0.06;
    const auto v = secured_value_estimate(in);
    const double rel = std::abs(v.value - 56000) / 56000;
    o.require(rel < 0.05, fmt("value %.2f off by %.2f%%", v.value, 100 * rel));
    if (o.pass) o.detail = fmt("value %.2f, %.2f%% from 56000", v.value, 100 * rel);
    return o;
}

Outcome diligence_dominance() {
    Outcome o;
    std::uint64_t checked = 0;
    for (int n = 2; n <= 8; ++n) {
        auto p = above_bounds(n);
        auto g = make_game({GameKind::PoD, p});
        for (int i = 0; i < n; ++i) {
            const auto r = is_dominant(*g, Action::Diligent, i);
            checked += r.profiles_checked;
            o.require(r.dominant, "n=" + std::to_string(n) + " player " + std::to_string(i) + " not dominant");
        }
        p.reward_bounty = 0.99 * p.cost_execute / phi(p.theta, 1.0 / n);
        auto below = make_game({GameKind::PoD, p});
        const auto r = is_dominant(*below, Action::Diligent, 0);
        o.require(!r.dominant && r.counterexample.has_value(),
                  "n=" + std::to_string(n) + " below the bound: no counterexample");
    }
    if (o.pass) o.detail = "n=2..8 dominant at 1.01x, counterexample at 0.99x; " + std::to_string(checked) + " profiles";
    return o;
}

Outcome pod_nash() {
    Outcome o;
    auto g = make_game({GameKind::PoD, above_bounds(5)});
    const auto s = nash_set(*g);
    o.require(s == std::set<Profile>{Profile(5, Action::Diligent)}, std::to_string(s.size()) + " equilibria");
    if (o.pass) o.detail = "unique: all diligent";
    return o;
}

Outcome lazy_collusion() {
    Outcome o;
    auto p = above_bounds(5);
    p.collusion_deposit = 0;
    p.collusion_deposit = 1.01 * std::max(rhs_of(p, "lc_t1"), rhs_of(p, "lc_t2"));
    auto lc = make_game({GameKind::LC, p});
    for (int i = 0; i < 5; ++i) o.require(is_dominant(*lc, Action::Obey, i).dominant, "obey not dominant");
    auto combined = make_game({GameKind::PoDWithCollusion, p});
    const auto r = find_pure_nash(*combined);
    std::set<Profile> s;
    for (const auto& e : r.equilibria) s.insert(e.profile);
    o.require(s == std::set<Profile>{Profile(5, Action::Diligent), Profile(5, Action::Obey)},
              std::to_string(s.size()) + " equilibria");
    const auto eff = pareto_efficient(*combined, r.equilibria);
    o.require(eff.size() == 1 && r.equilibria[eff[0]].profile == Profile(5, Action::Obey),
              "lazy collusion is not the only efficient equilibrium");
    if (o.pass) o.detail = fmt("t = %.2f; obey dominant; {all diligent, all obey}, all obey efficient", p.collusion_deposit);
    return o;
}

Outcome diligent_collusion() {
    Outcome o;
    int points = 0, empty = 0;
    for (int n = 2; n <= 6; ++n) {
        for (double rc : {1.01, 60000.0}) {
            for (double h : {0.1, 0.9}) {
                for (double offset : {0.01, 1.0, 100.0, 20000.0, 1e6}) {
                    auto p = above_bounds(n);
                    p.reward_challenge = rc;
                    p.total_stake = 1.01 * (p.cost_validate + (n - 1) * rc) * n;
                    p.collusion_rent = h;
                    p.collusion_deposit = std::max(0.0, dc_bound(p)) + offset;
                    GameSpec spec{GameKind::DC, p};
                    spec.dc_mode = DcMode::TableLiteral;
                    auto g = make_game(spec);
                    ++points;
                    const auto r = find_pure_nash(*g);
                    if (r.equilibria.empty()) {
                        ++empty;
                    } else {
                        o.require(false, "n=" + std::to_string(n) + fmt(" R_C=%.2f h=%.1f t=%.2f: ", rc, h,
                                                                       p.collusion_deposit) +
                                             render_profile(r.equilibria.front().profile));
                    }
                }
            }
        }
    }
    o.require(points == 100, std::to_string(points) + " grid points");
    if (o.pass) o.detail = std::to_string(empty) + "/100 grid points with no pure Nash";
    return o;
}

Outcome whistleblower() {
    Outcome o;
    auto p = above_bounds(5);
    p.collusion_deposit = 1.01 * std::max(rhs_of(p, "lc_t1"), rhs_of(p, "lc_t2"));
    p.reward_whistleblower = 1.01 * rhs_of(p, "whistleblower");
    auto g = make_game({GameKind::PoDWithCollusionAndWhistleblower, p});
    const Profile all_obey(5, Action::Obey);
    const auto dev = improving_deviation(*g, all_obey, 0);
    o.require(dev == Action::Report, "all obey is a best response");
    const double ur = payoff_whistleblower(p, 0, WhistleblowerContext::ReportInAllObey);
    const double uo = payoff_lc(p, 0, LcAction::Obey, 5);
    o.require(ur > uo, fmt("report %.2f <= obey %.2f", ur, uo));
    const auto s = nash_set(*g);
    o.require(s == std::set<Profile>{Profile(5, Action::Diligent)}, std::to_string(s.size()) + " equilibria");
    if (o.pass) o.detail = fmt("R_w %.2f; report %.2f > obey %.2f; unique: all diligent", p.reward_whistleblower, ur, uo);
    return o;
}

Scenario load(const char* name) { return load_scenario(scenario(name)); }

Outcome calibration() {
    Outcome o;
    auto s = load("baseline.ini");
    s.epochs = 10000;
    const auto r = run_simulation(s);
    const double ph = phi(s.params.theta, 0.1);
    const double expect = ph * s.params.reward_bounty.units() - s.params.cost_execute.units();
    double worst_rate = 0, worst_mean = 0;
    for (const auto& w : r.watchtowers) {
        o.require(w.alpha == 0.1, "stake is not 0.1");
        const double n = static_cast<double>(w.epochs_active);
        const double rate = static_cast<double>(w.bounties) / n;
        const double zr = (rate - ph) / std::sqrt(ph * (1 - ph) / n);
        const double zm = (w.mean_payoff() - expect) / w.std_error();
        worst_rate = std::max(worst_rate, std::abs(zr));
        worst_mean = std::max(worst_mean, std::abs(zm));
        o.require(std::abs(zr) <= 3, "wt" + std::to_string(w.id) + fmt(" bounty rate %.5f (z=%.2f)", rate, zr));
        o.require(std::abs(zm) <= 3, "wt" + std::to_string(w.id) + fmt(" mean payoff %.5f (z=%.2f)", w.mean_payoff(), zm));
    }
    if (o.pass) o.detail = fmt("10 watchtowers, max |z| rate %.2f, mean %.2f; target mean %.6f", worst_rate, worst_mean, expect);
    return o;
}

Outcome safety() {
    Outcome o;
    auto s = load("lazy-mix.ini");
    s.epochs = 1000;
    s.asserter_fault_rate = 0.3;
    const auto r = run_simulation(s);
    o.require(r.faulty_assertions > 0, "no faulty assertions");
    o.require(r.incorrect_finalized == 0, std::to_string(r.incorrect_finalized) + " incorrect assertions finalized");
    o.require(r.lazy_submissions > 0, "no lazy submissions");
    o.require(r.lazy_slashed == r.lazy_submissions,
              std::to_string(r.lazy_slashed) + "/" + std::to_string(r.lazy_submissions) + " lazy submissions slashed");
    if (o.pass) {
        o.detail = std::to_string(r.faulty_assertions) + " faulty assertions reverted, " +
                   std::to_string(r.lazy_submissions) + " lazy submissions all slashed";
    }
    return o;
}

std::string file_hash(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    const std::string text{std::istreambuf_iterator<char>(in), {}};
    return sha256(std::string_view(text)).hex();
}

Outcome determinism() {
    Outcome o;
    const fs::path root = fs::temp_directory_path() / "pod_acceptance_determinism";
    int same = 0;
    for (const char* name : kScenarios) {
        std::string hashes[2];
        for (int k = 0; k < 2; ++k) {
            const fs::path dir = root / (std::string(name) + "." + std::to_string(k));
            fs::remove_all(dir);
            std::ostringstream out, err;
            const int code = cli::run({"pod", "simulate", "--scenario", scenario(name), "--out", dir.string()}, out, err);
            o.require(code == 0, std::string(name) + ": exit " + std::to_string(code));
            hashes[k] = file_hash(dir / "events.jsonl");
        }
        if (hashes[0] == hashes[1]) {
            ++same;
        } else {
            o.require(false, std::string(name) + ": event logs differ");
        }
    }
    fs::remove_all(root);
    o.require(same >= 5, std::to_string(same) + " scenarios");
    if (o.pass) o.detail = std::to_string(same) + " scenarios with byte-identical events.jsonl";
    return o;
}

Outcome conservation() {
    Outcome o;
    std::uint64_t checks = 0;
    for (const char* name : kScenarios) {
        for (double fault : {-1.0, 0.3}) {
            auto s = load(name);
            if (fault >= 0) s.asserter_fault_rate = fault;
            s.epochs = std::min<std::uint64_t>(s.epochs, 500);
            Engine engine(s);
            for (std::uint64_t e = 0; e < s.epochs; ++e) {
                engine.run_epoch();
                const auto& l = engine.books().ledger();
                ++checks;
                if (!l.conserved()) {
                    o.require(false, std::string(name) + " epoch " + std::to_string(e));
                    break;
                }
            }
        }
    }
    if (o.pass) o.detail = std::to_string(checks) + " epoch checks over 14 runs, exact in micros";
    return o;
}

Outcome crypto_suite() {
    Outcome o;
    Rng rng(2024);
    int merkle_ok = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        std::vector<Bytes> items(1 + rng.below(64));
        for (auto& it : items) {
            it.resize(rng.below(40));
            for (auto& byte : it) byte = static_cast<std::uint8_t>(rng.next_u64());
        }
        const Digest root = merklize(items);
        const std::size_t idx = rng.below(items.size());
        const auto path = merkle_proof(items, idx);
        Bytes tampered = items[idx];
        tampered.push_back(0x01);
        if (verify_merkle_proof(root, items[idx], path) && !verify_merkle_proof(root, tampered, path)) ++merkle_ok;
    }
    o.require(merkle_ok == 1000, std::to_string(merkle_ok) + "/1000 merkle roundtrips");

    KeyRegistry reg(5);
    std::vector<KeyPair> keys;
    for (WatchtowerId i = 0; i < 6; ++i) {
        keys.push_back(generate_keypair(5, i));
        reg.enroll(keys.back());
    }
    int complete = 0, rejected = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        const KeyPair& kp = keys[rng.below(keys.size())];
        const Bytes input = concat(rng.digest(), rng.digest());
        const PoDProof proof = vrf_eval(kp.secret_key, input);
        if (vrf_verify(reg, kp.public_key, proof, input) && vrf_eval(kp.secret_key, input) == proof) ++complete;
        PoDProof m = proof;
        Bytes in2 = input;
        Bytes pk = kp.public_key;
        switch (trial % 4) {
            case 0: m.pi[rng.below(m.pi.size())] ^= 0x10; break;
            case 1: m.d = std::nextafter(m.d, 1.0); break;
            case 2: in2[rng.below(in2.size())] ^= 0x01; break;
            case 3: pk = keys[(kp.id + 1) % keys.size()].public_key; break;
        }
        if (!vrf_verify(reg, pk, m, in2)) ++rejected;
    }
    o.require(complete == 1000, std::to_string(complete) + "/1000 honest proofs verify");
    o.require(rejected == 1000, std::to_string(rejected) + "/1000 mutations rejected");

    constexpr int kN = 10000;
    std::vector<double> d(kN);
    for (int i = 0; i < kN; ++i) d[i] = vrf_eval(keys[0].secret_key, concat(rng.digest(), rng.digest())).d;
    std::sort(d.begin(), d.end());
    double ks = 0;
    for (int i = 0; i < kN; ++i) ks = std::max({ks, (i + 1.0) / kN - d[i], d[i] - static_cast<double>(i) / kN});
    const double crit = 1.6276 / std::sqrt(static_cast<double>(kN));
    o.require(ks < crit, fmt("KS D = %.5f >= %.5f", ks, crit));
    if (o.pass) o.detail = fmt("1000 merkle roundtrips, 1000 mutations rejected, KS D = %.5f < %.5f", ks, crit);
    return o;
}

struct Criterion {
    const char* name;
    double limit_seconds;  // 0: no runtime bound
    std::function<Outcome()> run;
};

}  // namespace

int main() {
    const std::vector<Criterion> criteria = {
        {"parameter bounds", 1, params_reproduction},
        {"secured value", 1, secured_value},
        {"diligence dominance n=2..8", 10, diligence_dominance},
        {"pod pure Nash n=5", 1, pod_nash},
        {"lazy collusion game n=5", 5, lazy_collusion},
        {"diligent collusion grid", 10, diligent_collusion},
        {"whistleblower n=5", 5, whistleblower},
        {"simulation calibration", 60, calibration},
        {"safety", 60, safety},
        {"determinism", 0, determinism},
        {"ledger conservation", 0, conservation},
        {"crypto properties", 0, crypto_suite},
    };
    int failed = 0;
    int k = 0;
    for (const auto& c : criteria) {
        ++k;
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail = std::string("exception: ") + e.what();
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (c.limit_seconds > 0 && secs >= c.limit_seconds) {
            o.require(false, fmt("runtime %.2f s over the %.0f s limit", secs, c.limit_seconds));
        }
        failed += !o.pass;
        std::printf("%s %2d %-28s %7.3f s  %s\n", o.pass ? "PASS" : "FAIL", k, c.name, secs, o.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed;
}
