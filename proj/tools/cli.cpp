#include "cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "pod/conditions.hpp"
#include "pod/engine.hpp"
#include "pod/equilibrium.hpp"
#include "pod/param_calc.hpp"
#include "pod/scenario.hpp"

namespace pod::cli {

namespace fs = std::filesystem;
using nlohmann::json;

const char* version() { return POD_VERSION; }

namespace {

struct Failure {
    int code;
    std::string message;
};

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

void write_file(const fs::path& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Failure{kRuntime, "cannot write " + path.string()};
    f << text;
    if (!f) throw Failure{kRuntime, "write failed: " + path.string()};
}

void make_out_dir(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) throw Failure{kRuntime, "cannot create output directory " + dir.string()};
}

struct Manifest {
    std::string command;
    std::optional<std::string> scenario_hash;
    std::optional<std::uint64_t> seed;
    std::vector<std::pair<std::string, std::string>> artifacts;  // role, file name
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    std::string status = "ok";

    std::string render() const {
        json j;
        j["command"] = command;
        j["scenario_hash"] = scenario_hash ? json(*scenario_hash) : json();
        j["seed"] = seed ? json(*seed) : json();
        j["tool_version"] = version();
        j["status"] = status;
        json a = json::object();
        for (const auto& [role, file] : artifacts) a[role] = file;
        j["artifacts"] = a;
        j["wall_clock_seconds"] =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        return j.dump(2) + "\n";
    }
};

std::string join_args(const std::vector<std::string>& args) {
    std::string s;
    for (const auto& a : args) s += (s.empty() ? "" : " ") + a;
    return s;
}

Scenario load_or_fail(const std::string& path) {
    try {
        return load_scenario(path);
    } catch (const ScenarioError& e) {
        std::string msg = "scenario " + path + ":";
        for (const auto& line : e.errors()) msg += "\n  " + line;
        throw Failure{kValidation, msg};
    }
}

// --- simulate -------------------------------------------------------------

struct SimulateArgs {
    std::string scenario;
    std::string out;
    bool serial = false;
    std::optional<std::uint64_t> seed;
    std::optional<std::uint64_t> epochs;
};

int cmd_simulate(const SimulateArgs& a, const std::string& command, std::ostream& out) {
    Manifest m;
    m.command = command;
    Scenario s = load_or_fail(a.scenario);
    if (a.seed) s.seed = *a.seed;
    if (a.epochs) s.epochs = *a.epochs;
    if (auto errors = validate_scenario(s); !errors.empty()) {
        std::string msg = "scenario " + a.scenario + " after overrides:";
        for (const auto& line : errors) msg += "\n  " + line;
        throw Failure{kValidation, msg};
    }
    m.scenario_hash = scenario_hash(s);
    m.seed = s.seed;

    const fs::path dir(a.out);
    make_out_dir(dir);
    write_file(dir / "scenario.canonical.ini", render_scenario(s));
    m.artifacts.emplace_back("scenario", "scenario.canonical.ini");

    std::ofstream events(dir / "events.jsonl", std::ios::binary);
    if (!events) throw Failure{kRuntime, "cannot write " + (dir / "events.jsonl").string()};
    m.artifacts.emplace_back("event_log", "events.jsonl");

    SimulationOptions opt;
    opt.serial = a.serial;
    opt.events_out = &events;
    int code = kOk;
    std::string failure;
    Engine engine(s, opt);
    try {
        for (std::uint64_t e = 0; e < s.epochs; ++e) engine.run_epoch();
    } catch (const InsolventError& e) {
        code = kRuntime;
        failure = std::string("insolvent: ") + e.what();
        m.status = "insolvent";
    }
    events.close();

    const SimulationReport rep = engine.report();
    const std::string text = render_report_text(rep);
    write_file(dir / "summary.json", render_report_json(rep));
    write_file(dir / "summary.txt", text);
    m.artifacts.emplace_back("summary_json", "summary.json");
    m.artifacts.emplace_back("summary_text", "summary.txt");
    write_file(dir / "manifest.json", m.render());
    out << text;
    if (code != kOk) throw Failure{code, failure};
    return kOk;
}

// --- analyze --------------------------------------------------------------

struct AnalyzeArgs {
    std::string scenario;
    std::string out;
    std::string game;
    std::string dc_mode = "table-literal";
    std::string pareto = "among";
    bool no_abstain = false;
};

json profile_json(const Profile& p) { return render_profile(p); }

int cmd_analyze(const AnalyzeArgs& a, const std::string& command, std::ostream& out) {
    Manifest m;
    m.command = command;
    const Scenario s = load_or_fail(a.scenario);
    m.scenario_hash = scenario_hash(s);
    m.seed = s.seed;

    GameSpec spec;
    if (a.game.empty()) {
        spec.kind = s.collusion == CollusionKind::Diligent ? GameKind::DC
                    : s.collusion == CollusionKind::Lazy
                        ? (s.whistleblower ? GameKind::PoDWithCollusionAndWhistleblower : GameKind::PoDWithCollusion)
                        : GameKind::PoD;
    } else if (auto k = parse_game_kind(a.game)) {
        spec.kind = *k;
    } else {
        throw Failure{kValidation, "--game: unknown game '" + a.game +
                                       "' (expected pod, lc, dc, pod-collusion or pod-collusion-wb)"};
    }
    spec.dc_mode = a.dc_mode == "proof-narrative" ? DcMode::ProofNarrative : DcMode::TableLiteral;
    spec.pod_abstain = !a.no_abstain;
    spec.params = economic_view(s.params, s.stakes);
    const ParetoScope scope = a.pareto == "global" ? ParetoScope::Global : ParetoScope::AmongEquilibria;

    const auto game = make_game(spec);
    try {
        (void)profile_count(*game);
    } catch (const EnumerationTooLarge& e) {
        throw Failure{kTooLarge, std::string(e.what()) + " (limit: " + std::to_string(kMaxEnumerationPlayers) +
                                     " players, " + std::to_string(kMaxEnumerationProfiles) + " profiles)"};
    }

    std::ostringstream txt;
    json j;
    j["game"] = std::string(to_string(spec.kind));
    j["players"] = game->players();
    j["dc_mode"] = a.dc_mode;
    j["pod_abstain"] = spec.pod_abstain;
    j["profiles"] = profile_count(*game);
    txt << "game " << to_string(spec.kind) << ", " << game->players() << " players, " << profile_count(*game)
        << " profiles\n\nconditions\n";

    json conds = json::array();
    for (const auto& c : check_conditions(spec.params)) {
        conds.push_back({{"name", c.name}, {"formula", c.formula}, {"lhs", c.lhs}, {"rhs", c.rhs},
                         {"slack", c.slack}, {"holds", c.holds}});
        char line[256];
        std::snprintf(line, sizeof line, "  %-14s %-5s lhs %16.6f  rhs %16.6f  %s\n", c.name.c_str(),
                      c.holds ? "ok" : "FAIL", c.lhs, c.rhs, c.formula.c_str());
        txt << line;
    }
    j["conditions"] = conds;

    txt << "\ndominance\n";
    json dom = json::array();
    for (int i = 0; i < game->players(); ++i) {
        json row;
        row["player"] = i;
        std::optional<Action> dominant;
        json witnesses = json::array();
        for (Action act : game->actions(i)) {
            const DominanceResult r = is_dominant(*game, act, i);
            if (r.dominant) {
                dominant = act;
                continue;
            }
            witnesses.push_back({{"action", std::string(action_name(act))},
                                 {"profile", profile_json(*r.counterexample)},
                                 {"alternative", std::string(action_name(r.alternative))},
                                 {"action_payoff", r.action_payoff},
                                 {"alternative_payoff", r.alternative_payoff}});
        }
        row["strictly_dominant"] = dominant ? json(std::string(action_name(*dominant))) : json();
        row["witnesses"] = witnesses;
        txt << "  player " << i << ": "
            << (dominant ? "strictly dominant " + std::string(action_name(*dominant)) : std::string("none")) << "\n";
        for (const auto& w : witnesses) {
            txt << "    " << w["action"].get<std::string>() << " fails at " << w["profile"].get<std::string>()
                << ": " << w["alternative"].get<std::string>() << " "
                << fmt("%.6f", w["alternative_payoff"].get<double>()) << " >= "
                << fmt("%.6f", w["action_payoff"].get<double>()) << "\n";
        }
        dom.push_back(std::move(row));
    }
    j["dominance"] = dom;

    const NashResult nash = find_pure_nash(*game);
    const auto efficient = pareto_efficient(*game, nash.equilibria, scope);
    json eqs = json::array();
    for (std::size_t k = 0; k < nash.equilibria.size(); ++k) {
        const auto& e = nash.equilibria[k];
        const bool pe = std::find(efficient.begin(), efficient.end(), k) != efficient.end();
        eqs.push_back({{"profile", render_profile(e.profile)},
                       {"description", describe_profile(e.profile)},
                       {"payoffs", e.payoffs},
                       {"pareto_efficient", pe}});
    }
    j["nash"] = {{"equilibria", eqs}, {"raw_count", nash.raw_count}, {"profiles_checked", nash.profiles_checked}};
    j["pareto_scope"] = a.pareto;

    txt << "\n";
    if (nash.equilibria.empty()) {
        txt << "no pure Nash equilibrium\n";
    } else if (nash.equilibria.size() == 1) {
        txt << "unique pure Nash: " << describe_profile(nash.equilibria[0].profile) << "\n";
    } else {
        txt << nash.equilibria.size() << " pure Nash equilibria\n";
    }
    for (const auto& e : eqs) {
        txt << "  " << e["profile"].get<std::string>() << "  (" << e["description"].get<std::string>() << ")"
            << (e["pareto_efficient"].get<bool>() ? "  pareto-efficient" : "") << "\n";
    }

    const fs::path dir(a.out);
    make_out_dir(dir);
    write_file(dir / "analysis.json", j.dump(2) + "\n");
    write_file(dir / "analysis.txt", txt.str());
    m.artifacts.emplace_back("analysis_json", "analysis.json");
    m.artifacts.emplace_back("analysis_text", "analysis.txt");
    write_file(dir / "manifest.json", m.render());
    out << txt.str();
    return kOk;
}

// --- params ---------------------------------------------------------------

struct ParamsArgs {
    BoundsInput bounds;
    std::string stakes;
    SecuredValueInput secured;
    std::string out;
};

std::vector<double> parse_stake_list(const std::string& text) {
    std::vector<double> v;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            v.push_back(std::stod(item, &used));
            if (item.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw Failure{kValidation, "--stakes: '" + item + "' is not a number"};
        }
    }
    return v;
}

int cmd_params(ParamsArgs a, const std::string& command, std::ostream& out) {
    Manifest m;
    m.command = command;
    if (!a.stakes.empty()) a.bounds.stakes = parse_stake_list(a.stakes);
    ParamReport r;
    SecuredValue sv;
    try {
        r = compute_bounds(a.bounds);
        sv = secured_value_estimate(a.secured);
    } catch (const std::invalid_argument& e) {
        throw Failure{kValidation, e.what()};
    } catch (const std::domain_error& e) {
        throw Failure{kValidation, e.what()};
    }

    auto bound = [](double v) { return std::isfinite(v) ? json(v) : json("diverges"); };
    json j;
    j["inputs"] = {{"n", r.n}, {"theta", r.theta}, {"c_T", a.bounds.cost_execute}, {"c_V", a.bounds.cost_validate},
                   {"R_B", r.R_B_used}, {"R_C", r.R_C_used}, {"alpha_0", r.alpha_0}};
    j["phi_unit"] = r.phi_unit;
    j["R_B_min"] = bound(r.R_B_min);
    j["R_B_min_ceil"] = bound(r.R_B_min_ceil);
    j["R_B_suggested"] = bound(r.R_B_min * 1.01);
    j["R_C_min"] = r.R_C_min;
    j["min_stake"] = bound(r.min_stake);
    j["t1_min"] = bound(r.t1_min);
    j["t2_min"] = bound(r.t2_min);
    j["t_min"] = bound(r.t_min);
    j["t_min_ceil"] = bound(std::ceil(r.t_min));
    j["R_w_min"] = bound(r.R_w_min);
    j["R_w_min_ceil"] = bound(std::ceil(r.R_w_min));
    j["per_batch_reward"] = bound(r.per_batch_reward);
    j["diagnostics"] = r.diagnostics;
    j["secured_value"] = {{"fee_per_tx", a.secured.fee_per_tx},
                          {"batch_size", a.secured.batch_size},
                          {"reward_margin", a.secured.reward_margin},
                          {"phi", a.secured.phi},
                          {"batches_per_year", a.secured.batches_per_year},
                          {"apy", a.secured.apy},
                          {"c_T", sv.cost_execute},
                          {"c_V", sv.cost_validate},
                          {"annual_reward", sv.annual_reward},
                          {"value", sv.value},
                          {"positive", sv.positive}};

    std::ostringstream t;
    char line[256];
    auto row = [&](const char* name, double v, const char* note) {
        if (std::isfinite(v)) {
            std::snprintf(line, sizeof line, "  %-22s %18.6f   %s\n", name, v, note);
        } else {
            std::snprintf(line, sizeof line, "  %-22s %18s   %s\n", name, "diverges", note);
        }
        t << line;
    };
    std::snprintf(line, sizeof line, "n=%d theta=%.6f c_T=%.6f c_V=%.6f R_C=%.6f R_B=%.6f alpha_0=%.6f\n\n", r.n,
                  r.theta, a.bounds.cost_execute, a.bounds.cost_validate, r.R_C_used, r.R_B_used, r.alpha_0);
    t << line;
    row("phi(alpha_0)", r.phi_unit, "");
    row("R_B  >", r.R_B_min, ("ceil " + fmt("%.0f", r.R_B_min_ceil) + ", suggested " +
                              fmt("%.6f", r.R_B_min * 1.01)).c_str());
    row("R_C  >=", r.R_C_min, "");
    row("alpha_0*S >=", r.min_stake, "");
    row("t  > (t1)", r.t1_min, "");
    row("t  > (t2)", r.t2_min, "");
    row("t  >", r.t_min, ("ceil " + fmt("%.0f", std::ceil(r.t_min))).c_str());
    row("R_w  >", r.R_w_min, ("ceil " + fmt("%.0f", std::ceil(r.R_w_min))).c_str());
    row("bounty spend / batch", r.per_batch_reward, "");
    for (const auto& d : r.diagnostics) t << "  note: " << d << "\n";
    t << "\nsecured value: fee " << fmt("%.6f", a.secured.fee_per_tx) << ", batch "
      << fmt("%.0f", a.secured.batch_size) << ", margin " << fmt("%.6f", a.secured.reward_margin) << ", phi "
      << fmt("%.6f", a.secured.phi) << ", " << fmt("%.0f", a.secured.batches_per_year) << " batches/yr, apy "
      << fmt("%.6f", a.secured.apy) << "\n";
    row("c_T", sv.cost_execute, "");
    row("c_V", sv.cost_validate, "");
    row("annual reward", sv.annual_reward, "");
    row("value secured", sv.value, sv.positive ? "" : "cannot secure positive value");

    if (!a.out.empty()) {
        const fs::path dir(a.out);
        make_out_dir(dir);
        write_file(dir / "params.json", j.dump(2) + "\n");
        write_file(dir / "params.txt", t.str());
        m.artifacts.emplace_back("params_json", "params.json");
        m.artifacts.emplace_back("params_text", "params.txt");
        write_file(dir / "manifest.json", m.render());
    }
    out << t.str();
    return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Proof-of-Diligence watchtower simulator and game analysis"};
    app.set_version_flag("--version", std::string(version()));
    app.require_subcommand(1);

    SimulateArgs sim;
    auto* simulate = app.add_subcommand("simulate", "Run a scenario epoch by epoch and write its event log");
    simulate->add_option("--scenario", sim.scenario, "Scenario file (searched in POD_SCENARIO_PATH)")->required();
    simulate->add_option("--out", sim.out, "Output directory")->required();
    simulate->add_flag("--serial", sim.serial, "Evaluate watchtowers on one thread");
    simulate->add_option("--seed", sim.seed, "Override the scenario seed");
    simulate->add_option("--epochs", sim.epochs, "Override the number of epochs");

    AnalyzeArgs an;
    auto* analyze = app.add_subcommand("analyze", "Conditions, dominance, pure Nash equilibria and Pareto efficiency");
    analyze->add_option("--scenario", an.scenario, "Scenario file (searched in POD_SCENARIO_PATH)")->required();
    analyze->add_option("--out", an.out, "Output directory")->required();
    analyze->add_option("--game", an.game,
                        "pod, lc, dc, pod-collusion or pod-collusion-wb; default follows the scenario's collusion")
        ->check(CLI::IsMember({"pod", "lc", "dc", "pod-collusion", "pod-collusion-wb"}));
    analyze->add_option("--dc-mode", an.dc_mode, "dc payoffs: table-literal or proof-narrative")
        ->check(CLI::IsMember({"table-literal", "proof-narrative"}))
        ->capture_default_str();
    analyze->add_option("--pareto", an.pareto, "Pareto comparison set: among (equilibria) or global")
        ->check(CLI::IsMember({"among", "global"}))
        ->capture_default_str();
    analyze->add_flag("--no-abstain", an.no_abstain, "Drop the non-participation action from the pod game");

    ParamsArgs pa;
    auto* params = app.add_subcommand("params", "Parameter bounds and secured-value estimate");
    params->add_option("--n", pa.bounds.n, "Number of watchtowers")->capture_default_str();
    params->add_option("--theta", pa.bounds.theta, "Bounty difficulty, in (0,1)")->capture_default_str();
    params->add_option("--c-t", pa.bounds.cost_execute, "Execution cost c_T")->capture_default_str();
    params->add_option("--c-v", pa.bounds.cost_validate, "Dispute validation cost c_V")->capture_default_str();
    params->add_option("--r-c", pa.bounds.reward_challenge, "Challenge reward R_C (default c_T)");
    params->add_option("--r-b", pa.bounds.reward_bounty, "Bounty R_B (default ceil of its bound)");
    params->add_option("--stakes", pa.stakes, "Comma-separated relative stakes (default equal)");
    params->add_option("--fee", pa.secured.fee_per_tx, "L1 fee per transaction")->capture_default_str();
    params->add_option("--batch", pa.secured.batch_size, "Transactions per batch")->capture_default_str();
    params->add_option("--margin", pa.secured.reward_margin, "Bounty margin over c_T")->capture_default_str();
    params->add_option("--phi", pa.secured.phi, "Bounty probability")->capture_default_str();
    params->add_option("--batches-per-year", pa.secured.batches_per_year, "Batches per year")->capture_default_str();
    params->add_option("--apy", pa.secured.apy, "Required annual yield")->capture_default_str();
    params->add_option("--out", pa.out, "Optional output directory for params.json and a manifest");

    std::vector<std::string> argv_rev(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
    try {
        app.parse(argv_rev);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            app.exit(e, out, err);
            return kOk;
        }
        err << "error: " << e.what() << "\n";
        return kValidation;
    }

    const std::string command = join_args(args);
    try {
        if (*simulate) return cmd_simulate(sim, command, out);
        if (*analyze) return cmd_analyze(an, command, out);
        return cmd_params(pa, command, out);
    } catch (const Failure& f) {
        err << "error: " << f.message << "\n";
        return f.code;
    } catch (const ScenarioError& e) {
        err << "error: scenario:";
        for (const auto& line : e.errors()) err << "\n  " << line;
        err << "\n";
        return kValidation;
    } catch (const EnumerationTooLarge& e) {
        err << "error: " << e.what() << "\n";
        return kTooLarge;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return kValidation;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kRuntime;
    }
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    return run(std::vector<std::string>(argv, argv + argc), out, err);
}

}  // namespace pod::cli
