#include "pod/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "pod/crypto.hpp"

namespace pod {

namespace pt = boost::property_tree;

namespace {

std::string fixed6(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

std::string trim(std::string_view s) {
    auto b = s.find_first_not_of(" \t");
    if (b == std::string_view::npos) return {};
    auto e = s.find_last_not_of(" \t");
    return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_list(std::string_view s) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        auto comma = s.find(',', start);
        out.push_back(trim(s.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start)));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

template <class T>
std::optional<T> parse_number(std::string_view s) {
    T v{};
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size()) return std::nullopt;
    return v;
}

// Reads one section, remembering which keys were consumed so leftovers can
// be reported as unknown.
class Section {
public:
    Section(const pt::ptree* tree, std::string name, std::vector<std::string>& errors)
        : tree_(tree), name_(std::move(name)), errors_(errors) {}

    std::optional<std::string> raw(const std::string& key, bool required) {
        used_.insert(key);
        if (tree_) {
            if (auto v = tree_->get_optional<std::string>(pt::ptree::path_type(key, '\0'))) return trim(*v);
        }
        if (required) errors_.push_back(field(key) + ": required key missing");
        return std::nullopt;
    }

    template <class T>
    void integer(const std::string& key, T& out, bool required = false) {
        auto text = raw(key, required);
        if (!text) return;
        auto v = parse_number<T>(*text);
        if (!v) {
            errors_.push_back(field(key) + ": expected a non-negative integer, got '" + *text + "'");
            return;
        }
        out = *v;
    }

    void real(const std::string& key, double& out, bool required = false) {
        auto text = raw(key, required);
        if (!text) return;
        auto v = parse_number<double>(*text);
        if (!v || !std::isfinite(*v)) {
            errors_.push_back(field(key) + ": expected a number, got '" + *text + "'");
            return;
        }
        out = *v;
    }

    void money(const std::string& key, Micros& out, bool required = false) {
        auto text = raw(key, required);
        if (!text) return;
        try {
            out = Micros::parse(*text);
        } catch (const std::exception&) {
            errors_.push_back(field(key) + ": expected an amount with at most 6 decimals, got '" + *text + "'");
        }
    }

    void boolean(const std::string& key, bool& out) {
        auto text = raw(key, false);
        if (!text) return;
        if (*text == "true") {
            out = true;
        } else if (*text == "false") {
            out = false;
        } else {
            errors_.push_back(field(key) + ": expected true or false, got '" + *text + "'");
        }
    }

    void report_unknown() {
        if (!tree_) return;
        for (const auto& [key, value] : *tree_) {
            if (!used_.count(key)) errors_.push_back(field(key) + ": unknown key");
        }
    }

    std::string field(const std::string& key) const { return name_ + "." + key; }

private:
    const pt::ptree* tree_;
    std::string name_;
    std::vector<std::string>& errors_;
    std::set<std::string> used_;
};

const std::map<std::string, CollusionKind> kCollusionKinds = {
    {"none", CollusionKind::None}, {"lazy", CollusionKind::Lazy}, {"diligent", CollusionKind::Diligent}};

double default_alpha_0(const std::vector<double>& stakes) {
    if (stakes.empty()) return 0.0;
    double m = *std::min_element(stakes.begin(), stakes.end());
    return std::floor(m * 1e6) / 1e6;
}

bool equal_split(const std::vector<double>& stakes) {
    if (stakes.empty()) return false;
    const double e = 1.0 / static_cast<double>(stakes.size());
    return std::all_of(stakes.begin(), stakes.end(), [e](double a) { return a == e; });
}

std::string render_strategies(const std::vector<Strategy>& s) {
    std::string out;
    for (std::size_t i = 0; i < s.size();) {
        std::size_t j = i;
        while (j < s.size() && s[j] == s[i]) ++j;
        if (!out.empty()) out += ", ";
        out += to_string(s[i]);
        if (j - i > 1) out += " x" + std::to_string(j - i);
        i = j;
    }
    return out;
}

}  // namespace

std::string_view to_string(CollusionKind k) {
    switch (k) {
        case CollusionKind::None: return "none";
        case CollusionKind::Lazy: return "lazy";
        case CollusionKind::Diligent: return "diligent";
    }
    return "none";
}

ScenarioError::ScenarioError(std::vector<std::string> errors)
    : std::runtime_error(errors.empty() ? "invalid scenario" : errors.front()), errors_(std::move(errors)) {}

Scenario parse_scenario(std::string_view text) {
    pt::ptree tree;
    try {
        std::istringstream in{std::string(text)};
        pt::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        throw ScenarioError({"syntax: line " + std::to_string(e.line()) + ": " + e.message()});
    }

    std::vector<std::string> errors;
    static const std::set<std::string> kSections = {"collusion",  "params",        "run",     "stakes",
                                                    "strategies", "whistleblower", "workload"};
    for (const auto& [key, child] : tree) {
        if (!kSections.count(key)) {
            errors.push_back(child.empty() ? key + ": key outside any section" : key + ": unknown section");
        }
    }
    auto section = [&](const std::string& name) {
        auto child = tree.get_child_optional(pt::ptree::path_type(name, '\0'));
        return Section(child ? &*child : nullptr, name, errors);
    };

    Scenario s;

    Section run = section("run");
    if (auto name = run.raw("name", false)) s.name = *name;
    run.integer("seed", s.seed, true);
    run.integer("epochs", s.epochs, true);
    run.real("asserter_fault_rate", s.asserter_fault_rate);
    run.boolean("lazy_copies_assertion", s.lazy_copies_assertion);
    if (auto budget = run.raw("operator_budget", false); budget && *budget != "none") {
        try {
            s.operator_budget = Micros::parse(*budget);
        } catch (const std::exception&) {
            errors.push_back("run.operator_budget: expected an amount or none, got '" + *budget + "'");
        }
    }
    run.report_unknown();

    Section params = section("params");
    auto& p = s.params;
    params.integer("n", p.n, true);
    params.real("theta", p.theta, true);
    params.money("total_stake", p.total_stake, true);
    params.money("reward_bounty", p.reward_bounty, true);
    params.money("reward_challenge", p.reward_challenge, true);
    params.money("cost_execute", p.cost_execute, true);
    params.money("cost_validate", p.cost_validate, true);
    std::optional<double> alpha_0;
    if (params.raw("alpha_0", false)) {
        double a = 0.0;
        params.real("alpha_0", a);
        alpha_0 = a;
    }
    params.integer("t1_ticks", p.t1_ticks);
    params.integer("tc_ticks", p.tc_ticks);
    params.integer("tlc_ticks", p.tlc_ticks);
    params.report_unknown();

    Section stakes = section("stakes");
    if (auto alpha = stakes.raw("alpha", true)) {
        if (*alpha == "equal") {
            if (p.n > 0) s.stakes.assign(p.n, 1.0 / p.n);
        } else {
            for (const auto& item : split_list(*alpha)) {
                auto v = parse_number<double>(item);
                if (!v) {
                    errors.push_back("stakes.alpha: expected a number, got '" + item + "'");
                    continue;
                }
                s.stakes.push_back(*v);
            }
        }
    }
    stakes.report_unknown();
    p.alpha_0 = alpha_0 ? *alpha_0 : default_alpha_0(s.stakes);

    Section strategies = section("strategies");
    if (auto tags = strategies.raw("tags", true)) {
        for (const auto& item : split_list(*tags)) {
            std::string tag = item;
            std::uint64_t repeat = 1;
            if (auto x = item.rfind(" x"); x != std::string::npos) {
                tag = trim(std::string_view(item).substr(0, x));
                auto r = parse_number<std::uint64_t>(trim(std::string_view(item).substr(x + 2)));
                if (!r || *r == 0 || *r > 4096) {
                    errors.push_back("strategies.tags: expected '<tag> x<count>', got '" + item + "'");
                    continue;
                }
                repeat = *r;
            }
            auto st = parse_strategy(tag);
            if (!st) {
                errors.push_back("strategies.tags: unknown strategy '" + tag + "'");
                continue;
            }
            s.strategies.insert(s.strategies.end(), repeat, *st);
        }
    }
    strategies.report_unknown();

    Section collusion = section("collusion");
    if (auto kind = collusion.raw("kind", false)) {
        auto it = kCollusionKinds.find(*kind);
        if (it == kCollusionKinds.end()) {
            errors.push_back("collusion.kind: expected none, lazy or diligent, got '" + *kind + "'");
        } else {
            s.collusion = it->second;
        }
    }
    collusion.money("deposit", p.collusion_deposit);
    collusion.money("rent", p.collusion_rent);
    if (auto leader = collusion.raw("leader", false); leader && *leader != "none") {
        if (auto id = parse_number<WatchtowerId>(*leader)) {
            s.collusion_leader = *id;
        } else {
            errors.push_back("collusion.leader: expected a watchtower id or none, got '" + *leader + "'");
        }
    }
    collusion.report_unknown();

    Section wb = section("whistleblower");
    wb.boolean("enabled", s.whistleblower);
    wb.money("reward", p.reward_whistleblower);
    wb.money("deposit", p.whistleblower_deposit);
    wb.report_unknown();

    Section workload = section("workload");
    workload.integer("accounts", s.workload.accounts);
    workload.integer("txs_per_batch", s.workload.txs_per_batch);
    workload.integer("initial_balance", s.workload.initial_balance);
    workload.report_unknown();

    if (errors.empty()) {
        auto more = validate_scenario(s);
        errors.insert(errors.end(), more.begin(), more.end());
    }
    if (!errors.empty()) throw ScenarioError(std::move(errors));
    return s;
}

std::vector<std::string> validate_scenario(const Scenario& s) {
    const auto& p = s.params;
    std::vector<std::string> errors = check_params(p, s.collusion == CollusionKind::Diligent);
    const std::size_t n = p.n;
    if (p.n > 1024) errors.push_back("params.n: expected <= 1024, got " + std::to_string(p.n));
    if (!(p.total_stake > Micros{0})) errors.push_back("params.total_stake: expected > 0, got " + p.total_stake.str());

    if (s.stakes.size() != n) {
        errors.push_back("stakes.alpha: expected " + std::to_string(n) + " entries, got " +
                         std::to_string(s.stakes.size()));
    } else if (n > 0) {
        double sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double a = s.stakes[i];
            sum += a;
            if (!(a > 0.0 && a <= 1.0)) {
                errors.push_back("stakes.alpha[" + std::to_string(i) + "]: expected in (0,1], got " + fixed6(a));
            } else if (a < p.alpha_0 - 1e-12) {
                errors.push_back("stakes.alpha[" + std::to_string(i) + "]: expected >= alpha_0 " + fixed6(p.alpha_0) +
                                 ", got " + fixed6(a));
            }
        }
        if (std::fabs(sum - 1.0) > 1e-12) errors.push_back("stakes: sum " + fixed6(sum) + " ≠ 1 (expected 1 within 1e-12)");
    }

    if (s.strategies.size() != n) {
        errors.push_back("strategies.tags: expected " + std::to_string(n) + " entries, got " +
                         std::to_string(s.strategies.size()));
    }
    int dc_leaders = 0;
    for (std::size_t i = 0; i < s.strategies.size(); ++i) {
        const Strategy st = s.strategies[i];
        const std::string where = "strategies.tags[" + std::to_string(i) + "]";
        if (is_lazy_collusion_member(st) && s.collusion != CollusionKind::Lazy) {
            errors.push_back(where + ": " + std::string(to_string(st)) + " expects collusion.kind lazy, got " +
                             std::string(to_string(s.collusion)));
        }
        if ((is_diligent_collusion_leader(st) || st == Strategy::DcFollower) && s.collusion != CollusionKind::Diligent) {
            errors.push_back(where + ": " + std::string(to_string(st)) + " expects collusion.kind diligent, got " +
                             std::string(to_string(s.collusion)));
        }
        if (st == Strategy::LcReport && !s.whistleblower) {
            errors.push_back(where + ": lc-report expects whistleblower.enabled true, got false");
        }
        if (is_diligent_collusion_leader(st)) ++dc_leaders;
    }
    if (s.collusion == CollusionKind::Diligent && dc_leaders != 1) {
        errors.push_back("strategies.tags: expected exactly 1 dc-leader-* entry, got " + std::to_string(dc_leaders));
    }
    if (s.collusion_leader) {
        const auto id = *s.collusion_leader;
        if (s.collusion != CollusionKind::Lazy) {
            errors.push_back("collusion.leader: only meaningful for kind lazy, got kind " +
                             std::string(to_string(s.collusion)));
        } else if (id >= s.strategies.size() || !is_lazy_collusion_member(s.strategies[id])) {
            errors.push_back("collusion.leader: expected the id of an lc-* watchtower, got " + std::to_string(id));
        }
    }
    if (!(s.asserter_fault_rate >= 0.0 && s.asserter_fault_rate <= 1.0)) {
        errors.push_back("run.asserter_fault_rate: expected in [0,1], got " + fixed6(s.asserter_fault_rate));
    }
    if (s.epochs < 1) errors.push_back("run.epochs: expected >= 1, got 0");
    if (s.operator_budget && *s.operator_budget < Micros{0}) {
        errors.push_back("run.operator_budget: expected >= 0, got " + s.operator_budget->str());
    }
    if (s.workload.accounts < 2) {
        errors.push_back("workload.accounts: expected >= 2, got " + std::to_string(s.workload.accounts));
    }
    if (s.workload.txs_per_batch < 1) {
        errors.push_back("workload.txs_per_batch: expected >= 1, got " + std::to_string(s.workload.txs_per_batch));
    }
    if (s.workload.initial_balance < 1) {
        errors.push_back("workload.initial_balance: expected >= 1, got " + std::to_string(s.workload.initial_balance));
    }
    if (s.name.empty() || s.name.find_first_of("\r\n;[]=") != std::string::npos) {
        errors.push_back("run.name: expected a non-empty single-line name without ; [ ] =, got '" + s.name + "'");
    }
    return errors;
}

std::string render_scenario(const Scenario& s) {
    const auto& p = s.params;
    std::ostringstream out;
    auto kv = [&](const char* key, const std::string& value) { out << key << " = " << value << '\n'; };

    out << "[collusion]\n";
    kv("deposit", p.collusion_deposit.str());
    kv("kind", std::string(to_string(s.collusion)));
    kv("leader", s.collusion_leader ? std::to_string(*s.collusion_leader) : "none");
    kv("rent", p.collusion_rent.str());

    out << "\n[params]\n";
    kv("alpha_0", fixed6(p.alpha_0));
    kv("cost_execute", p.cost_execute.str());
    kv("cost_validate", p.cost_validate.str());
    kv("n", std::to_string(p.n));
    kv("reward_bounty", p.reward_bounty.str());
    kv("reward_challenge", p.reward_challenge.str());
    kv("t1_ticks", std::to_string(p.t1_ticks));
    kv("tc_ticks", std::to_string(p.tc_ticks));
    kv("theta", fixed6(p.theta));
    kv("tlc_ticks", std::to_string(p.tlc_ticks));
    kv("total_stake", p.total_stake.str());

    out << "\n[run]\n";
    kv("asserter_fault_rate", fixed6(s.asserter_fault_rate));
    kv("epochs", std::to_string(s.epochs));
    kv("lazy_copies_assertion", s.lazy_copies_assertion ? "true" : "false");
    kv("name", s.name);
    kv("operator_budget", s.operator_budget ? s.operator_budget->str() : "none");
    kv("seed", std::to_string(s.seed));

    out << "\n[stakes]\n";
    if (equal_split(s.stakes)) {
        kv("alpha", "equal");
    } else {
        std::string list;
        for (double a : s.stakes) list += (list.empty() ? "" : ", ") + fixed6(a);
        kv("alpha", list);
    }

    out << "\n[strategies]\n";
    kv("tags", render_strategies(s.strategies));

    out << "\n[whistleblower]\n";
    kv("deposit", p.whistleblower_deposit.str());
    kv("enabled", s.whistleblower ? "true" : "false");
    kv("reward", p.reward_whistleblower.str());

    out << "\n[workload]\n";
    kv("accounts", std::to_string(s.workload.accounts));
    kv("initial_balance", std::to_string(s.workload.initial_balance));
    kv("txs_per_batch", std::to_string(s.workload.txs_per_batch));
    return out.str();
}

std::string scenario_hash(const Scenario& s) { return sha256(as_bytes(render_scenario(s))).hex(); }

std::optional<std::filesystem::path> resolve_scenario_path(const std::string& path) {
    namespace fs = std::filesystem;
    std::error_code ec;
    if (fs::is_regular_file(path, ec)) return fs::path(path);
    if (fs::path(path).is_absolute()) return std::nullopt;
    const char* env = std::getenv("POD_SCENARIO_PATH");
    if (!env) return std::nullopt;
    std::string_view dirs(env);
    while (!dirs.empty()) {
        auto colon = dirs.find(':');
        std::string_view dir = dirs.substr(0, colon);
        if (!dir.empty()) {
            fs::path candidate = fs::path(dir) / path;
            if (fs::is_regular_file(candidate, ec)) return candidate;
        }
        if (colon == std::string_view::npos) break;
        dirs.remove_prefix(colon + 1);
    }
    return std::nullopt;
}

Scenario load_scenario(const std::string& path) {
    auto resolved = resolve_scenario_path(path);
    if (!resolved) throw ScenarioError({"scenario: file not found: " + path + " (also searched POD_SCENARIO_PATH)"});
    std::ifstream in(*resolved, std::ios::binary);
    if (!in) throw ScenarioError({"scenario: cannot read " + resolved->string()});
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scenario(buf.str());
}

std::vector<Micros> initial_stakes(const Scenario& s) {
    std::vector<Micros> out;
    out.reserve(s.stakes.size());
    for (double a : s.stakes) {
        const long double raw = static_cast<long double>(a) * s.params.total_stake.raw();
        out.emplace_back(static_cast<std::int64_t>(std::floor(raw)));
    }
    return out;
}

}  // namespace pod
