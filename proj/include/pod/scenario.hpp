#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "pod/params.hpp"
#include "pod/state_machine.hpp"
#include "pod/watchtower.hpp"

namespace pod {

enum class CollusionKind { None, Lazy, Diligent };

std::string_view to_string(CollusionKind k);

struct Scenario {
    std::string name = "unnamed";
    ProtocolParams params;
    std::vector<double> stakes;
    std::vector<Strategy> strategies;
    CollusionKind collusion = CollusionKind::None;
    /// Lazy collusion: the member that releases the shared root. Defaults to
    /// the lowest-id member. Diligent collusion always uses the dc-leader.
    std::optional<WatchtowerId> collusion_leader;
    bool whistleblower = false;
    double asserter_fault_rate = 0.0;
    std::uint64_t epochs = 1;
    std::uint64_t seed = 0;
    bool lazy_copies_assertion = false;
    std::optional<Micros> operator_budget;
    WorkloadShape workload;

    bool operator==(const Scenario&) const = default;
};

/// Carries every problem found, not just the first.
class ScenarioError : public std::runtime_error {
public:
    explicit ScenarioError(std::vector<std::string> errors);
    const std::vector<std::string>& errors() const { return errors_; }

private:
    std::vector<std::string> errors_;
};

/// Parses the sectioned key = value format described in docs/scenario.md.
/// Throws ScenarioError listing every syntax and validation problem.
Scenario parse_scenario(std::string_view text);

/// Canonical text: sections and keys sorted, decimals fixed to six places,
/// every key written out. parse_scenario(render_scenario(s)) == s for any
/// valid s whose reals have at most six decimals.
std::string render_scenario(const Scenario& s);

/// Invariant violations of an in-memory scenario; empty when valid.
std::vector<std::string> validate_scenario(const Scenario& s);

/// Hex SHA-256 of the canonical rendering.
std::string scenario_hash(const Scenario& s);

/// Resolves a scenario path: as given if it exists, else each directory of
/// the colon-separated POD_SCENARIO_PATH in turn.
std::optional<std::filesystem::path> resolve_scenario_path(const std::string& path);

/// Reads, resolves and parses. Missing files are reported as ScenarioError.
Scenario load_scenario(const std::string& path);

/// Initial stake of each watchtower in micros: floor(alpha_i * S).
std::vector<Micros> initial_stakes(const Scenario& s);

}  // namespace pod
