#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "pod/games.hpp"

namespace pod {

inline constexpr int kMaxEnumerationPlayers = 20;
inline constexpr std::uint64_t kMaxEnumerationProfiles = std::uint64_t{1} << 27;

/// Thrown instead of falling back to sampling when a game is too big to
/// enumerate exhaustively.
class EnumerationTooLarge : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// a > b beyond a relative tolerance of 1e-9. phi is irrational, so exact
/// comparison of the closed forms is not available.
bool strictly_greater(double a, double b);

/// Number of pure profiles, or EnumerationTooLarge.
std::uint64_t profile_count(const Game& game);

struct DominanceResult {
    bool dominant = true;
    int player = 0;
    Action action = Action::Diligent;
    std::uint64_t profiles_checked = 0;
    // Set when not dominant: the first failing profile in enumeration order
    // (player plays `action`), the alternative that does at least as well,
    // and both payoffs.
    std::optional<Profile> counterexample;
    Action alternative = Action::Diligent;
    double action_payoff = 0.0;
    double alternative_payoff = 0.0;
};

/// Strict dominance of `action` for `player` against every opponent profile.
DominanceResult is_dominant(const Game& game, Action action, int player);
/// Single-threaded reference that recomputes every payoff from scratch.
DominanceResult is_dominant_serial(const Game& game, Action action, int player);

struct Equilibrium {
    Profile profile;   // realized play
    std::vector<double> payoffs;
};

struct NashResult {
    /// Distinct realized equilibria in first-seen enumeration order.
    std::vector<Equilibrium> equilibria;
    /// Equilibrium profiles before realized-play deduplication.
    std::uint64_t raw_count = 0;
    std::uint64_t profiles_checked = 0;
};

NashResult find_pure_nash(const Game& game);
NashResult find_pure_nash_serial(const Game& game);

/// Would `player` strictly gain by switching away from `profile`? Returns
/// the best strictly improving action.
std::optional<Action> improving_deviation(const Game& game, const Profile& profile, int player);

enum class ParetoScope {
    AmongEquilibria, // compare the equilibria with each other
    Global,          // compare against every admissible profile
};

/// Indices into `equilibria` of the ones nobody Pareto-dominates.
std::vector<std::size_t> pareto_efficient(const Game& game, const std::vector<Equilibrium>& equilibria,
                                          ParetoScope scope = ParetoScope::AmongEquilibria);

/// Weakly better for all, strictly better for someone.
bool pareto_dominates(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace pod
