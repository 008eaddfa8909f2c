#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pod/payoffs.hpp"

namespace pod {

enum class GameKind { PoD, LC, DC, PoDWithCollusion, PoDWithCollusionAndWhistleblower };

std::string_view to_string(GameKind k);
std::optional<GameKind> parse_game_kind(std::string_view name);

/// Every action that appears in some game. In the combined games Obey,
/// Betray and Report mean "join the lazy collusion, then obey / betray /
/// blow the whistle".
enum class Action : std::uint8_t {
    Diligent,
    Lazy,
    Abstain,
    Obey,
    Betray,
    Report,
    Cheat,
    Join,
    Independent,
};
inline constexpr std::size_t kActionCount = 9;

char action_code(Action a);
std::string_view action_name(Action a);

using Profile = std::vector<Action>;
/// Number of players taking each action, indexed by Action.
using ActionCounts = std::array<int, kActionCount>;

ActionCounts count_actions(const Profile& profile);
std::string render_profile(const Profile& profile);
/// "all diligent", "all obey", or the per-player codes when mixed.
std::string describe_profile(const Profile& profile);

/// A finite game where each payoff depends on the player, its own action and
/// how many players take each action. That covers every game here: stakes
/// make players distinguishable, the rules themselves are anonymous.
class Game {
public:
    virtual ~Game() = default;

    virtual GameKind kind() const = 0;
    int players() const { return params_.n; }
    const EconomicParams& params() const { return params_; }

    virtual std::span<const Action> actions(int player) const = 0;

    /// Actions `player` may take as an opponent in a dominance check. The
    /// non-participation option is an outside option of the checked player
    /// only, so it is left out here.
    virtual std::span<const Action> opponent_actions(int player) const { return actions(player); }

    /// Payoff of `player` playing `own` when the full profile (own action
    /// included) has `counts`.
    virtual double payoff(int player, Action own, const ActionCounts& counts) const = 0;

    /// Profiles outside the game's own profile space are never reported as
    /// equilibria but remain valid deviation targets.
    virtual bool admissible(const ActionCounts&) const { return true; }

    /// Canonical realized play: strategically void choices (joining a
    /// collusion that never forms) are mapped to what the player actually
    /// does.
    virtual Profile realize(const Profile& profile) const { return profile; }

    std::vector<double> payoffs(const Profile& profile) const;

protected:
    explicit Game(EconomicParams params) : params_(std::move(params)) {}

    EconomicParams params_;
};

struct GameSpec {
    GameKind kind = GameKind::PoD;
    EconomicParams params;
    DcMode dc_mode = DcMode::TableLiteral;
    /// Adds the non-participation action (payoff 0) to the PoD game so the
    /// participation constraint on R_B is part of the dominance check.
    bool pod_abstain = true;
};

std::unique_ptr<Game> make_game(const GameSpec& spec);

}  // namespace pod
