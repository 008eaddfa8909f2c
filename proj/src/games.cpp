#include "pod/games.hpp"

#include <stdexcept>

namespace pod {

namespace {

constexpr int idx(Action a) { return static_cast<int>(a); }

class PodGame final : public Game {
public:
    PodGame(EconomicParams p, bool abstain) : Game(std::move(p)), abstain_(abstain) {}

    GameKind kind() const override { return GameKind::PoD; }

    std::span<const Action> actions(int) const override {
        static constexpr Action kWith[] = {Action::Diligent, Action::Lazy, Action::Abstain};
        return abstain_ ? std::span<const Action>(kWith) : std::span<const Action>(kWith, 2);
    }

    std::span<const Action> opponent_actions(int player) const override { return actions(player).first(2); }

    double payoff(int player, Action own, const ActionCounts& c) const override {
        switch (own) {
            // Abstainers submit nothing, so the challenge reward needs a lazy peer.
            case Action::Diligent: return payoff_pod(params_, player, PodAction::Diligent, params_.n - c[idx(Action::Lazy)]);
            case Action::Lazy: return payoff_pod(params_, player, PodAction::Lazy, c[idx(Action::Diligent)]);
            case Action::Abstain: return 0.0;
            default: throw std::invalid_argument("pod game: foreign action");
        }
    }

private:
    bool abstain_;
};

class LcGame final : public Game {
public:
    explicit LcGame(EconomicParams p) : Game(std::move(p)) {}

    GameKind kind() const override { return GameKind::LC; }

    std::span<const Action> actions(int) const override {
        static constexpr Action kActs[] = {Action::Obey, Action::Betray};
        return kActs;
    }

    double payoff(int player, Action own, const ActionCounts& c) const override {
        const int n_o = c[idx(Action::Obey)];
        if (own == Action::Obey) return payoff_lc(params_, player, LcAction::Obey, n_o);
        if (own == Action::Betray) return payoff_lc(params_, player, LcAction::Betray, n_o);
        throw std::invalid_argument("lc game: foreign action");
    }
};

/// Player 0 leads and picks obey/betray/cheat; everyone else joins or stays
/// independent. Profiles without any joiner are not part of the game but are
/// reachable by deviation: the collusion dissolves and play falls back to
/// the PoD game, with a cheating leader acting lazily.
class DcGame final : public Game {
public:
    DcGame(EconomicParams p, DcMode mode) : Game(std::move(p)), mode_(mode) {}

    GameKind kind() const override { return GameKind::DC; }

    std::span<const Action> actions(int player) const override {
        static constexpr Action kLeader[] = {Action::Obey, Action::Betray, Action::Cheat};
        static constexpr Action kFollower[] = {Action::Join, Action::Independent};
        return player == 0 ? std::span<const Action>(kLeader) : std::span<const Action>(kFollower);
    }

    bool admissible(const ActionCounts& c) const override { return c[idx(Action::Join)] >= 1; }

    double payoff(int player, Action own, const ActionCounts& c) const override {
        const int n = params_.n;
        DcLeaderAction lead = leader_action(c);
        const int joiners = c[idx(Action::Join)];

        if (joiners == 0) {
            const bool leader_lazy = lead == DcLeaderAction::Cheat;
            if (player == 0) {
                return leader_lazy ? payoff_pod(params_, 0, PodAction::Lazy, n - 1)
                                   : payoff_pod(params_, 0, PodAction::Diligent, n);
            }
            return payoff_pod(params_, player, PodAction::Diligent, leader_lazy ? n - 1 : n);
        }

        const int n_C = 1 + joiners;
        const bool all_join = n_C == n;
        if (player == 0) return payoff_dc(params_, 0, DcRole::Leader, lead, n_C, all_join, mode_);
        if (own == Action::Join) return payoff_dc(params_, player, DcRole::Follower, lead, n_C, all_join, mode_);

        // Independent diligent watchtower next to the collusion.
        const double base = payoff_pod(params_, player, PodAction::Diligent, n);
        switch (lead) {
            case DcLeaderAction::Obey: return base;
            case DcLeaderAction::Betray:
                return base + params_.reward_challenge - params_.cost_validate / (n - n_C + 1);
            case DcLeaderAction::Cheat: return payoff_pod(params_, player, PodAction::Diligent, n - n_C);
        }
        throw std::logic_error("dc game: unreachable");
    }

private:
    static DcLeaderAction leader_action(const ActionCounts& c) {
        if (c[idx(Action::Obey)]) return DcLeaderAction::Obey;
        if (c[idx(Action::Betray)]) return DcLeaderAction::Betray;
        if (c[idx(Action::Cheat)]) return DcLeaderAction::Cheat;
        throw std::invalid_argument("dc game: profile without a leader action");
    }

    DcMode mode_;
};

/// PoD game extended with joining a lazy collusion (obey / betray) and
/// optionally reporting it. The collusion forms only when all n join; when
/// it does not, joiners are refunded and play diligently.
class CollusionGame final : public Game {
public:
    CollusionGame(EconomicParams p, bool whistleblower) : Game(std::move(p)), whistleblower_(whistleblower) {}

    GameKind kind() const override {
        return whistleblower_ ? GameKind::PoDWithCollusionAndWhistleblower : GameKind::PoDWithCollusion;
    }

    std::span<const Action> actions(int) const override {
        static constexpr Action kActs[] = {Action::Diligent, Action::Lazy, Action::Obey, Action::Betray, Action::Report};
        return whistleblower_ ? std::span<const Action>(kActs) : std::span<const Action>(kActs, 4);
    }

    double payoff(int player, Action own, const ActionCounts& c) const override {
        const int n = params_.n;
        const int n_o = c[idx(Action::Obey)];
        const int n_b = c[idx(Action::Betray)];
        const int n_r = c[idx(Action::Report)];
        const bool formed = n_o + n_b + n_r == n;

        if (!formed) {
            const int n_l = c[idx(Action::Lazy)];
            if (own == Action::Lazy) return payoff_pod(params_, player, PodAction::Lazy, n - n_l);
            return payoff_pod(params_, player, PodAction::Diligent, n - n_l);
        }

        if (n_r == 0) {
            return own == Action::Obey ? payoff_lc(params_, player, LcAction::Obey, n_o)
                                       : payoff_lc(params_, player, LcAction::Betray, n_o);
        }

        // Exposed collusion. Reporters follow the shared root like obeyers;
        // the first report (uniform among reporters) is paid.
        const double t = params_.collusion_deposit;
        const int loyal = n_o + n_r;
        const double loyal_payoff = -params_.expected_slash(player) + static_cast<double>(n - loyal) * t / loyal;
        switch (own) {
            case Action::Obey: return loyal_payoff;
            case Action::Report:
                return loyal_payoff - params_.cost_validate / n_r + params_.reward_challenge - params_.cost_execute +
                       params_.reward_whistleblower / n_r;
            case Action::Betray:
                return params_.phi_of(player) * params_.reward_bounty + params_.reward_challenge -
                       params_.cost_execute - t;
            default: throw std::invalid_argument("collusion game: foreign action in formed collusion");
        }
    }

    Profile realize(const Profile& profile) const override {
        for (Action a : profile) {
            if (a == Action::Diligent || a == Action::Lazy) {
                Profile out = profile;
                for (Action& x : out) {
                    if (x == Action::Obey || x == Action::Betray || x == Action::Report) x = Action::Diligent;
                }
                return out;
            }
        }
        return profile;
    }

private:
    bool whistleblower_;
};

}  // namespace

std::string_view to_string(GameKind k) {
    switch (k) {
        case GameKind::PoD: return "pod";
        case GameKind::LC: return "lc";
        case GameKind::DC: return "dc";
        case GameKind::PoDWithCollusion: return "pod-collusion";
        case GameKind::PoDWithCollusionAndWhistleblower: return "pod-collusion-wb";
    }
    return "unknown";
}

std::optional<GameKind> parse_game_kind(std::string_view name) {
    for (GameKind k : {GameKind::PoD, GameKind::LC, GameKind::DC, GameKind::PoDWithCollusion,
                       GameKind::PoDWithCollusionAndWhistleblower}) {
        if (to_string(k) == name) return k;
    }
    return std::nullopt;
}

char action_code(Action a) {
    static constexpr char kCodes[kActionCount] = {'d', 'l', 'a', 'o', 'b', 'r', 'c', 'j', 'i'};
    return kCodes[idx(a)];
}

std::string_view action_name(Action a) {
    static constexpr std::string_view kNames[kActionCount] = {"diligent", "lazy",  "abstain", "obey",       "betray",
                                                              "report",   "cheat", "join",    "independent"};
    return kNames[idx(a)];
}

ActionCounts count_actions(const Profile& profile) {
    ActionCounts c{};
    for (Action a : profile) ++c[idx(a)];
    return c;
}

std::string render_profile(const Profile& profile) {
    std::string out;
    for (Action a : profile) out.push_back(action_code(a));
    return out;
}

std::string describe_profile(const Profile& profile) {
    if (profile.empty()) return "empty";
    for (Action a : profile) {
        if (a != profile.front()) return render_profile(profile);
    }
    return "all " + std::string(action_name(profile.front()));
}

std::vector<double> Game::payoffs(const Profile& profile) const {
    if (static_cast<int>(profile.size()) != players()) throw std::invalid_argument("profile size mismatch");
    ActionCounts c = count_actions(profile);
    std::vector<double> out(profile.size());
    for (std::size_t i = 0; i < profile.size(); ++i) out[i] = payoff(static_cast<int>(i), profile[i], c);
    return out;
}

std::unique_ptr<Game> make_game(const GameSpec& spec) {
    const auto& p = spec.params;
    if (p.n < 2) throw std::invalid_argument("game: n must be >= 2");
    if (static_cast<int>(p.stakes.size()) != p.n) throw std::invalid_argument("game: stake vector length != n");
    switch (spec.kind) {
        case GameKind::PoD: return std::make_unique<PodGame>(p, spec.pod_abstain);
        case GameKind::LC: return std::make_unique<LcGame>(p);
        case GameKind::DC: return std::make_unique<DcGame>(p, spec.dc_mode);
        case GameKind::PoDWithCollusion: return std::make_unique<CollusionGame>(p, false);
        case GameKind::PoDWithCollusionAndWhistleblower: return std::make_unique<CollusionGame>(p, true);
    }
    throw std::invalid_argument("game: unknown kind");
}

}  // namespace pod
