#include "pod/equilibrium.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

namespace pod {

namespace {

constexpr int idx(Action a) { return static_cast<int>(a); }

// Mixed-radix enumeration of profiles, player 0 most significant, so index
// order is lexicographic in the per-player action lists.
class ProfileSpace {
public:
    ProfileSpace(const Game& game, int fixed_player = -1, Action fixed_action = Action::Diligent) {
        const int n = game.players();
        if (n > kMaxEnumerationPlayers) {
            throw EnumerationTooLarge("refusing to enumerate " + std::to_string(n) + " players (limit " +
                                      std::to_string(kMaxEnumerationPlayers) + ")");
        }
        choices_.resize(n);
        total_ = 1;
        for (int i = 0; i < n; ++i) {
            auto acts = fixed_player >= 0 && i != fixed_player ? game.opponent_actions(i) : game.actions(i);
            if (i == fixed_player) {
                if (std::find(acts.begin(), acts.end(), fixed_action) == acts.end()) {
                    throw std::invalid_argument("action not available to player " + std::to_string(i));
                }
                choices_[i] = {fixed_action};
            } else {
                choices_[i].assign(acts.begin(), acts.end());
            }
            total_ *= choices_[i].size();
            if (total_ > kMaxEnumerationProfiles) {
                throw EnumerationTooLarge("profile space exceeds " + std::to_string(kMaxEnumerationProfiles) +
                                          " profiles");
            }
        }
    }

    std::uint64_t size() const { return total_; }
    int players() const { return static_cast<int>(choices_.size()); }

    void decode(std::uint64_t index, std::vector<std::uint8_t>& digits, Profile& profile) const {
        const int n = players();
        digits.assign(n, 0);
        profile.resize(n);
        for (int i = n - 1; i >= 0; --i) {
            const auto radix = choices_[i].size();
            digits[i] = static_cast<std::uint8_t>(index % radix);
            index /= radix;
            profile[i] = choices_[i][digits[i]];
        }
    }

    // Advance to the next profile, keeping counts in sync.
    void increment(std::vector<std::uint8_t>& digits, Profile& profile, ActionCounts& counts) const {
        for (int i = players() - 1; i >= 0; --i) {
            --counts[idx(profile[i])];
            if (++digits[i] == choices_[i].size()) digits[i] = 0;
            profile[i] = choices_[i][digits[i]];
            ++counts[idx(profile[i])];
            if (digits[i] != 0) return;
        }
    }

private:
    std::vector<std::vector<Action>> choices_;
    std::uint64_t total_ = 1;
};

struct Chunk {
    std::uint64_t lo, hi;
};

std::vector<Chunk> split(std::uint64_t total) {
    const std::uint64_t target = std::max<std::uint64_t>(1, total / 256);
    const std::uint64_t size = std::max<std::uint64_t>(target, 1024);
    std::vector<Chunk> out;
    for (std::uint64_t lo = 0; lo < total; lo += size) out.push_back({lo, std::min(total, lo + size)});
    return out;
}

double deviation_payoff(const Game& game, int player, Action from, Action to, ActionCounts counts) {
    --counts[idx(from)];
    ++counts[idx(to)];
    return game.payoff(player, to, counts);
}

// Full recompute on a copied profile; used by the reference kernels.
double naive_payoff(const Game& game, Profile profile, int player, Action own) {
    profile[player] = own;
    return game.payoffs(profile)[player];
}

struct DominanceHit {
    Profile profile;
    Action alternative;
    double own, alt;
};

std::optional<DominanceHit> dominance_failure(const Game& game, const Profile& p, const ActionCounts& c, int player) {
    const Action a = p[player];
    const double own = game.payoff(player, a, c);
    for (Action b : game.actions(player)) {
        if (b == a) continue;
        const double alt = deviation_payoff(game, player, a, b, c);
        if (!strictly_greater(own, alt)) return DominanceHit{p, b, own, alt};
    }
    return std::nullopt;
}

bool is_equilibrium(const Game& game, const Profile& p, const ActionCounts& c) {
    for (int i = 0; i < game.players(); ++i) {
        const double cur = game.payoff(i, p[i], c);
        for (Action b : game.actions(i)) {
            if (b != p[i] && strictly_greater(deviation_payoff(game, i, p[i], b, c), cur)) return false;
        }
    }
    return true;
}

NashResult collect(const Game& game, const std::vector<Profile>& raw, std::uint64_t checked) {
    NashResult out;
    out.raw_count = raw.size();
    out.profiles_checked = checked;
    std::set<Profile> seen;
    for (const auto& p : raw) {
        Profile r = game.realize(p);
        if (!seen.insert(r).second) continue;
        out.equilibria.push_back(Equilibrium{r, game.payoffs(r)});
    }
    return out;
}

}  // namespace

bool strictly_greater(double a, double b) {
    const double scale = std::max({1.0, std::fabs(a), std::fabs(b)});
    return a - b > 1e-9 * scale;
}

std::uint64_t profile_count(const Game& game) { return ProfileSpace(game).size(); }

DominanceResult is_dominant(const Game& game, Action action, int player) {
    const ProfileSpace space(game, player, action);
    const auto chunks = split(space.size());
    std::vector<std::optional<DominanceHit>> first(chunks.size());

#pragma omp parallel for schedule(dynamic, 1)
    for (std::size_t k = 0; k < chunks.size(); ++k) {
        std::vector<std::uint8_t> digits;
        Profile p;
        space.decode(chunks[k].lo, digits, p);
        ActionCounts c = count_actions(p);
        for (std::uint64_t j = chunks[k].lo; j < chunks[k].hi; ++j) {
            if (auto hit = dominance_failure(game, p, c, player)) {
                first[k] = std::move(hit);
                break;
            }
            if (j + 1 < chunks[k].hi) space.increment(digits, p, c);
        }
    }

    DominanceResult out;
    out.player = player;
    out.action = action;
    out.profiles_checked = space.size();
    for (auto& hit : first) {
        if (!hit) continue;
        out.dominant = false;
        out.counterexample = std::move(hit->profile);
        out.alternative = hit->alternative;
        out.action_payoff = hit->own;
        out.alternative_payoff = hit->alt;
        break;
    }
    return out;
}

DominanceResult is_dominant_serial(const Game& game, Action action, int player) {
    const ProfileSpace space(game, player, action);
    DominanceResult out;
    out.player = player;
    out.action = action;
    out.profiles_checked = space.size();
    std::vector<std::uint8_t> digits;
    Profile p;
    for (std::uint64_t j = 0; j < space.size(); ++j) {
        space.decode(j, digits, p);
        const double own = naive_payoff(game, p, player, action);
        for (Action b : game.actions(player)) {
            if (b == action) continue;
            const double alt = naive_payoff(game, p, player, b);
            if (!strictly_greater(own, alt)) {
                out.dominant = false;
                out.counterexample = p;
                out.alternative = b;
                out.action_payoff = own;
                out.alternative_payoff = alt;
                return out;
            }
        }
    }
    return out;
}

NashResult find_pure_nash(const Game& game) {
    const ProfileSpace space(game);
    const auto chunks = split(space.size());
    std::vector<std::vector<Profile>> found(chunks.size());

#pragma omp parallel for schedule(dynamic, 1)
    for (std::size_t k = 0; k < chunks.size(); ++k) {
        std::vector<std::uint8_t> digits;
        Profile p;
        space.decode(chunks[k].lo, digits, p);
        ActionCounts c = count_actions(p);
        for (std::uint64_t j = chunks[k].lo; j < chunks[k].hi; ++j) {
            if (game.admissible(c) && is_equilibrium(game, p, c)) found[k].push_back(p);
            if (j + 1 < chunks[k].hi) space.increment(digits, p, c);
        }
    }

    std::vector<Profile> raw;
    for (auto& f : found) raw.insert(raw.end(), f.begin(), f.end());
    return collect(game, raw, space.size());
}

NashResult find_pure_nash_serial(const Game& game) {
    const ProfileSpace space(game);
    std::vector<Profile> raw;
    std::vector<std::uint8_t> digits;
    Profile p;
    for (std::uint64_t j = 0; j < space.size(); ++j) {
        space.decode(j, digits, p);
        if (!game.admissible(count_actions(p))) continue;
        const auto base = game.payoffs(p);
        bool stable = true;
        for (int i = 0; i < game.players() && stable; ++i) {
            for (Action b : game.actions(i)) {
                if (b != p[i] && strictly_greater(naive_payoff(game, p, i, b), base[i])) {
                    stable = false;
                    break;
                }
            }
        }
        if (stable) raw.push_back(p);
    }
    return collect(game, raw, space.size());
}

std::optional<Action> improving_deviation(const Game& game, const Profile& profile, int player) {
    const ActionCounts c = count_actions(profile);
    double best = game.payoff(player, profile[player], c);
    std::optional<Action> out;
    for (Action b : game.actions(player)) {
        if (b == profile[player]) continue;
        const double u = deviation_payoff(game, player, profile[player], b, c);
        if (strictly_greater(u, best)) {
            best = u;
            out = b;
        }
    }
    return out;
}

bool pareto_dominates(const std::vector<double>& a, const std::vector<double>& b) {
    bool strict = false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (strictly_greater(b[i], a[i])) return false;
        if (strictly_greater(a[i], b[i])) strict = true;
    }
    return strict;
}

std::vector<std::size_t> pareto_efficient(const Game& game, const std::vector<Equilibrium>& equilibria,
                                          ParetoScope scope) {
    std::vector<bool> dominated(equilibria.size(), false);
    if (scope == ParetoScope::AmongEquilibria) {
        for (std::size_t a = 0; a < equilibria.size(); ++a) {
            for (std::size_t b = 0; b < equilibria.size(); ++b) {
                if (a != b && pareto_dominates(equilibria[b].payoffs, equilibria[a].payoffs)) dominated[a] = true;
            }
        }
    } else {
        const ProfileSpace space(game);
        std::vector<std::uint8_t> digits;
        Profile p;
        for (std::uint64_t j = 0; j < space.size(); ++j) {
            space.decode(j, digits, p);
            if (!game.admissible(count_actions(p))) continue;
            const auto u = game.payoffs(p);
            for (std::size_t a = 0; a < equilibria.size(); ++a) {
                if (!dominated[a] && pareto_dominates(u, equilibria[a].payoffs)) dominated[a] = true;
            }
        }
    }
    std::vector<std::size_t> out;
    for (std::size_t a = 0; a < equilibria.size(); ++a) {
        if (!dominated[a]) out.push_back(a);
    }
    return out;
}

}  // namespace pod
