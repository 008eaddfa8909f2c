#include "pod/ledger.hpp"

#include <array>
#include <ostream>

#include "json.hpp"

namespace pod {

namespace {

constexpr std::array<std::string_view, 9> kKindNames = {"ASSERT", "SUBMIT",        "ALERT",
                                                        "DISPUTE", "SETTLE",       "SLASH",
                                                        "COLLUDE_FORM", "COLLUDE_SETTLE", "WHISTLEBLOW"};

}  // namespace

std::string_view to_string(EventKind k) { return kKindNames[static_cast<std::size_t>(k)]; }

std::string actor_name(WatchtowerId id) { return "wt" + std::to_string(id); }

std::string AccountRef::name(bool hidden) const {
    switch (kind) {
        case Stake: return (hidden ? std::string("anon") : actor_name(id)) + ".stake";
        case Earnings: return (hidden ? std::string("anon") : actor_name(id)) + ".earnings";
        case Pool: return "pool";
        case Escrow: return "escrow";
        case External: return "external";
        case Operator: return "operator";
    }
    return "unknown";
}

std::string to_json_line(const Event& e) {
    nlohmann::json j;
    j["epoch"] = e.epoch;
    j["tick"] = e.tick;
    j["kind"] = std::string(to_string(e.kind));
    j["actor"] = e.actor;
    j["amount"] = e.amount.raw();
    j["reason"] = e.reason;
    if (!e.from.empty()) {
        j["from"] = e.from;
        j["to"] = e.to;
    }
    return j.dump();
}

Event parse_event_line(std::string_view line) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(line);
        Event e;
        e.epoch = j.at("epoch").get<std::uint64_t>();
        e.tick = j.at("tick").get<std::uint32_t>();
        const auto kind = j.at("kind").get<std::string>();
        bool found = false;
        for (std::size_t k = 0; k < kKindNames.size(); ++k) {
            if (kKindNames[k] == kind) {
                e.kind = static_cast<EventKind>(k);
                found = true;
            }
        }
        if (!found) throw std::invalid_argument("unknown event kind " + kind);
        e.actor = j.at("actor").get<std::string>();
        e.amount = Micros{j.at("amount").get<std::int64_t>()};
        e.reason = j.at("reason").get<std::string>();
        if (j.contains("from")) {
            e.from = j.at("from").get<std::string>();
            e.to = j.at("to").get<std::string>();
        }
        return e;
    } catch (const nlohmann::json::exception& ex) {
        throw std::invalid_argument(std::string("malformed event: ") + ex.what());
    }
}

Ledger::Ledger(std::vector<Micros> stakes, std::optional<Micros> operator_budget)
    : stake_(std::move(stakes)), earnings_(stake_.size()), budget_(operator_budget) {
    for (auto s : stake_) {
        if (s < Micros{0}) throw std::invalid_argument("negative initial stake");
        initial_stake_ += s;
    }
}

Micros& Ledger::slot(AccountRef a) {
    switch (a.kind) {
        case AccountRef::Stake: return stake_.at(a.id);
        case AccountRef::Earnings: return earnings_.at(a.id);
        case AccountRef::Pool: return pool_;
        case AccountRef::Escrow: return escrow_;
        case AccountRef::External: return external_;
        case AccountRef::Operator: return operator_spend_;
    }
    throw std::logic_error("ledger: bad account");
}

void Ledger::transfer(AccountRef from, AccountRef to, Micros amount) {
    if (amount < Micros{0}) throw std::invalid_argument("ledger: negative transfer");
    if (from.kind == AccountRef::External || to.kind == AccountRef::Operator) {
        throw std::invalid_argument("ledger: external is a sink and operator a source");
    }
    if (from.kind == AccountRef::Operator) {
        if (budget_ && operator_spend_ + amount > *budget_) {
            throw InsolventError("operator budget " + budget_->str() + " exhausted: spent " + operator_spend_.str() +
                                 ", next payout " + amount.str());
        }
        operator_spend_ += amount;
    } else {
        Micros& src = slot(from);
        const bool floored = from.kind == AccountRef::Stake || from.kind == AccountRef::Pool ||
                             from.kind == AccountRef::Escrow;
        if (floored && src < amount) {
            throw std::logic_error("ledger: " + from.name() + " holds " + src.str() + ", cannot pay " + amount.str());
        }
        src -= amount;
    }
    slot(to) += amount;
}

bool Ledger::conserved() const {
    Micros held = pool_ + escrow_ + external_;
    for (std::size_t i = 0; i < stake_.size(); ++i) held += stake_[i] + earnings_[i];
    return held == initial_stake_ + operator_spend_;
}

Books::Books(Ledger ledger, std::ostream* stream, bool keep)
    : ledger_(std::move(ledger)), stream_(stream), keep_(keep) {}

void Books::post(std::uint32_t tick, EventKind kind, std::string actor, AccountRef from, AccountRef to, Micros amount,
                 std::string reason, bool hide_identity) {
    ledger_.transfer(from, to, amount);
    Event e;
    e.epoch = epoch_;
    e.tick = tick;
    e.kind = kind;
    e.actor = std::move(actor);
    e.amount = amount;
    e.reason = std::move(reason);
    e.from = from.name(hide_identity && from.per_watchtower());
    e.to = to.name(hide_identity && to.per_watchtower());
    emit(std::move(e));
}

void Books::note(std::uint32_t tick, EventKind kind, std::string actor, std::string reason) {
    Event e;
    e.epoch = epoch_;
    e.tick = tick;
    e.kind = kind;
    e.actor = std::move(actor);
    e.reason = std::move(reason);
    emit(std::move(e));
}

void Books::emit(Event e) {
    ++count_;
    if (stream_) *stream_ << to_json_line(e) << '\n';
    if (keep_) events_.push_back(std::move(e));
}

}  // namespace pod
