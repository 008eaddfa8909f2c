#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "pod/money.hpp"
#include "pod/vrf.hpp"

namespace pod {

enum class EventKind { Assert, Submit, Alert, Dispute, Settle, Slash, ColludeForm, ColludeSettle, Whistleblow };

std::string_view to_string(EventKind k);

/// A balance the ledger tracks. Operator is the external funding source and
/// External the sink for execution and validation costs; both are tracked
/// as cumulative totals.
struct AccountRef {
    enum Kind : std::uint8_t { Stake, Earnings, Pool, Escrow, External, Operator };
    Kind kind = Pool;
    WatchtowerId id = 0;

    static AccountRef stake(WatchtowerId i) { return {Stake, i}; }
    static AccountRef earnings(WatchtowerId i) { return {Earnings, i}; }
    static AccountRef pool() { return {Pool, 0}; }
    static AccountRef escrow() { return {Escrow, 0}; }
    static AccountRef external() { return {External, 0}; }
    static AccountRef op() { return {Operator, 0}; }

    bool per_watchtower() const { return kind == Stake || kind == Earnings; }
    /// "wt3.stake", "pool", ...; per-watchtower accounts render as
    /// "anon.<kind>" when hidden.
    std::string name(bool hidden = false) const;
};

struct Event {
    std::uint64_t epoch = 0;
    std::uint32_t tick = 0;
    EventKind kind = EventKind::Assert;
    std::string actor;
    Micros amount{};
    std::string reason;
    std::string from;  // empty for events that move no value
    std::string to;
};

/// One JSON object, keys sorted, no trailing newline.
std::string to_json_line(const Event& e);
/// Inverse of to_json_line; throws std::invalid_argument on malformed input.
Event parse_event_line(std::string_view line);

class InsolventError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Double-entry balances in micros. Conservation:
///   sum(stake) + sum(earnings) + pool + escrow + external
///     == initial_stake + operator_spend
class Ledger {
public:
    explicit Ledger(std::vector<Micros> stakes, std::optional<Micros> operator_budget = std::nullopt);

    /// Moves `amount` (>= 0). Stake, pool and escrow never go negative;
    /// exceeding the operator budget throws InsolventError.
    void transfer(AccountRef from, AccountRef to, Micros amount);

    std::size_t size() const { return stake_.size(); }
    Micros stake(WatchtowerId i) const { return stake_.at(i); }
    Micros earnings(WatchtowerId i) const { return earnings_.at(i); }
    Micros wealth(WatchtowerId i) const { return stake_.at(i) + earnings_.at(i); }
    Micros pool() const { return pool_; }
    Micros escrow() const { return escrow_; }
    Micros external() const { return external_; }
    Micros operator_spend() const { return operator_spend_; }
    Micros initial_stake() const { return initial_stake_; }

    bool conserved() const;

private:
    Micros& slot(AccountRef a);

    std::vector<Micros> stake_;
    std::vector<Micros> earnings_;
    Micros pool_{}, escrow_{}, external_{}, operator_spend_{}, initial_stake_{};
    std::optional<Micros> budget_;
};

/// Ledger plus the event log: every balance change goes through post(), which
/// applies it and appends exactly one event.
class Books {
public:
    Books(Ledger ledger, std::ostream* stream, bool keep);

    void set_epoch(std::uint64_t epoch) { epoch_ = epoch; }
    std::uint64_t epoch() const { return epoch_; }

    void post(std::uint32_t tick, EventKind kind, std::string actor, AccountRef from, AccountRef to, Micros amount,
              std::string reason, bool hide_identity = false);
    /// Event without a balance change.
    void note(std::uint32_t tick, EventKind kind, std::string actor, std::string reason);

    Ledger& ledger() { return ledger_; }
    const Ledger& ledger() const { return ledger_; }
    const std::vector<Event>& events() const { return events_; }
    std::uint64_t event_count() const { return count_; }

private:
    void emit(Event e);

    Ledger ledger_;
    std::ostream* stream_;
    bool keep_;
    std::vector<Event> events_;
    std::uint64_t epoch_ = 0;
    std::uint64_t count_ = 0;
};

std::string actor_name(WatchtowerId id);

}  // namespace pod
