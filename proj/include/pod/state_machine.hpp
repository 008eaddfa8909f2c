#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "pod/crypto.hpp"
#include "pod/rng.hpp"

namespace pod {

struct Account {
    std::uint64_t balance = 0;
    std::uint64_t nonce = 0;

    bool operator==(const Account&) const = default;
};

/// Rollup key-value state. std::map keeps accounts sorted by id, which is
/// the canonical order for both Merklization and serialization.
struct LedgerState {
    std::map<std::string, Account> accounts;

    bool operator==(const LedgerState&) const = default;

    std::uint64_t total_balance() const;
    std::vector<Bytes> leaves() const;
};

struct Transaction {
    std::string from;
    std::string to;
    std::uint64_t amount = 0;
    std::uint64_t nonce = 0;

    bool operator==(const Transaction&) const = default;
};

struct TransactionBatch {
    std::uint64_t batch_id = 0;
    std::vector<Transaction> txs;

    bool operator==(const TransactionBatch&) const = default;
};

/// One state root per transaction applied (skipped transactions included).
struct ExecutionTrace {
    std::vector<Digest> intermediate_roots;
};

struct StateAssertion {
    Digest r_S;
    std::uint64_t batch_id = 0;
    bool asserter_honest = true;
};

struct ApplyResult {
    LedgerState state;
    ExecutionTrace trace;
};

enum class RootKind { State, Trace };

/// Root of a ledger state; the empty state commits to the root of a single
/// empty item.
Digest state_root(const LedgerState& state);
/// Root of an execution trace; the empty trace commits like the empty state.
Digest trace_root(const ExecutionTrace& trace);

/// Applies a single transaction in place. Returns false (and leaves the state
/// untouched) for a wrong nonce, unknown sender or insufficient balance.
bool apply_transaction(LedgerState& state, const Transaction& tx);

ApplyResult apply(const LedgerState& prior, const TransactionBatch& batch);

StateAssertion assert_state(const LedgerState& prior, const TransactionBatch& batch, bool honest,
                            std::uint64_t rng_seed);

/// Ground-truth dispute oracle: re-executes the batch and returns every
/// submitted root of the given kind that differs from the true one.
std::set<Digest> validate(const std::vector<Digest>& roots, const LedgerState& prior, const TransactionBatch& batch,
                          RootKind kind = RootKind::State);

// Line-delimited snapshots:
//   account <id> <balance> <nonce>
//   batch <batch_id>
//   tx <from> <to> <amount> <nonce>
std::string serialize_state(const LedgerState& state);
LedgerState parse_state(std::string_view text);
std::string serialize_batch(const TransactionBatch& batch);
TransactionBatch parse_batch(std::string_view text);

struct WorkloadShape {
    std::uint32_t accounts = 8;
    std::uint32_t txs_per_batch = 4;
    std::uint64_t initial_balance = 1000;

    bool operator==(const WorkloadShape&) const = default;
};

LedgerState genesis_state(const WorkloadShape& shape);
/// Random transfers between existing accounts; some may be invalid on purpose
/// (stale nonce or overdraft) so the skip path is exercised.
TransactionBatch generate_batch(const LedgerState& state, const WorkloadShape& shape, std::uint64_t batch_id,
                                Rng& rng);

}  // namespace pod
