#include "pod/state_machine.hpp"

#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "pod/merkle.hpp"

namespace pod {

namespace {

void put_u64(Bytes& out, std::uint64_t v) {
    for (int i = 7; i >= 0; --i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void check_account_id(std::string_view id) {
    if (id.empty()) throw std::invalid_argument("account id must be non-empty");
    for (char c : id) {
        if (c == ' ' || c == '\t' || c == '\n' || c == '\r') throw std::invalid_argument("account id contains whitespace");
    }
}

const Digest& empty_commitment() {
    static const Digest root = merklize({Bytes{}});
    return root;
}

}  // namespace

std::uint64_t LedgerState::total_balance() const {
    std::uint64_t sum = 0;
    for (const auto& [id, acct] : accounts) sum += acct.balance;
    return sum;
}

std::vector<Bytes> LedgerState::leaves() const {
    std::vector<Bytes> out;
    out.reserve(accounts.size());
    for (const auto& [id, acct] : accounts) {
        Bytes leaf;
        put_u64(leaf, id.size());
        leaf.insert(leaf.end(), id.begin(), id.end());
        put_u64(leaf, acct.balance);
        put_u64(leaf, acct.nonce);
        out.push_back(std::move(leaf));
    }
    return out;
}

Digest state_root(const LedgerState& state) {
    if (state.accounts.empty()) return empty_commitment();
    return merklize(state.leaves());
}

Digest trace_root(const ExecutionTrace& trace) {
    if (trace.intermediate_roots.empty()) return empty_commitment();
    std::vector<Bytes> items;
    items.reserve(trace.intermediate_roots.size());
    for (const auto& r : trace.intermediate_roots) items.emplace_back(r.bytes.begin(), r.bytes.end());
    return merklize(items);
}

bool apply_transaction(LedgerState& state, const Transaction& tx) {
    auto from = state.accounts.find(tx.from);
    if (from == state.accounts.end()) return false;
    if (from->second.nonce != tx.nonce || from->second.balance < tx.amount) return false;
    from->second.balance -= tx.amount;
    from->second.nonce += 1;
    state.accounts[tx.to].balance += tx.amount;
    return true;
}

ApplyResult apply(const LedgerState& prior, const TransactionBatch& batch) {
    ApplyResult result{prior, {}};
    result.trace.intermediate_roots.reserve(batch.txs.size());
    for (const auto& tx : batch.txs) {
        apply_transaction(result.state, tx);
        result.trace.intermediate_roots.push_back(state_root(result.state));
    }
    return result;
}

StateAssertion assert_state(const LedgerState& prior, const TransactionBatch& batch, bool honest,
                            std::uint64_t rng_seed) {
    StateAssertion a;
    a.batch_id = batch.batch_id;
    a.asserter_honest = honest;
    if (honest) {
        a.r_S = state_root(apply(prior, batch).state);
    } else {
        Rng rng(rng_seed);
        a.r_S = rng.digest();
    }
    return a;
}

std::set<Digest> validate(const std::vector<Digest>& roots, const LedgerState& prior, const TransactionBatch& batch,
                          RootKind kind) {
    if (roots.empty()) throw std::invalid_argument("validate: no roots in dispute");
    ApplyResult truth = apply(prior, batch);
    Digest expected = kind == RootKind::State ? state_root(truth.state) : trace_root(truth.trace);
    std::set<Digest> invalid;
    for (const auto& r : roots) {
        if (r != expected) invalid.insert(r);
    }
    return invalid;
}

std::string serialize_state(const LedgerState& state) {
    std::ostringstream out;
    for (const auto& [id, acct] : state.accounts) {
        out << "account " << id << ' ' << acct.balance << ' ' << acct.nonce << '\n';
    }
    return out.str();
}

LedgerState parse_state(std::string_view text) {
    LedgerState state;
    std::istringstream in{std::string(text)};
    std::string line;
    std::string prev;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream f(line);
        std::string kind, id;
        Account acct;
        if (!(f >> kind >> id >> acct.balance >> acct.nonce) || kind != "account") {
            throw std::invalid_argument("state: malformed record: " + line);
        }
        check_account_id(id);
        if (!prev.empty() && id <= prev) throw std::invalid_argument("state: accounts not in canonical order at " + id);
        prev = id;
        state.accounts.emplace(id, acct);
    }
    return state;
}

std::string serialize_batch(const TransactionBatch& batch) {
    std::ostringstream out;
    out << "batch " << batch.batch_id << '\n';
    for (const auto& tx : batch.txs) {
        out << "tx " << tx.from << ' ' << tx.to << ' ' << tx.amount << ' ' << tx.nonce << '\n';
    }
    return out.str();
}

TransactionBatch parse_batch(std::string_view text) {
    TransactionBatch batch;
    std::istringstream in{std::string(text)};
    std::string line;
    bool header = false;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream f(line);
        std::string kind;
        f >> kind;
        if (kind == "batch" && !header) {
            if (!(f >> batch.batch_id)) throw std::invalid_argument("batch: malformed header");
            header = true;
        } else if (kind == "tx" && header) {
            Transaction tx;
            if (!(f >> tx.from >> tx.to >> tx.amount >> tx.nonce)) {
                throw std::invalid_argument("batch: malformed record: " + line);
            }
            check_account_id(tx.from);
            check_account_id(tx.to);
            batch.txs.push_back(std::move(tx));
        } else {
            throw std::invalid_argument("batch: unexpected record: " + line);
        }
    }
    if (!header) throw std::invalid_argument("batch: missing header");
    return batch;
}

LedgerState genesis_state(const WorkloadShape& shape) {
    LedgerState s;
    for (std::uint32_t i = 0; i < shape.accounts; ++i) {
        char id[32];
        std::snprintf(id, sizeof id, "acct%03u", i);
        s.accounts.emplace(id, Account{shape.initial_balance, 0});
    }
    return s;
}

TransactionBatch generate_batch(const LedgerState& state, const WorkloadShape& shape, std::uint64_t batch_id,
                                Rng& rng) {
    TransactionBatch batch;
    batch.batch_id = batch_id;
    if (state.accounts.empty()) return batch;
    std::vector<std::string> ids;
    for (const auto& [id, acct] : state.accounts) ids.push_back(id);

    std::map<std::string, std::uint64_t> next_nonce;
    for (const auto& [id, acct] : state.accounts) next_nonce[id] = acct.nonce;

    for (std::uint32_t k = 0; k < shape.txs_per_batch; ++k) {
        Transaction tx;
        tx.from = ids[rng.below(ids.size())];
        tx.to = ids[rng.below(ids.size())];
        std::uint64_t bal = state.accounts.at(tx.from).balance;
        // Roughly one in eight transfers overdraws.
        tx.amount = rng.below(8) == 0 ? bal + 1 + rng.below(100) : rng.below(bal / 4 + 1);
        tx.nonce = next_nonce[tx.from]++;
        batch.txs.push_back(std::move(tx));
    }
    return batch;
}

}  // namespace pod
