#include "pod/merkle.hpp"

#include <stdexcept>

namespace pod {

Digest leaf_hash(ByteView item) { return Sha256{}.update(kLeafPrefix).update(item).finish(); }

Digest node_hash(const Digest& left, const Digest& right) {
    return Sha256{}.update(kNodePrefix).update(left).update(right).finish();
}

namespace {

std::vector<Digest> next_level(const std::vector<Digest>& level) {
    std::vector<Digest> up;
    up.reserve((level.size() + 1) / 2);
    for (std::size_t i = 0; i < level.size(); i += 2) {
        const Digest& right = (i + 1 < level.size()) ? level[i + 1] : level[i];
        up.push_back(node_hash(level[i], right));
    }
    return up;
}

std::vector<Digest> hash_leaves(const std::vector<Bytes>& items) {
    std::vector<Digest> leaves;
    leaves.reserve(items.size());
    for (const auto& item : items) leaves.push_back(leaf_hash(item));
    return leaves;
}

}  // namespace

std::size_t merkle_height(std::size_t count) {
    std::size_t h = 0;
    while ((std::size_t{1} << h) < count) ++h;
    return h;
}

Digest merklize_leaves(std::vector<Digest> level) {
    if (level.empty()) throw std::invalid_argument("empty item list");
    while (level.size() > 1) level = next_level(level);
    return level.front();
}

Digest merklize(const std::vector<Bytes>& items) {
    if (items.empty()) throw std::invalid_argument("empty item list");
    return merklize_leaves(hash_leaves(items));
}

MerkleProofPath merkle_proof(const std::vector<Bytes>& items, std::size_t index) {
    if (index >= items.size()) throw std::out_of_range("merkle_proof: index out of range");
    MerkleProofPath path;
    path.leaf_index = index;
    auto level = hash_leaves(items);
    std::size_t pos = index;
    while (level.size() > 1) {
        std::size_t sib = pos ^ 1u;
        path.siblings.push_back(sib < level.size() ? level[sib] : level[pos]);
        level = next_level(level);
        pos >>= 1;
    }
    return path;
}

bool verify_merkle_proof(const Digest& root, ByteView leaf, const MerkleProofPath& path) {
    if (path.siblings.size() >= 64) return false;
    if ((path.leaf_index >> path.siblings.size()) != 0) return false;
    Digest acc = leaf_hash(leaf);
    std::size_t pos = path.leaf_index;
    for (const auto& sib : path.siblings) {
        acc = (pos & 1u) ? node_hash(sib, acc) : node_hash(acc, sib);
        pos >>= 1;
    }
    return acc == root;
}

}  // namespace pod
