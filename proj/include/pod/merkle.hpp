#pragma once

#include <cstddef>
#include <vector>

#include "pod/crypto.hpp"

namespace pod {

/// Domain-separation prefixes for leaf and internal-node hashing.
inline constexpr std::uint8_t kLeafPrefix = 0x00;
inline constexpr std::uint8_t kNodePrefix = 0x01;

Digest leaf_hash(ByteView item);
Digest node_hash(const Digest& left, const Digest& right);

struct MerkleProofPath {
    std::size_t leaf_index = 0;
    std::vector<Digest> siblings;  // bottom-up

    bool operator==(const MerkleProofPath&) const = default;
};

/// Root over an ordered, non-empty item list. Odd-width levels duplicate
/// their last node. Throws std::invalid_argument("empty item list").
Digest merklize(const std::vector<Bytes>& items);

/// Root over leaf digests that were already hashed with leaf_hash.
Digest merklize_leaves(std::vector<Digest> level);

/// Tree height for a list of `count` items, i.e. ceil(log2(count)).
std::size_t merkle_height(std::size_t count);

MerkleProofPath merkle_proof(const std::vector<Bytes>& items, std::size_t index);

/// Never throws; a malformed path simply fails to verify.
bool verify_merkle_proof(const Digest& root, ByteView leaf, const MerkleProofPath& path);

}  // namespace pod
