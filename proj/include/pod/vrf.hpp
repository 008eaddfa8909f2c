#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "pod/crypto.hpp"

namespace pod {

using WatchtowerId = std::uint32_t;

struct KeyPair {
    WatchtowerId id = 0;
    Bytes public_key;
    Bytes secret_key;
};

/// Public key is a one-way function of the secret key.
Bytes derive_public_key(ByteView secret_key);

/// Deterministic key generation from a simulation seed.
KeyPair generate_keypair(std::uint64_t seed, WatchtowerId id);

/// A proof of diligence: digest d in [0,1), proof bytes, and H(input).
struct PoDProof {
    double d = 0.0;
    Bytes pi;
    Digest input_commitment;

    bool operator==(const PoDProof&) const = default;
};

/// Registry of watchtower keys. Each secret is escrowed sealed under the
/// registry key, so the registry (and only it) can recompute keyed digests
/// when checking a proof.
class KeyRegistry {
public:
    explicit KeyRegistry(std::uint64_t sealing_seed);

    void enroll(const KeyPair& keys);

    std::optional<Bytes> unseal(ByteView public_key) const;
    std::optional<Bytes> public_key_of(WatchtowerId id) const;
    std::size_t size() const { return by_id_.size(); }

    /// One line per watchtower: `<id> <public_key hex> <sealed secret hex>`.
    std::string serialize() const;
    static KeyRegistry deserialize(std::string_view text, std::uint64_t sealing_seed);

private:
    struct Entry {
        Bytes public_key;
        Bytes sealed_secret;
    };

    Bytes seal(ByteView public_key, ByteView secret) const;

    Digest sealing_key_;
    std::map<WatchtowerId, Entry> by_id_;
    std::map<Bytes, WatchtowerId> by_public_key_;
};

/// Keyed-hash VRF. Throws std::invalid_argument on a malformed secret key.
PoDProof vrf_eval(ByteView secret_key, ByteView input);

/// Never throws. True iff `proof` is exactly what vrf_eval yields for the
/// secret behind `public_key` on `input`.
bool vrf_verify(const KeyRegistry& registry, ByteView public_key, const PoDProof& proof, ByteView input);

/// Interface so a standards-compliant EC-VRF could replace the escrow scheme.
class Vrf {
public:
    virtual ~Vrf() = default;
    virtual PoDProof eval(const KeyPair& keys, ByteView input) const = 0;
    virtual bool verify(ByteView public_key, const PoDProof& proof, ByteView input) const = 0;
};

class EscrowVrf final : public Vrf {
public:
    explicit EscrowVrf(const KeyRegistry& registry) : registry_(registry) {}

    PoDProof eval(const KeyPair& keys, ByteView input) const override {
        return vrf_eval(keys.secret_key, input);
    }
    bool verify(ByteView public_key, const PoDProof& proof, ByteView input) const override {
        return vrf_verify(registry_, public_key, proof, input);
    }

private:
    const KeyRegistry& registry_;
};

}  // namespace pod
