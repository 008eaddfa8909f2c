#include "pod/vrf.hpp"

#include <sstream>
#include <stdexcept>

namespace pod {

namespace {

constexpr std::size_t kKeySize = 32;
constexpr std::uint8_t kPublicKeyTag = 0x10;
constexpr std::uint8_t kGammaTag = 0x02;
constexpr std::uint8_t kBindingTag = 0x03;
constexpr std::uint8_t kSealTag = 0x11;

Bytes to_bytes(const Digest& d) { return {d.bytes.begin(), d.bytes.end()}; }

void put_u64(Sha256& h, std::uint64_t v) {
    for (int i = 7; i >= 0; --i) h.update(static_cast<std::uint8_t>(v >> (8 * i)));
}

Digest gamma_of(ByteView secret_key, ByteView input) {
    return Sha256{}.update(kGammaTag).update(secret_key).update(input).finish();
}

Digest binding_tag(ByteView public_key, const Digest& input_commitment, const Digest& gamma) {
    return Sha256{}.update(kBindingTag).update(public_key).update(input_commitment).update(gamma).finish();
}

}  // namespace

Bytes derive_public_key(ByteView secret_key) {
    return to_bytes(Sha256{}.update(kPublicKeyTag).update(secret_key).finish());
}

KeyPair generate_keypair(std::uint64_t seed, WatchtowerId id) {
    Sha256 h;
    h.update("pod-keygen");
    put_u64(h, seed);
    put_u64(h, id);
    KeyPair kp;
    kp.id = id;
    kp.secret_key = to_bytes(h.finish());
    kp.public_key = derive_public_key(kp.secret_key);
    return kp;
}

KeyRegistry::KeyRegistry(std::uint64_t sealing_seed) {
    Sha256 h;
    h.update("pod-registry-seal");
    put_u64(h, sealing_seed);
    sealing_key_ = h.finish();
}

Bytes KeyRegistry::seal(ByteView public_key, ByteView secret) const {
    Digest pad = Sha256{}.update(kSealTag).update(sealing_key_).update(public_key).finish();
    Bytes out(secret.begin(), secret.end());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] ^= pad.bytes[i % Digest::kSize];
    return out;
}

void KeyRegistry::enroll(const KeyPair& keys) {
    if (keys.secret_key.size() != kKeySize) throw std::invalid_argument("registry: malformed secret key");
    if (derive_public_key(keys.secret_key) != keys.public_key) {
        throw std::invalid_argument("registry: public key does not match secret key");
    }
    if (by_id_.contains(keys.id)) throw std::invalid_argument("registry: duplicate watchtower id");
    if (by_public_key_.contains(keys.public_key)) throw std::invalid_argument("registry: duplicate public key");
    by_id_[keys.id] = Entry{keys.public_key, seal(keys.public_key, keys.secret_key)};
    by_public_key_[keys.public_key] = keys.id;
}

std::optional<Bytes> KeyRegistry::unseal(ByteView public_key) const {
    auto it = by_public_key_.find(Bytes(public_key.begin(), public_key.end()));
    if (it == by_public_key_.end()) return std::nullopt;
    const Entry& e = by_id_.at(it->second);
    return seal(e.public_key, e.sealed_secret);  // xor pad is its own inverse
}

std::optional<Bytes> KeyRegistry::public_key_of(WatchtowerId id) const {
    auto it = by_id_.find(id);
    if (it == by_id_.end()) return std::nullopt;
    return it->second.public_key;
}

std::string KeyRegistry::serialize() const {
    std::ostringstream out;
    for (const auto& [id, e] : by_id_) {
        out << id << ' ' << to_hex(e.public_key) << ' ' << to_hex(e.sealed_secret) << '\n';
    }
    return out.str();
}

KeyRegistry KeyRegistry::deserialize(std::string_view text, std::uint64_t sealing_seed) {
    KeyRegistry reg(sealing_seed);
    std::istringstream in{std::string(text)};
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream fields(line);
        WatchtowerId id = 0;
        std::string pk_hex, sealed_hex;
        if (!(fields >> id >> pk_hex >> sealed_hex)) throw std::invalid_argument("registry: malformed record: " + line);
        Bytes pk = from_hex(pk_hex);
        KeyPair kp{id, pk, reg.seal(pk, from_hex(sealed_hex))};
        reg.enroll(kp);
    }
    return reg;
}

PoDProof vrf_eval(ByteView secret_key, ByteView input) {
    if (secret_key.size() != kKeySize) throw std::invalid_argument("vrf: malformed secret key");
    Bytes pk = derive_public_key(secret_key);
    Digest gamma = gamma_of(secret_key, input);
    PoDProof proof;
    proof.input_commitment = sha256(input);
    proof.d = normalize_digest(gamma);
    Digest tag = binding_tag(pk, proof.input_commitment, gamma);
    proof.pi.reserve(2 * Digest::kSize);
    proof.pi.insert(proof.pi.end(), gamma.bytes.begin(), gamma.bytes.end());
    proof.pi.insert(proof.pi.end(), tag.bytes.begin(), tag.bytes.end());
    return proof;
}

bool vrf_verify(const KeyRegistry& registry, ByteView public_key, const PoDProof& proof, ByteView input) {
    if (proof.pi.size() != 2 * Digest::kSize) return false;
    if (!(proof.d >= 0.0 && proof.d < 1.0)) return false;
    Digest commitment = sha256(input);
    if (commitment != proof.input_commitment) return false;
    auto secret = registry.unseal(public_key);
    if (!secret) return false;

    Digest gamma;
    std::copy_n(proof.pi.begin(), Digest::kSize, gamma.bytes.begin());
    if (gamma != gamma_of(*secret, input)) return false;
    if (proof.d != normalize_digest(gamma)) return false;

    Digest tag;
    std::copy_n(proof.pi.begin() + Digest::kSize, Digest::kSize, tag.bytes.begin());
    return tag == binding_tag(public_key, commitment, gamma);
}

}  // namespace pod
