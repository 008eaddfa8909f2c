#include "pod/crypto.hpp"

#include <openssl/evp.h>

#include <cmath>
#include <stdexcept>

namespace pod {

namespace {

EVP_MD_CTX* ctx_of(void* p) { return static_cast<EVP_MD_CTX*>(p); }

int hex_value(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}

}  // namespace

Sha256::Sha256() : ctx_(EVP_MD_CTX_new()) {
    if (ctx_ == nullptr || EVP_DigestInit_ex(ctx_of(ctx_), EVP_sha256(), nullptr) != 1) {
        throw std::runtime_error("sha256: context init failed");
    }
}

Sha256::~Sha256() { EVP_MD_CTX_free(ctx_of(ctx_)); }

Sha256& Sha256::update(ByteView data) {
    if (!data.empty()) EVP_DigestUpdate(ctx_of(ctx_), data.data(), data.size());
    return *this;
}

Sha256& Sha256::update(std::uint8_t byte) { return update(ByteView{&byte, 1}); }

Sha256& Sha256::update(std::string_view text) { return update(as_bytes(text)); }

Digest Sha256::finish() {
    Digest out;
    unsigned int len = 0;
    EVP_DigestFinal_ex(ctx_of(ctx_), out.bytes.data(), &len);
    return out;
}

Digest sha256(ByteView data) { return Sha256{}.update(data).finish(); }

Digest sha256(std::string_view text) { return sha256(as_bytes(text)); }

std::string to_hex(ByteView data) {
    static constexpr char kDigits[] = "0123456789abcdef";
    std::string out;
    out.reserve(data.size() * 2);
    for (auto b : data) {
        out.push_back(kDigits[b >> 4]);
        out.push_back(kDigits[b & 0x0f]);
    }
    return out;
}

Bytes from_hex(std::string_view hex) {
    if (hex.size() % 2 != 0) throw std::invalid_argument("hex: odd length");
    Bytes out(hex.size() / 2);
    for (std::size_t i = 0; i < out.size(); ++i) {
        int hi = hex_value(hex[2 * i]);
        int lo = hex_value(hex[2 * i + 1]);
        if (hi < 0 || lo < 0) throw std::invalid_argument("hex: invalid digit");
        out[i] = static_cast<std::uint8_t>((hi << 4) | lo);
    }
    return out;
}

std::string Digest::hex() const { return to_hex(view()); }

Digest Digest::from_hex(std::string_view hex) {
    auto raw = pod::from_hex(hex);
    if (raw.size() != kSize) throw std::invalid_argument("digest: expected 32 bytes");
    Digest d;
    std::copy(raw.begin(), raw.end(), d.bytes.begin());
    return d;
}

Bytes concat(const Digest& a, const Digest& b) {
    Bytes out;
    out.reserve(2 * Digest::kSize);
    out.insert(out.end(), a.bytes.begin(), a.bytes.end());
    out.insert(out.end(), b.bytes.begin(), b.bytes.end());
    return out;
}

double normalize_digest(const Digest& d) {
    std::uint64_t u = 0;
    for (int i = 0; i < 8; ++i) u = (u << 8) | d.bytes[i];
    return std::ldexp(static_cast<double>(u >> 11), -53);
}

}  // namespace pod
