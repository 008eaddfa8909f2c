#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace pod {

using Bytes = std::vector<std::uint8_t>;
using ByteView = std::span<const std::uint8_t>;

/// 32-byte opaque hash value. Equality and ordering are byte-wise.
struct Digest {
    static constexpr std::size_t kSize = 32;
    std::array<std::uint8_t, kSize> bytes{};

    auto operator<=>(const Digest&) const = default;

    ByteView view() const { return {bytes.data(), bytes.size()}; }
    std::string hex() const;
    static Digest from_hex(std::string_view hex);
};

/// Incremental SHA-256. The hash function is fixed for the whole build.
class Sha256 {
public:
    Sha256();
    ~Sha256();
    Sha256(const Sha256&) = delete;
    Sha256& operator=(const Sha256&) = delete;

    Sha256& update(ByteView data);
    Sha256& update(std::uint8_t byte);
    Sha256& update(std::string_view text);
    Sha256& update(const Digest& d) { return update(d.view()); }
    Digest finish();

private:
    void* ctx_;
};

Digest sha256(ByteView data);
Digest sha256(std::string_view text);

std::string to_hex(ByteView data);
Bytes from_hex(std::string_view hex);

inline ByteView as_bytes(std::string_view s) {
    return {reinterpret_cast<const std::uint8_t*>(s.data()), s.size()};
}

/// Concatenation of two digests in fixed 32+32 layout, no separator.
Bytes concat(const Digest& a, const Digest& b);

/// Maps a digest to [0,1) from its leading 8 bytes read big-endian.
/// The top 53 bits are kept so the result is exact in a double and stays < 1.
double normalize_digest(const Digest& d);

}  // namespace pod
