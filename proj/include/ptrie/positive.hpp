// positive.hpp
// Binary positive numbers: the key type of every trie in this library.
//
// A positive is a nonempty bit path: xH is 1, xO(p) is 2p, xI(p) is 2p+1.
// The outermost constructor is the least significant bit, so a trie lookup
// consumes the bits from the least significant end and stops at the
// implicit leading 1.

#pragma once

#include <algorithm>
#include <bit>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <iterator>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <boost/container/small_vector.hpp>
#include <boost/multiprecision/cpp_int.hpp>

namespace ptrie {

using big_integer = boost::multiprecision::cpp_int;

/// Raised by decode_string when the bit count of a key is not a multiple of 8.
class malformed_encoding : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// One constructor of a positive, as seen by a trie walking the key.
enum class step : std::uint8_t { xH, xO, xI };

class positive {
public:
    /// The number 1 (xH).
    positive() : limbs_{1}, length_{0} {}

    static positive from_integer(std::uint64_t n)
    {
        if (n == 0) throw std::domain_error("positive: zero is not representable");
        return positive(limb_storage{n});
    }

    static positive from_integer(const big_integer& n)
    {
        if (n <= 0) throw std::domain_error("positive: value must be >= 1");
        limb_storage limbs;
        boost::multiprecision::export_bits(n, std::back_inserter(limbs), 64, false);
        return positive(std::move(limbs));
    }

    /// Little-endian 64-bit limbs; leading zero limbs are allowed.
    static positive from_limbs(std::span<const std::uint64_t> limbs)
    {
        limb_storage l(limbs.begin(), limbs.end());
        while (l.size() > 1 && l.back() == 0) l.pop_back();
        if (l.empty() || l.back() == 0) throw std::domain_error("positive: value must be >= 1");
        return positive(std::move(l));
    }

    /// Parses a decimal literal; throws std::invalid_argument on bad input.
    static positive parse(std::string_view text)
    {
        if (text.empty() || !std::all_of(text.begin(), text.end(), [](char c) { return c >= '0' && c <= '9'; }))
            throw std::invalid_argument("positive: not a decimal integer: " + std::string(text));
        return from_integer(big_integer(std::string(text)));
    }

    static positive xO(const positive& p) { return p.shifted_up(0); }
    static positive xI(const positive& p) { return p.shifted_up(1); }
    static positive xH() { return positive(); }

    big_integer to_integer() const
    {
        big_integer n;
        boost::multiprecision::import_bits(n, limbs_.begin(), limbs_.end(), 64, false);
        return n;
    }

    /// The value if it fits in 64 bits.
    std::optional<std::uint64_t> to_u64() const
    {
        if (limbs_.size() != 1) return std::nullopt;
        return limbs_[0];
    }

    std::string to_string() const { return to_integer().str(); }

    /// Number of xO/xI constructors above the terminal xH.
    std::size_t length() const { return length_; }

    /// floor(log2 v) + 1.
    std::size_t bit_length() const { return length_ + 1; }

    bool is_one() const { return length_ == 0; }

    /// The constructor found after peeling `depth` constructors off the outside.
    step at(std::size_t depth) const
    {
        if (depth >= length_) return step::xH;
        return bit(depth) ? step::xI : step::xO;
    }

    /// Bit `i` of the value, i < bit_length().
    bool bit(std::size_t i) const { return (limbs_[i / 64] >> (i % 64)) & 1u; }

    /// Strips the outermost constructor: xO p and xI p both yield p. xH has no tail.
    positive tail() const
    {
        if (is_one()) throw std::domain_error("positive: xH has no tail");
        limb_storage out(limbs_.size());
        for (std::size_t i = 0; i < limbs_.size(); ++i) {
            std::uint64_t hi = i + 1 < limbs_.size() ? limbs_[i + 1] : 0;
            out[i] = (limbs_[i] >> 1) | (hi << 63);
        }
        return positive(std::move(out));
    }

    /// Reverses the constructor sequence above xH; an involution.
    positive reverse() const
    {
        limb_storage out(limbs_.size(), 0);
        for (std::size_t i = 0; i < length_; ++i)
            if (bit(i)) set_bit(out, length_ - 1 - i);
        set_bit(out, length_);
        return positive(std::move(out));
    }

    /// Builds a positive from its constructor bits, outermost first.
    template <class BitRange>
    static positive from_path(const BitRange& bits)
    {
        std::size_t n = std::size(bits);
        limb_storage out(n / 64 + 1, 0);
        std::size_t i = 0;
        for (bool b : bits) {
            if (b) set_bit(out, i);
            ++i;
        }
        set_bit(out, n);
        return positive(std::move(out));
    }

    std::span<const std::uint64_t> limbs() const { return {limbs_.data(), limbs_.size()}; }

    friend bool operator==(const positive& a, const positive& b)
    {
        return a.length_ == b.length_ && std::equal(a.limbs_.begin(), a.limbs_.end(), b.limbs_.begin());
    }

    friend std::strong_ordering operator<=>(const positive& a, const positive& b)
    {
        if (a.length_ != b.length_) return a.length_ <=> b.length_;
        for (std::size_t i = a.limbs_.size(); i-- > 0;)
            if (a.limbs_[i] != b.limbs_[i]) return a.limbs_[i] <=> b.limbs_[i];
        return std::strong_ordering::equal;
    }

    std::size_t hash() const
    {
        std::size_t h = length_;
        for (auto l : limbs_) h = h * 0x9e3779b97f4a7c15ull ^ (l + (h >> 7));
        return h;
    }

private:
    // Little-endian 64-bit limbs of the value; the top limb is nonzero.
    using limb_storage = boost::container::small_vector<std::uint64_t, 3>;

    explicit positive(limb_storage limbs) : limbs_(std::move(limbs))
    {
        while (limbs_.size() > 1 && limbs_.back() == 0) limbs_.pop_back();
        length_ = (limbs_.size() - 1) * 64 + static_cast<std::size_t>(63 - std::countl_zero(limbs_.back()));
    }

    static void set_bit(limb_storage& limbs, std::size_t i) { limbs[i / 64] |= std::uint64_t{1} << (i % 64); }

    positive shifted_up(std::uint64_t low) const
    {
        limb_storage out(limbs_.size() + 1, 0);
        for (std::size_t i = 0; i < limbs_.size(); ++i) {
            out[i] |= limbs_[i] << 1;
            out[i + 1] = limbs_[i] >> 63;
        }
        out[0] |= low;
        return positive(std::move(out));
    }

    limb_storage limbs_;
    std::size_t length_;
};

/// Three-way comparison agreeing with numeric order.
inline std::strong_ordering compare(const positive& a, const positive& b) { return a <=> b; }

/// Encodes a byte string as a positive: byte i occupies bits 8i..8i+7,
/// least significant bit first, and the leading 1 terminates the encoding.
/// value = 2^(8n) + sum byte_i * 2^(8i).
inline positive encode_string(std::string_view s)
{
    std::size_t n = s.size();
    std::vector<std::uint64_t> limbs(n / 8 + 1, 0);
    for (std::size_t i = 0; i < n; ++i)
        limbs[i / 8] |= std::uint64_t{static_cast<unsigned char>(s[i])} << (8 * (i % 8));
    limbs[n / 8] |= std::uint64_t{1} << (8 * (n % 8));
    return positive::from_limbs(limbs);
}

/// Inverse of encode_string. Throws malformed_encoding unless length() % 8 == 0.
inline std::string decode_string(const positive& p)
{
    if (p.length() % 8 != 0)
        throw malformed_encoding("decode_string: bit count " + std::to_string(p.length()) + " is not a multiple of 8");
    std::size_t n = p.length() / 8;
    auto limbs = p.limbs();
    std::string out(n, '\0');
    for (std::size_t i = 0; i < n; ++i)
        out[i] = static_cast<char>((limbs[i / 8] >> (8 * (i % 8))) & 0xffu);
    return out;
}

} // namespace ptrie

template <>
struct std::hash<ptrie::positive> {
    std::size_t operator()(const ptrie::positive& p) const noexcept { return p.hash(); }
};
