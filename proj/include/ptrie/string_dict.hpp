// string_dict.hpp
// Dictionaries keyed by byte strings: encode_string composed with a trie.
//
// Iteration follows the order of the encoded keys, which is not
// lexicographic: shorter strings come first, and strings of equal length
// compare by their last differing byte.

#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ptrie/mapkit.hpp"
#include "ptrie/positive.hpp"

namespace ptrie {

template <mapkit::finite_map Map>
class dict {
public:
    using backing_type = Map;
    using mapped_type = typename Map::mapped_type;

    dict() = default;
    explicit dict(Map backing) : backing_(std::move(backing)) {}

    std::optional<mapped_type> get(std::string_view key) const { return backing_.get(encode_string(key)); }

    const mapped_type* find(std::string_view key) const { return backing_.find(encode_string(key)); }

    dict set(std::string_view key, const mapped_type& v) const { return dict(backing_.set(encode_string(key), v)); }

    dict remove(std::string_view key) const { return dict(backing_.remove(encode_string(key))); }

    /// Bindings in encoded-key order, keys decoded back to strings.
    std::vector<std::pair<std::string, mapped_type>> elements() const
    {
        std::vector<std::pair<std::string, mapped_type>> out;
        for (auto& [k, v] : backing_.elements()) out.emplace_back(decode_string(k), std::move(v));
        return out;
    }

    const Map& backing() const { return backing_; }

    bool structurally_equal(const dict& other) const { return backing_.structurally_equal(other.backing_); }

private:
    Map backing_;
};

} // namespace ptrie
