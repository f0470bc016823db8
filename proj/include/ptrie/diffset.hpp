// diffset.hpp
// Canonical sets of positive numbers stored as gap lists: the first element
// followed by the difference from each element to the next larger one.
// {1, 4, 9, 11} is [1, 3, 5, 2]. Every gap is >= 1, so each set has exactly
// one gap list.

#pragma once

#include <algorithm>
#include <cstdint>
#include <initializer_list>
#include <iterator>
#include <span>
#include <stdexcept>
#include <vector>

#include "ptrie/positive.hpp"

namespace ptrie {

class diff_set {
public:
    diff_set() = default;

    /// Any order, duplicates allowed. Throws std::domain_error on 0.
    static diff_set of_elements(std::span<const std::uint64_t> xs)
    {
        std::vector<std::uint64_t> sorted(xs.begin(), xs.end());
        std::sort(sorted.begin(), sorted.end());
        sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
        if (!sorted.empty() && sorted.front() == 0) throw std::domain_error("diff_set: 0 is not a positive number");
        return from_sorted_unique(sorted);
    }

    static diff_set of_elements(std::initializer_list<std::uint64_t> xs)
    {
        return of_elements(std::span<const std::uint64_t>(xs.begin(), xs.size()));
    }

    /// Adopts a gap list; every gap list denotes a set. Elements must fit in
    /// 64 bits (std::overflow_error otherwise).
    static diff_set from_gaps(std::vector<positive> gaps)
    {
        std::uint64_t acc = 0;
        for (const auto& g : gaps) {
            auto v = g.to_u64();
            if (!v || acc + *v < acc) throw std::overflow_error("diff_set: element exceeds 64 bits");
            acc += *v;
        }
        diff_set s;
        s.gaps_ = std::move(gaps);
        return s;
    }

    /// Running sums of the gaps.
    std::vector<std::uint64_t> elements() const
    {
        std::vector<std::uint64_t> out;
        out.reserve(gaps_.size());
        std::uint64_t acc = 0;
        for (const auto& g : gaps_) {
            acc += *g.to_u64();
            out.push_back(acc);
        }
        return out;
    }

    bool member(std::uint64_t x) const
    {
        if (x == 0) throw std::domain_error("diff_set: 0 is not a positive number");
        std::uint64_t acc = 0;
        for (const auto& g : gaps_) {
            acc += *g.to_u64();
            if (acc == x) return true;
            if (acc > x) return false;
        }
        return false;
    }

    diff_set insert(std::uint64_t x) const
    {
        if (x == 0) throw std::domain_error("diff_set: 0 is not a positive number");
        std::vector<positive> out = gaps_;
        std::uint64_t acc = 0;
        for (std::size_t i = 0; i < gaps_.size(); ++i) {
            std::uint64_t next = acc + *gaps_[i].to_u64();
            if (next == x) return *this;
            if (next > x) {
                // x splits the gap acc..next into acc..x and x..next.
                out[i] = positive::from_integer(x - acc);
                out.insert(out.begin() + static_cast<std::ptrdiff_t>(i) + 1, positive::from_integer(next - x));
                return from_gaps(std::move(out));
            }
            acc = next;
        }
        out.push_back(positive::from_integer(x - acc));
        return from_gaps(std::move(out));
    }

    diff_set unite(const diff_set& other) const
    {
        auto a = elements();
        auto b = other.elements();
        std::vector<std::uint64_t> u;
        u.reserve(a.size() + b.size());
        std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(u));
        return from_sorted_unique(u);
    }

    const std::vector<positive>& gaps() const { return gaps_; }
    std::size_t size() const { return gaps_.size(); }
    bool empty() const { return gaps_.empty(); }

    /// Total bits needed by the stored gaps.
    std::size_t gap_bits() const
    {
        std::size_t n = 0;
        for (const auto& g : gaps_) n += g.bit_length();
        return n;
    }

    friend bool operator==(const diff_set&, const diff_set&) = default;

private:
    static diff_set from_sorted_unique(std::span<const std::uint64_t> sorted)
    {
        diff_set s;
        s.gaps_.reserve(sorted.size());
        std::uint64_t prev = 0;
        for (auto x : sorted) {
            s.gaps_.push_back(positive::from_integer(x - prev));
            prev = x;
        }
        return s;
    }

    std::vector<positive> gaps_;
};

inline diff_set unite(const diff_set& a, const diff_set& b) { return a.unite(b); }

} // namespace ptrie
