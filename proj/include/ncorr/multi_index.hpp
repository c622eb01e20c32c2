// multi_index.hpp: per-point exponent pairs indexing normally ordered monomials.
//
// A MultiIndex of length k stands for the monomial
//   [E⁻(1)]^{n_1} … [E⁻(k)]^{n_k} [E⁺(k)]^{m_k} … [E⁺(1)]^{m_1}
// where n_i counts creation (negative-frequency) factors and m_i counts
// annihilation (positive-frequency) factors at point i.

#pragma once

#include <compare>
#include <cstddef>
#include <initializer_list>
#include <numeric>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "ncorr/errors.hpp"

namespace ncorr {

struct ExponentPair {
    unsigned creation = 0;      // power of E⁻
    unsigned annihilation = 0;  // power of E⁺

    constexpr unsigned degree() const noexcept { return creation + annihilation; }
    constexpr ExponentPair swapped() const noexcept { return {annihilation, creation}; }

    friend constexpr auto operator<=>(const ExponentPair&, const ExponentPair&) = default;
};

class MultiIndex {
public:
    MultiIndex() = default;

    explicit MultiIndex(std::size_t points) : pairs_(points) {
        if (points == 0) throw invalid_argument("MultiIndex: at least one point required");
    }

    MultiIndex(std::initializer_list<ExponentPair> pairs) : pairs_(pairs) {
        if (pairs_.empty()) throw invalid_argument("MultiIndex: at least one point required");
    }

    explicit MultiIndex(std::vector<ExponentPair> pairs) : pairs_(std::move(pairs)) {
        if (pairs_.empty()) throw invalid_argument("MultiIndex: at least one point required");
    }

    // Build from a flat list (n_1, m_1, n_2, m_2, ...).
    static MultiIndex from_flat(const std::vector<unsigned>& flat) {
        if (flat.empty() || flat.size() % 2 != 0) {
            throw invalid_argument("MultiIndex: flat exponent list must have even, nonzero length");
        }
        std::vector<ExponentPair> pairs(flat.size() / 2);
        for (std::size_t i = 0; i < pairs.size(); ++i) pairs[i] = {flat[2 * i], flat[2 * i + 1]};
        return MultiIndex(std::move(pairs));
    }

    std::size_t points() const noexcept { return pairs_.size(); }
    const ExponentPair& operator[](std::size_t i) const { return pairs_.at(i); }
    ExponentPair& operator[](std::size_t i) { return pairs_.at(i); }
    const std::vector<ExponentPair>& pairs() const noexcept { return pairs_; }

    unsigned total_degree() const noexcept {
        return std::accumulate(pairs_.begin(), pairs_.end(), 0u,
                               [](unsigned acc, const ExponentPair& p) { return acc + p.degree(); });
    }

    bool is_zero() const noexcept { return total_degree() == 0; }

    // Index of the adjoint monomial: every (n_i, m_i) becomes (m_i, n_i).
    MultiIndex swapped() const {
        MultiIndex out = *this;
        for (auto& p : out.pairs_) p = p.swapped();
        return out;
    }

    std::vector<unsigned> flat() const {
        std::vector<unsigned> out;
        out.reserve(2 * pairs_.size());
        for (const auto& p : pairs_) {
            out.push_back(p.creation);
            out.push_back(p.annihilation);
        }
        return out;
    }

    // Adds creation/annihilation powers at one point (used to merge coincident labels).
    MultiIndex& add(std::size_t point, unsigned creation, unsigned annihilation) {
        auto& p = pairs_.at(point);
        p.creation += creation;
        p.annihilation += annihilation;
        return *this;
    }

    std::string str() const {
        std::string s = "(";
        for (std::size_t i = 0; i < pairs_.size(); ++i) {
            if (i) s += "; ";
            s += std::to_string(pairs_[i].creation) + "," + std::to_string(pairs_[i].annihilation);
        }
        return s + ")";
    }

    friend auto operator<=>(const MultiIndex&, const MultiIndex&) = default;
    friend bool operator==(const MultiIndex&, const MultiIndex&) = default;

private:
    std::vector<ExponentPair> pairs_;
};

// Combined index of the quadratic form: row (p, q) against column (n, m) gives
// creation powers n_i + q_i and annihilation powers m_i + p_i.
inline MultiIndex combine(const MultiIndex& row, const MultiIndex& col) {
    if (row.points() != col.points()) throw invalid_argument("combine: point counts differ");
    std::vector<ExponentPair> out(row.points());
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i].creation = col[i].creation + row[i].annihilation;
        out[i].annihilation = col[i].annihilation + row[i].creation;
    }
    return MultiIndex(std::move(out));
}

inline std::ostream& operator<<(std::ostream& os, const MultiIndex& idx) { return os << idx.str(); }

}  // namespace ncorr
