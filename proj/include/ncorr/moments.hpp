// moments.hpp: normally ordered moments of truncated states.
//
// For a prepared field every point is a mode and E⁺(i) is the annihilator a_i
// with unit prefactor. The moment at MultiIndex {(n_i, m_i)} is
//   ⟨∏ (a_i†)^{n_i} ∏ (a_i)^{m_i}⟩ = tr[ ∏ a_i^{m_i} · ρ · ∏ (a_i†)^{n_i} ].

#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "ncorr/errors.hpp"
#include "ncorr/multi_index.hpp"
#include "ncorr/provider.hpp"
#include "ncorr/state_model.hpp"

namespace ncorr {

// Embedded lowering operators I ⊗ … ⊗ a ⊗ … ⊗ I, one per mode.
class LadderSet {
public:
    using Sparse = Eigen::SparseMatrix<cplx, Eigen::RowMajor>;

    explicit LadderSet(const std::vector<std::size_t>& dims) : dims_(dims) {
        std::size_t total = 1;
        for (auto d : dims_) total *= d;
        lowering_.reserve(dims_.size());
        raising_.reserve(dims_.size());
        for (std::size_t mode = 0; mode < dims_.size(); ++mode) {
            std::size_t stride = 1;
            for (std::size_t j = mode + 1; j < dims_.size(); ++j) stride *= dims_[j];
            const std::size_t d = dims_[mode];
            std::vector<Eigen::Triplet<cplx>> trips;
            trips.reserve(total);
            for (std::size_t flat = 0; flat < total; ++flat) {
                const std::size_t n = (flat / stride) % d;
                if (n == 0) continue;
                // a|n⟩ = √n |n−1⟩
                trips.emplace_back(static_cast<int>(flat - stride), static_cast<int>(flat),
                                   cplx(std::sqrt(static_cast<double>(n)), 0.0));
            }
            Sparse a(static_cast<Eigen::Index>(total), static_cast<Eigen::Index>(total));
            a.setFromTriplets(trips.begin(), trips.end());
            raising_.emplace_back(a.adjoint());
            lowering_.push_back(std::move(a));
        }
    }

    const std::vector<std::size_t>& dims() const noexcept { return dims_; }
    const Sparse& lowering(std::size_t mode) const { return lowering_.at(mode); }
    const Sparse& raising(std::size_t mode) const { return raising_.at(mode); }

private:
    std::vector<std::size_t> dims_;
    std::vector<Sparse> lowering_;
    std::vector<Sparse> raising_;
};

namespace detail {

inline void check_moment_index(const std::vector<std::size_t>& dims, const MultiIndex& idx) {
    if (idx.points() != dims.size()) {
        throw invalid_argument("normally_ordered_moment: index has " + std::to_string(idx.points()) +
                               " points, state has " + std::to_string(dims.size()) + " modes");
    }
    for (std::size_t i = 0; i < dims.size(); ++i) {
        if (2 * idx[i].degree() > dims[i]) {
            throw truncation_risk("normally_ordered_moment: mode " + std::to_string(i) + " exponent sum " +
                                  std::to_string(idx[i].degree()) + " exceeds dim/2 for dim " +
                                  std::to_string(dims[i]) + " at index " + idx.str());
        }
    }
}

}  // namespace detail

inline cplx normally_ordered_moment(const TruncatedState& state, const LadderSet& ladders, const MultiIndex& idx) {
    if (ladders.dims() != state.dims()) throw invalid_argument("normally_ordered_moment: ladder set layout mismatch");
    detail::check_moment_index(state.dims(), idx);
    Eigen::MatrixXcd work = state.rho();
    for (std::size_t i = 0; i < idx.points(); ++i) {
        for (unsigned k = 0; k < idx[i].annihilation; ++k) work = ladders.lowering(i) * work;
    }
    for (std::size_t i = 0; i < idx.points(); ++i) {
        for (unsigned k = 0; k < idx[i].creation; ++k) work = work * ladders.raising(i);
    }
    return work.trace();
}

inline cplx normally_ordered_moment(const TruncatedState& state, const MultiIndex& idx) {
    detail::check_moment_index(state.dims(), idx);
    return normally_ordered_moment(state, LadderSet(state.dims()), idx);
}

// Every MultiIndex over `points` points with total degree ≤ max_total.
inline std::vector<MultiIndex> indices_up_to(std::size_t points, unsigned max_total) {
    std::vector<MultiIndex> out;
    std::vector<unsigned> flat(2 * points, 0);
    // odometer over the flat exponent vector, pruned by the degree budget
    std::function<void(std::size_t, unsigned)> rec = [&](std::size_t pos, unsigned budget) {
        if (pos == flat.size()) {
            out.push_back(MultiIndex::from_flat(flat));
            return;
        }
        for (unsigned e = 0; e <= budget; ++e) {
            flat[pos] = e;
            rec(pos + 1, budget - e);
        }
        flat[pos] = 0;
    };
    rec(0, max_total);
    return out;
}

using MomentTable = std::map<MultiIndex, cplx>;

// All moments needed by a witness matrix whose basis has degree ≤ max_degree.
// Each conjugate pair is computed once; the partner is stored as its conjugate.
inline MomentTable moment_table(const TruncatedState& state, unsigned max_degree) {
    if (max_degree == 0) throw invalid_argument("moment_table: max_degree must be positive");
    const LadderSet ladders(state.dims());
    MomentTable table;
    for (const auto& idx : indices_up_to(state.mode_count(), 2 * max_degree)) {
        if (table.contains(idx)) continue;
        const cplx v = normally_ordered_moment(state, ladders, idx);
        const MultiIndex adj = idx.swapped();
        if (adj == idx) {
            table.emplace(idx, cplx(v.real(), 0.0));
        } else {
            table.emplace(idx, v);
            table.emplace(adj, std::conj(v));
        }
    }
    return table;
}

// Correlation provider backed by a truncated state; point i is mode i.
class StateProvider {
public:
    explicit StateProvider(TruncatedState state)
        : state_(std::make_shared<const TruncatedState>(std::move(state))),
          ladders_(std::make_shared<const LadderSet>(state_->dims())) {}

    std::size_t points() const noexcept { return state_->mode_count(); }
    cplx evaluate(const MultiIndex& idx) const { return normally_ordered_moment(*state_, *ladders_, idx); }
    std::string kind() const { return "state"; }
    const TruncatedState& state() const noexcept { return *state_; }

private:
    std::shared_ptr<const TruncatedState> state_;
    std::shared_ptr<const LadderSet> ladders_;
};

}  // namespace ncorr
