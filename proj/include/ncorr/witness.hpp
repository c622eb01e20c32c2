// witness.hpp: quadratic-form (moment) matrices and their positivity tests.
//
// For f = Σ c_X X over an operator basis {X}, the ordered expectation
// ⟨∘∘ f† f ∘∘⟩ is the Hermitian form c† W c with
//   W[row (p,q)][col (n,m)] = ⟨∘∘ ∏ E⁻^{n_i+q_i} ∏ E⁺^{m_i+p_i} ∘∘⟩.
// Any classical field keeps W positive semidefinite; a negative principal
// minor or eigenvalue certifies nonclassical correlations.

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "ncorr/errors.hpp"
#include "ncorr/multi_index.hpp"
#include "ncorr/provider.hpp"

namespace ncorr {

using cplx = std::complex<double>;

struct Tolerances {
    double eps_rel = 1e-9;              // minors / eigenvalues, relative to scale
    double eps_abs = 1e-9;              // inequality criteria, times max(1, |lhs|, |rhs|)
    std::uint64_t max_subsets = 1'000'000;  // principal-minor enumeration budget
};

// ------------------------------- basis -------------------------------------

class OperatorBasis {
public:
    OperatorBasis() = default;

    explicit OperatorBasis(std::vector<MultiIndex> entries) : entries_(std::move(entries)) {
        if (entries_.empty()) throw invalid_argument("OperatorBasis: empty basis");
        const std::size_t k = entries_.front().points();
        if (!entries_.front().is_zero()) throw invalid_argument("OperatorBasis: first entry must be the all-zero index");
        for (std::size_t i = 0; i < entries_.size(); ++i) {
            if (entries_[i].points() != k) throw invalid_argument("OperatorBasis: entries disagree on point count");
            for (std::size_t j = 0; j < i; ++j) {
                if (entries_[i] == entries_[j]) {
                    throw invalid_argument("OperatorBasis: duplicate entry " + entries_[i].str());
                }
            }
        }
    }

    std::size_t size() const noexcept { return entries_.size(); }
    std::size_t points() const noexcept { return entries_.empty() ? 0 : entries_.front().points(); }
    const MultiIndex& operator[](std::size_t i) const { return entries_.at(i); }
    const std::vector<MultiIndex>& entries() const noexcept { return entries_; }

    unsigned max_degree() const noexcept {
        unsigned d = 0;
        for (const auto& e : entries_) d = std::max(d, e.total_degree());
        return d;
    }

private:
    std::vector<MultiIndex> entries_;
};

// All indices of total degree ≤ max_degree in graded-lexicographic order:
// ascending degree, then descending on the flat vector (n_1, m_1, …, n_k, m_k).
inline OperatorBasis enumerate_basis(std::size_t k, unsigned max_degree) {
    if (k == 0) throw invalid_argument("enumerate_basis: k must be >= 1");
    if (max_degree == 0) throw invalid_argument("enumerate_basis: max_degree must be >= 1");
    std::vector<std::vector<unsigned>> flats;
    std::vector<unsigned> cur(2 * k, 0);
    std::function<void(std::size_t, unsigned)> rec = [&](std::size_t pos, unsigned budget) {
        if (pos == cur.size()) {
            flats.push_back(cur);
            return;
        }
        for (unsigned e = 0; e <= budget; ++e) {
            cur[pos] = e;
            rec(pos + 1, budget - e);
        }
        cur[pos] = 0;
    };
    rec(0, max_degree);
    auto degree = [](const std::vector<unsigned>& f) {
        unsigned s = 0;
        for (auto e : f) s += e;
        return s;
    };
    std::sort(flats.begin(), flats.end(), [&](const auto& a, const auto& b) {
        const unsigned da = degree(a), db = degree(b);
        if (da != db) return da < db;
        return a > b;
    });
    std::vector<MultiIndex> entries;
    entries.reserve(flats.size());
    for (const auto& f : flats) entries.push_back(MultiIndex::from_flat(f));
    return OperatorBasis(std::move(entries));
}

// ------------------------------ matrix -------------------------------------

struct WitnessMatrix {
    OperatorBasis basis;
    Eigen::MatrixXcd entries;              // Hermitian-symmetrized
    double hermiticity_deviation = 0.0;    // max |W − W†| / max(|W|_max, tiny), before symmetrization
};

namespace detail {

template <class E>
[[noreturn]] void rethrow_with_index(const E& e, const MultiIndex& idx) {
    throw E(std::string(e.what()) + " [while evaluating index " + idx.str() + "]");
}

template <CorrelationProvider P>
cplx evaluate_annotated(const P& provider, const MultiIndex& idx) {
    try {
        return provider.evaluate(idx);
    } catch (const truncation_risk& e) {
        rethrow_with_index(e, idx);
    } catch (const cutoff_exceeded& e) {
        rethrow_with_index(e, idx);
    } catch (const invalid_parameter& e) {
        rethrow_with_index(e, idx);
    } catch (const invalid_argument& e) {
        rethrow_with_index(e, idx);
    }
}

}  // namespace detail

template <CorrelationProvider P>
WitnessMatrix build_witness_matrix(const P& provider, const OperatorBasis& basis) {
    if (provider.points() != basis.points()) {
        throw invalid_argument("build_witness_matrix: provider has " + std::to_string(provider.points()) +
                               " points, basis has " + std::to_string(basis.points()));
    }
    const auto n = static_cast<Eigen::Index>(basis.size());
    Eigen::MatrixXcd raw(n, n);
    for (Eigen::Index r = 0; r < n; ++r) {
        for (Eigen::Index c = 0; c < n; ++c) {
            raw(r, c) = detail::evaluate_annotated(provider, combine(basis[r], basis[c]));
        }
    }
    WitnessMatrix w;
    w.basis = basis;
    const double big = raw.cwiseAbs().maxCoeff();
    const double dev = (raw - raw.adjoint()).cwiseAbs().maxCoeff();
    w.hermiticity_deviation = big > 0.0 ? dev / big : dev;
    w.entries = 0.5 * (raw + raw.adjoint());
    return w;
}

// ---------------------------- positivity -----------------------------------

struct Eigenpair {
    double value = 0.0;
    Eigen::VectorXcd vector;  // coefficients c of the witnessing operator f
    double norm = 0.0;        // spectral norm max |λ|
};

inline Eigenpair min_eigenpair(const Eigen::MatrixXcd& m) {
    const Eigen::MatrixXcd herm = 0.5 * (m + m.adjoint());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(herm);
    if (es.info() != Eigen::Success) throw std::runtime_error("min_eigenpair: eigensolver failed");
    Eigenpair out;
    out.value = es.eigenvalues()(0);
    out.vector = es.eigenvectors().col(0);
    out.norm = es.eigenvalues().cwiseAbs().maxCoeff();
    return out;
}

inline double min_eigenvalue(const WitnessMatrix& w) { return min_eigenpair(w.entries).value; }

struct Minor {
    std::vector<std::size_t> subset;  // rows == cols
    double determinant = 0.0;
    double scale = 0.0;       // Hadamard bound ∏ ‖row‖₂ of the submatrix
    double normalized = 0.0;  // determinant / scale (0 when scale vanishes)
    std::size_t order() const noexcept { return subset.size(); }
};

enum class Verdict { classical_consistent, nonclassical };

inline std::string verdict_label(Verdict v, unsigned degree) {
    return v == Verdict::nonclassical ? std::string("nonclassical")
                                      : "no violation found up to degree " + std::to_string(degree);
}

struct MinorReport {
    std::vector<Minor> minors;
    double min_eigenvalue = 0.0;
    double eigen_norm = 0.0;
    Eigen::VectorXcd witness_vector;
    double margin = 0.0;  // most negative of normalized minors and λ_min / norm
    double eps_rel = 0.0;
    unsigned basis_degree = 0;
    bool minors_negative = false;
    bool eigenvalue_negative = false;
    Verdict verdict = Verdict::classical_consistent;

    std::string label() const { return verdict_label(verdict, basis_degree); }
};

// Determinant of a square submatrix by partial-pivot LU.
inline cplx determinant(const Eigen::MatrixXcd& m) {
    if (m.rows() == 0) return 1.0;
    if (m.rows() == 1) return m(0, 0);
    if (m.rows() == 2) return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
    return m.partialPivLu().determinant();
}

inline double hadamard_scale(const Eigen::MatrixXcd& m) {
    double s = 1.0;
    for (Eigen::Index i = 0; i < m.rows(); ++i) s *= m.row(i).norm();
    return s;
}

inline std::uint64_t subset_count(std::size_t n, std::size_t max_order) {
    std::uint64_t total = 0, binom = 1;
    for (std::size_t k = 1; k <= max_order; ++k) {
        binom = binom * (n - k + 1) / k;
        total += binom;
    }
    return total;
}

inline std::vector<Minor> enumerate_minors(const Eigen::MatrixXcd& herm, std::size_t max_order,
                                           const Tolerances& tol) {
    const auto n = static_cast<std::size_t>(herm.rows());
    if (max_order == 0 || max_order > n) {
        throw invalid_argument("principal_minors: max_order must lie in [1, " + std::to_string(n) + "]");
    }
    if (const auto count = subset_count(n, max_order); count > tol.max_subsets) {
        throw combinatorial_limit("principal_minors: " + std::to_string(count) + " subsets exceed limit " +
                                  std::to_string(tol.max_subsets));
    }
    std::vector<Minor> out;
    std::vector<std::size_t> subset;
    for (std::size_t order = 1; order <= max_order; ++order) {
        subset.resize(order);
        for (std::size_t i = 0; i < order; ++i) subset[i] = i;
        while (true) {
            Eigen::MatrixXcd sub(order, order);
            for (std::size_t r = 0; r < order; ++r)
                for (std::size_t c = 0; c < order; ++c) sub(r, c) = herm(subset[r], subset[c]);
            const cplx det = determinant(sub);
            Minor mi;
            mi.subset = subset;
            mi.scale = hadamard_scale(sub);
            if (std::abs(det.imag()) > 1e-10 * std::max(mi.scale, 1.0)) {
                throw std::logic_error("principal_minors: Hermitian minor has imaginary residue " +
                                       std::to_string(det.imag()));
            }
            mi.determinant = det.real();
            mi.normalized = mi.scale > 0.0 ? mi.determinant / mi.scale : 0.0;
            out.push_back(std::move(mi));
            // next combination in lexicographic order
            std::size_t i = order;
            while (i > 0 && subset[i - 1] == n - order + i - 1) --i;
            if (i == 0) break;
            ++subset[i - 1];
            for (std::size_t j = i; j < order; ++j) subset[j] = subset[j - 1] + 1;
        }
    }
    return out;
}

inline MinorReport principal_minors(const WitnessMatrix& w, std::size_t max_order, const Tolerances& tol = {}) {
    const Eigen::MatrixXcd herm = 0.5 * (w.entries + w.entries.adjoint());
    MinorReport rep;
    rep.eps_rel = tol.eps_rel;
    rep.basis_degree = w.basis.max_degree();
    rep.minors = enumerate_minors(herm, max_order, tol);
    const auto eig = min_eigenpair(herm);
    rep.min_eigenvalue = eig.value;
    rep.eigen_norm = eig.norm;
    rep.witness_vector = eig.vector;

    rep.margin = eig.norm > 0.0 ? eig.value / eig.norm : 0.0;
    for (const auto& m : rep.minors) {
        rep.margin = std::min(rep.margin, m.normalized);
        if (m.determinant < -tol.eps_rel * m.scale) rep.minors_negative = true;
    }
    rep.eigenvalue_negative = eig.value < -tol.eps_rel * eig.norm;
    rep.verdict = (rep.minors_negative || rep.eigenvalue_negative) ? Verdict::nonclassical
                                                                   : Verdict::classical_consistent;
    return rep;
}

}  // namespace ncorr
