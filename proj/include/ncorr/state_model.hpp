// state_model.hpp: truncated Fock-space density matrices for prepared fields.
//
// Multimode states are stored in the tensor-product Fock basis. Mode 0 is the
// most significant factor of the Kronecker product, so for dims (d_0, …, d_{k-1})
// the flat index of |n_0, …, n_{k-1}⟩ is ((n_0·d_1 + n_1)·d_2 + …) + n_{k-1}.

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ncorr/errors.hpp"

namespace ncorr {

using cplx = std::complex<double>;

struct ModeCutoff {
    std::size_t dim = 2;  // Fock states 0..dim-1 retained

    explicit ModeCutoff(std::size_t d) : dim(d) {
        if (d < 2) throw invalid_parameter("ModeCutoff: dim must be >= 2, got " + std::to_string(d));
    }
};

class TruncatedState {
public:
    // Wraps an arbitrary matrix; only the shape is checked. Physical
    // admissibility is reported by validate().
    static TruncatedState from_matrix(std::vector<std::size_t> dims, Eigen::MatrixXcd rho) {
        if (dims.empty()) throw invalid_argument("TruncatedState: at least one mode required");
        std::size_t total = 1;
        for (auto d : dims) {
            if (d < 2) throw invalid_parameter("TruncatedState: every mode cutoff must be >= 2");
            total *= d;
        }
        if (rho.rows() != static_cast<Eigen::Index>(total) || rho.cols() != static_cast<Eigen::Index>(total)) {
            throw invalid_argument("TruncatedState: density matrix side " + std::to_string(rho.rows()) + "x" +
                                   std::to_string(rho.cols()) + " does not match product of cutoffs " +
                                   std::to_string(total));
        }
        return TruncatedState(std::move(dims), std::move(rho));
    }

    std::size_t mode_count() const noexcept { return dims_.size(); }
    const std::vector<std::size_t>& dims() const noexcept { return dims_; }
    std::size_t total_dim() const noexcept { return static_cast<std::size_t>(rho_.rows()); }
    const Eigen::MatrixXcd& rho() const noexcept { return rho_; }

    // Photon-number distribution of a single-mode state (diagonal of rho).
    std::vector<double> populations() const {
        std::vector<double> p(total_dim());
        for (std::size_t i = 0; i < p.size(); ++i) p[i] = rho_(i, i).real();
        return p;
    }

private:
    TruncatedState(std::vector<std::size_t> dims, Eigen::MatrixXcd rho)
        : dims_(std::move(dims)), rho_(std::move(rho)) {}

    std::vector<std::size_t> dims_;
    Eigen::MatrixXcd rho_;
};

namespace detail {

inline TruncatedState pure_state(std::size_t dim, Eigen::VectorXcd amps) {
    const double norm = amps.norm();
    amps /= norm;
    return TruncatedState::from_matrix({dim}, amps * amps.adjoint());
}

}  // namespace detail

inline TruncatedState make_fock(std::size_t n, ModeCutoff cutoff) {
    if (n >= cutoff.dim) {
        throw cutoff_exceeded("make_fock: n = " + std::to_string(n) + " does not fit cutoff dim " +
                              std::to_string(cutoff.dim));
    }
    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(cutoff.dim, cutoff.dim);
    rho(n, n) = 1.0;
    return TruncatedState::from_matrix({cutoff.dim}, std::move(rho));
}

inline TruncatedState make_vacuum(ModeCutoff cutoff) { return make_fock(0, cutoff); }

// Coherent state |α⟩ truncated and renormalized. Requires |α|² ≤ dim/4.
inline TruncatedState make_coherent(cplx alpha, ModeCutoff cutoff) {
    const double mean = std::norm(alpha);
    if (mean > static_cast<double>(cutoff.dim) / 4.0) {
        const auto needed = static_cast<std::size_t>(std::ceil(4.0 * mean));
        throw truncation_risk("make_coherent: |alpha|^2 = " + std::to_string(mean) + " needs dim >= " +
                              std::to_string(needed) + ", got " + std::to_string(cutoff.dim));
    }
    Eigen::VectorXcd amps(cutoff.dim);
    amps(0) = std::exp(-0.5 * mean);
    for (std::size_t n = 1; n < cutoff.dim; ++n) {
        amps(n) = amps(n - 1) * alpha / std::sqrt(static_cast<double>(n));
    }
    return detail::pure_state(cutoff.dim, std::move(amps));
}

// Thermal state with geometric photon statistics p_n ∝ (n̄/(1+n̄))^n.
inline TruncatedState make_thermal(double nbar, ModeCutoff cutoff) {
    if (!(nbar >= 0.0) || !std::isfinite(nbar)) {
        throw invalid_parameter("make_thermal: nbar must be a finite value >= 0");
    }
    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(cutoff.dim, cutoff.dim);
    if (nbar == 0.0) {
        rho(0, 0) = 1.0;
        return TruncatedState::from_matrix({cutoff.dim}, std::move(rho));
    }
    const double ratio = nbar / (1.0 + nbar);
    std::vector<double> p(cutoff.dim);
    p[0] = 1.0;
    for (std::size_t n = 1; n < cutoff.dim; ++n) p[n] = p[n - 1] * ratio;
    const double z = std::accumulate(p.begin(), p.end(), 0.0);
    for (std::size_t n = 0; n < cutoff.dim; ++n) rho(n, n) = p[n] / z;
    return TruncatedState::from_matrix({cutoff.dim}, std::move(rho));
}

// Squeezed vacuum S(ξ)|0⟩ with S(ξ) = exp[(ξ* a² − ξ a†²)/2], ξ = r e^{iφ}.
// Then ⟨a²⟩ = −e^{iφ} sinh r cosh r. Requires sinh² r ≤ dim/8.
inline TruncatedState make_squeezed(double r, double phi, ModeCutoff cutoff) {
    if (!(r >= 0.0) || !std::isfinite(r) || !std::isfinite(phi)) {
        throw invalid_parameter("make_squeezed: r must be finite and >= 0, phi finite");
    }
    const double sh2 = std::sinh(r) * std::sinh(r);
    if (sh2 > static_cast<double>(cutoff.dim) / 8.0) {
        const auto needed = static_cast<std::size_t>(std::ceil(8.0 * sh2));
        throw truncation_risk("make_squeezed: sinh^2(r) = " + std::to_string(sh2) + " needs dim >= " +
                              std::to_string(needed) + ", got " + std::to_string(cutoff.dim));
    }
    const cplx ratio = -std::polar(std::tanh(r), phi);
    Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(cutoff.dim);
    amps(0) = 1.0 / std::sqrt(std::cosh(r));
    // c_{2n+2} = c_{2n} · (−e^{iφ} tanh r) · sqrt((2n+1)/(2n+2))
    for (std::size_t n = 2; n < cutoff.dim; n += 2) {
        amps(n) = amps(n - 2) * ratio * std::sqrt(static_cast<double>(n - 1) / static_cast<double>(n));
    }
    return detail::pure_state(cutoff.dim, std::move(amps));
}

// Kronecker product in list order.
inline TruncatedState tensor(std::span<const TruncatedState> states) {
    if (states.empty()) throw invalid_argument("tensor: empty state list");
    std::vector<std::size_t> dims = states.front().dims();
    Eigen::MatrixXcd rho = states.front().rho();
    for (std::size_t s = 1; s < states.size(); ++s) {
        const auto& b = states[s].rho();
        Eigen::MatrixXcd out(rho.rows() * b.rows(), rho.cols() * b.cols());
        for (Eigen::Index i = 0; i < rho.rows(); ++i) {
            for (Eigen::Index j = 0; j < rho.cols(); ++j) {
                out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = rho(i, j) * b;
            }
        }
        rho = std::move(out);
        dims.insert(dims.end(), states[s].dims().begin(), states[s].dims().end());
    }
    return TruncatedState::from_matrix(std::move(dims), std::move(rho));
}

inline TruncatedState tensor(std::initializer_list<TruncatedState> states) {
    return tensor(std::span<const TruncatedState>(states.begin(), states.size()));
}

// Classical mixture Σ w_j ρ_j over states sharing one mode layout.
inline TruncatedState mix(std::span<const double> weights, std::span<const TruncatedState> states) {
    if (states.empty() || weights.size() != states.size()) {
        throw invalid_argument("mix: need one weight per state and at least one state");
    }
    double sum = 0.0;
    for (double w : weights) {
        if (!(w >= 0.0)) throw invalid_parameter("mix: weights must be nonnegative");
        sum += w;
    }
    if (std::abs(sum - 1.0) > 1e-12) throw invalid_parameter("mix: weights must sum to 1 within 1e-12");
    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(states[0].rho().rows(), states[0].rho().cols());
    for (std::size_t j = 0; j < states.size(); ++j) {
        if (states[j].dims() != states[0].dims()) throw invalid_argument("mix: mode layouts differ");
        rho += weights[j] * states[j].rho();
    }
    return TruncatedState::from_matrix(states[0].dims(), std::move(rho));
}

struct ValidationReport {
    double hermiticity_deviation = 0.0;  // max |ρ_ij − conj(ρ_ji)|
    double trace_deviation = 0.0;        // |tr ρ − 1|
    double min_eigenvalue = 0.0;         // of the Hermitian part
    bool hermitian = false;
    bool unit_trace = false;
    bool positive = false;

    bool ok() const noexcept { return hermitian && unit_trace && positive; }
};

inline constexpr double kHermiticityTol = 1e-12;
inline constexpr double kTraceTol = 1e-9;
inline constexpr double kPositivityTol = 1e-9;

inline ValidationReport validate(const TruncatedState& state) {
    const auto& rho = state.rho();
    ValidationReport r;
    r.hermiticity_deviation = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
    r.trace_deviation = std::abs(rho.trace() - cplx(1.0, 0.0));
    const Eigen::MatrixXcd herm = 0.5 * (rho + rho.adjoint());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(herm, Eigen::EigenvaluesOnly);
    r.min_eigenvalue = es.eigenvalues().minCoeff();
    r.hermitian = r.hermiticity_deviation <= kHermiticityTol;
    r.unit_trace = r.trace_deviation <= kTraceTol;
    r.positive = r.min_eigenvalue >= -kPositivityTol;
    return r;
}

}  // namespace ncorr
