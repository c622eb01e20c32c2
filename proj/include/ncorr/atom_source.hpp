// atom_source.hpp: resonance fluorescence of a driven two-level atom.
//
// Conventions (ħ = 1, time unit 1/Γ):
//   H = −(Ω/2)(σ₊ + σ₋) + Δ σ₊σ₋
//   L[ρ] = −i[H, ρ] + Γ (σ₋ρσ₊ − ½{σ₊σ₋, ρ})
// Basis index 0 = |g⟩, 1 = |e⟩. Density matrices are vectorized column-major,
// so vec(AXB) = (Bᵀ ⊗ A) vec(X) and the trace functional is (1, 0, 0, 1).
// The far-field source field is E⁺(r, t) ↦ σ₋(t − r) with unit prefactor.
//
// Multi-time correlations follow the quantum regression theorem: start from
// the steady state, sweep the retarded times in ascending order, propagate
// between them, and at each time apply σ₋ from the left (an E⁺ factor) and σ₊
// from the right (an E⁻ factor).

#pragma once

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ncorr/errors.hpp"
#include "ncorr/multi_index.hpp"

namespace ncorr {

using cplx = std::complex<double>;
using Matrix2c = Eigen::Matrix2cd;
using Superop = Eigen::Matrix4cd;

struct AtomParams {
    double rabi = 0.0;      // Ω in units of Γ
    double detuning = 0.0;  // Δ in units of Γ
    double gamma = 1.0;     // Γ

    void validate() const {
        if (!(gamma > 0.0) || !std::isfinite(gamma)) throw invalid_parameter("AtomParams: gamma must be > 0");
        if (!(rabi >= 0.0) || !std::isfinite(rabi)) throw invalid_parameter("AtomParams: rabi must be finite and >= 0");
        if (!std::isfinite(detuning)) throw invalid_parameter("AtomParams: detuning must be finite");
    }
};

struct SpaceTimePoint {
    double t = 0.0;  // detection time
    double r = 0.0;  // source to detector distance over c, in time units
    double retarded() const noexcept { return t - r; }
};

// Two retarded times closer than this are treated as equal.
inline constexpr double kCoincidenceTol = 1e-12;

inline Matrix2c sigma_minus() {
    Matrix2c s = Matrix2c::Zero();
    s(0, 1) = 1.0;  // |g⟩⟨e|
    return s;
}

inline Matrix2c sigma_plus() { return sigma_minus().adjoint(); }

inline Eigen::Vector4cd vec(const Matrix2c& m) { return Eigen::Map<const Eigen::Vector4cd>(m.data()); }

inline Matrix2c unvec(const Eigen::Vector4cd& v) { return Eigen::Map<const Matrix2c>(v.data()); }

inline Superop liouvillian(const AtomParams& params) {
    params.validate();
    const Matrix2c sm = sigma_minus();
    const Matrix2c sp = sigma_plus();
    const Matrix2c ee = sp * sm;
    const Matrix2c id = Matrix2c::Identity();
    const Matrix2c h = -0.5 * params.rabi * (sp + sm) + params.detuning * ee;
    const cplx i(0.0, 1.0);
    auto kron = [](const Matrix2c& a, const Matrix2c& b) {
        Superop out;
        for (int r = 0; r < 2; ++r)
            for (int c = 0; c < 2; ++c) out.block<2, 2>(2 * r, 2 * c) = a(r, c) * b;
        return out;
    };
    Superop l = -i * (kron(id, h) - kron(h.transpose(), id));
    l += params.gamma * (kron(sp.transpose(), sm) - 0.5 * kron(id, ee) - 0.5 * kron(ee.transpose(), id));
    return l;
}

// exp(L t) via the eigendecomposition of L, or the Padé exponential when the
// eigenbasis is ill-conditioned (Ω = Γ/4 on resonance).
class Propagator {
public:
    explicit Propagator(const AtomParams& params) : generator_(liouvillian(params)) {
        Eigen::ComplexEigenSolver<Superop> es(generator_);
        if (es.info() == Eigen::Success) {
            const Superop v = es.eigenvectors();
            Eigen::JacobiSVD<Superop> svd(v);
            const auto& sv = svd.singularValues();
            if (sv(3) > 0.0 && sv(0) / sv(3) < 1e6) {
                eigenvalues_ = es.eigenvalues();
                vectors_ = v;
                inverse_ = v.inverse();
                diagonalizable_ = true;
            }
        }
    }

    const Superop& generator() const noexcept { return generator_; }
    bool uses_eigendecomposition() const noexcept { return diagonalizable_; }

    Superop transfer(double dt) const {
        if (!(dt >= 0.0)) throw invalid_parameter("propagate: dt must be >= 0");
        if (dt == 0.0) return Superop::Identity();
        if (diagonalizable_) {
            Eigen::Vector4cd e;
            for (int k = 0; k < 4; ++k) e(k) = std::exp(eigenvalues_(k) * dt);
            return vectors_ * e.asDiagonal() * inverse_;
        }
        return (generator_ * dt).exp();
    }

    Matrix2c apply(const Matrix2c& rho, double dt) const {
        if (dt == 0.0) return rho;
        return unvec(transfer(dt) * vec(rho));
    }

private:
    Superop generator_;
    Eigen::Vector4cd eigenvalues_;
    Superop vectors_;
    Superop inverse_;
    bool diagonalizable_ = false;
};

inline Matrix2c propagate(const AtomParams& params, const Matrix2c& rho, double dt) {
    if (!(dt >= 0.0)) throw invalid_parameter("propagate: dt must be >= 0");
    return Propagator(params).apply(rho, dt);
}

// Null vector of L with unit trace: solve L v = 0 with the first row replaced by tr(·) = 1.
inline Matrix2c steady_state(const AtomParams& params) {
    Superop a = liouvillian(params);
    a.row(0) << 1.0, 0.0, 0.0, 1.0;
    Eigen::Vector4cd b = Eigen::Vector4cd::Zero();
    b(0) = 1.0;
    Eigen::FullPivLU<Superop> lu(a);
    if (lu.rank() < 4) throw std::logic_error("steady_state: degenerate stationary subspace");
    Matrix2c rho = unvec(lu.solve(b));
    return 0.5 * (rho + rho.adjoint());
}

enum class Side { left, right };

struct Event {
    double time = 0.0;
    Side side = Side::left;
    std::size_t point = 0;
};

// Events of one correlator in ascending time. `vanishes` is set when some
// exponent is ≥ 2, since σ±² = 0.
struct EventList {
    std::vector<Event> events;
    bool vanishes = false;

    static EventList from(const MultiIndex& idx, const std::vector<SpaceTimePoint>& points) {
        if (idx.points() != points.size()) {
            throw invalid_argument("ordered_correlator: index has " + std::to_string(idx.points()) +
                                   " points, got " + std::to_string(points.size()) + " space-time points");
        }
        EventList out;
        for (std::size_t i = 0; i < points.size(); ++i) {
            const auto& e = idx[i];
            if (e.creation >= 2 || e.annihilation >= 2) {
                out.vanishes = true;
                out.events.clear();
                return out;
            }
            const double tr = points[i].retarded();
            if (!std::isfinite(tr)) throw invalid_parameter("ordered_correlator: retarded time must be finite");
            if (e.annihilation == 1) out.events.push_back({tr, Side::left, i});
            if (e.creation == 1) out.events.push_back({tr, Side::right, i});
        }
        std::sort(out.events.begin(), out.events.end(), [](const Event& a, const Event& b) {
            if (a.time != b.time) return a.time < b.time;
            if (a.side != b.side) return a.side < b.side;
            return a.point < b.point;
        });
        return out;
    }
};

namespace detail {

inline cplx sweep(const Propagator& prop, const Matrix2c& stationary, const EventList& list) {
    if (list.vanishes) return 0.0;
    if (list.events.empty()) return stationary.trace();
    const Matrix2c sm = sigma_minus();
    const Matrix2c sp = sigma_plus();
    Matrix2c x = stationary;
    double now = list.events.front().time;
    std::size_t i = 0;
    while (i < list.events.size()) {
        const double t = list.events[i].time;
        x = prop.apply(x, t - now);
        now = t;
        int lefts = 0, rights = 0;
        for (; i < list.events.size() && list.events[i].time - t <= kCoincidenceTol; ++i) {
            if (list.events[i].side == Side::left) {
                if (++lefts > 1) return 0.0;
                x = sm * x;
            } else {
                if (++rights > 1) return 0.0;
                x = x * sp;
            }
        }
    }
    return x.trace();
}

}  // namespace detail

inline cplx ordered_correlator(const AtomParams& params, const MultiIndex& idx,
                               const std::vector<SpaceTimePoint>& points) {
    const EventList list = EventList::from(idx, points);
    if (list.vanishes) return 0.0;
    return detail::sweep(Propagator(params), steady_state(params), list);
}

class AtomProvider {
public:
    AtomProvider(AtomParams params, std::vector<SpaceTimePoint> points)
        : params_(params),
          points_(std::move(points)),
          propagator_(std::make_shared<const Propagator>(params)),
          stationary_(steady_state(params)) {
        if (points_.empty()) throw invalid_argument("AtomProvider: at least one space-time point required");
        for (const auto& p : points_) {
            if (!std::isfinite(p.retarded())) throw invalid_parameter("AtomProvider: retarded time must be finite");
            if (p.r < 0.0) throw invalid_parameter("AtomProvider: distance r must be >= 0");
        }
    }

    std::size_t points() const noexcept { return points_.size(); }
    cplx evaluate(const MultiIndex& idx) const {
        return detail::sweep(*propagator_, stationary_, EventList::from(idx, points_));
    }
    bool coincident(std::size_t a, std::size_t b) const {
        return std::abs(points_.at(a).retarded() - points_.at(b).retarded()) <= kCoincidenceTol;
    }
    std::string kind() const { return "atom"; }

    const AtomParams& params() const noexcept { return params_; }
    const std::vector<SpaceTimePoint>& space_time_points() const noexcept { return points_; }
    const Matrix2c& stationary() const noexcept { return stationary_; }
    const Propagator& propagator() const noexcept { return *propagator_; }

private:
    AtomParams params_;
    std::vector<SpaceTimePoint> points_;
    std::shared_ptr<const Propagator> propagator_;
    Matrix2c stationary_;
};

inline AtomProvider as_provider(const AtomParams& params, std::vector<SpaceTimePoint> points) {
    return AtomProvider(params, std::move(points));
}

// Normalized intensity correlation g²(τ) = G²(τ) / ⟨σ₊σ₋⟩², one value per τ.
inline std::vector<cplx> g2_series(const AtomParams& params, const std::vector<double>& taus) {
    const auto prop = Propagator(params);
    const Matrix2c stationary = steady_state(params);
    const std::vector<SpaceTimePoint> single_point{SpaceTimePoint{0.0, 0.0}};
    const cplx pop = detail::sweep(prop, stationary, EventList::from(MultiIndex{{1, 1}}, single_point));
    std::vector<cplx> out;
    out.reserve(taus.size());
    for (double tau : taus) {
        const std::vector<SpaceTimePoint> pts{SpaceTimePoint{0.0, 0.0}, SpaceTimePoint{tau, 0.0}};
        const cplx g = detail::sweep(prop, stationary, EventList::from(MultiIndex{{1, 1}, {1, 1}}, pts));
        out.push_back(g / (pop * pop));
    }
    return out;
}

inline cplx g2(const AtomParams& params, double tau) { return g2_series(params, {tau}).front(); }

}  // namespace ncorr
