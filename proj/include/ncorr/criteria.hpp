// criteria.hpp: named nonclassicality inequalities evaluated on any provider.
//
// Every criterion is reported as a strict inequality lhs > rhs. The verdict is
//   violated = domain_flag || lhs > rhs + threshold,
// with domain_flag = (radicand < −threshold) for criteria whose right-hand
// side is a square root; rhs is then reported as 0.
//
// Point labels index the provider's points. For state providers a label is a
// mode; repeating a label merges the exponents into that mode.

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ncorr/errors.hpp"
#include "ncorr/multi_index.hpp"
#include "ncorr/provider.hpp"
#include "ncorr/witness.hpp"

namespace ncorr {

inline constexpr double kVanishing = 1e-12;

struct CriterionResult {
    std::string id;
    double lhs = 0.0;
    double rhs = 0.0;
    std::optional<double> radicand;  // quantity under the square root, if any
    double threshold = 0.0;
    bool violated = false;
    bool domain_flag = false;
    bool trivial = false;  // both sides vanish: uninformative
    std::string note;
    std::vector<std::size_t> points;
    std::vector<std::pair<std::string, double>> inputs;
};

enum class FieldIntensityVariant { general, lowest_order, mean_intensity, full_field, multipoint };

inline std::string to_string(FieldIntensityVariant v) {
    switch (v) {
        case FieldIntensityVariant::general: return "general";
        case FieldIntensityVariant::lowest_order: return "lowest_order";
        case FieldIntensityVariant::mean_intensity: return "mean_intensity";
        case FieldIntensityVariant::full_field: return "full_field";
        case FieldIntensityVariant::multipoint: return "multipoint";
    }
    return "unknown";
}

inline std::optional<FieldIntensityVariant> parse_variant(const std::string& s) {
    for (auto v : {FieldIntensityVariant::general, FieldIntensityVariant::lowest_order,
                   FieldIntensityVariant::mean_intensity, FieldIntensityVariant::full_field,
                   FieldIntensityVariant::multipoint}) {
        if (to_string(v) == s) return v;
    }
    return std::nullopt;
}

namespace detail {

template <CorrelationProvider P>
void check_labels(const P& provider, const std::vector<std::size_t>& labels, const char* who) {
    for (auto l : labels) {
        if (l >= provider.points()) {
            throw invalid_argument(std::string(who) + ": point label " + std::to_string(l) + " out of range [0, " +
                                   std::to_string(provider.points()) + ")");
        }
    }
}

// Builds a MultiIndex over the provider's points from (label, n, m) terms.
struct IndexBuilder {
    MultiIndex idx;
    explicit IndexBuilder(std::size_t k) : idx(k) {}
    IndexBuilder& at(std::size_t label, unsigned creation, unsigned annihilation) {
        idx.add(label, creation, annihilation);
        return *this;
    }
};

template <CorrelationProvider P>
bool any_coincident(const P& provider, const std::vector<std::size_t>& labels) {
    for (std::size_t i = 0; i < labels.size(); ++i)
        for (std::size_t j = i + 1; j < labels.size(); ++j)
            if (labels[i] != labels[j] && points_coincide(provider, labels[i], labels[j])) return true;
    return false;
}

template <CorrelationProvider P>
void finalize(CriterionResult& r, const P& provider, const Tolerances& tol) {
    r.threshold = tol.eps_abs * std::max({1.0, std::abs(r.lhs), std::abs(r.rhs)});
    r.violated = r.domain_flag || r.lhs > r.rhs + r.threshold;
    if (!r.violated && std::abs(r.lhs) <= kVanishing && std::abs(r.rhs) <= kVanishing) {
        r.trivial = true;
        r.note = any_coincident(provider, r.points)
                     ? "trivial: coincident retarded times (retarded times must not become equal)"
                     : "trivial: both sides vanish";
    }
}

// rhs = sqrt(radicand), with the negative-radicand short circuit.
inline void set_root_side(CriterionResult& r, double radicand, const Tolerances& tol) {
    r.radicand = radicand;
    const double guard = tol.eps_abs * std::max(1.0, std::abs(r.lhs));
    if (radicand < -guard) {
        r.domain_flag = true;
        r.rhs = 0.0;
        r.note = "negative quantity under square root";
    } else {
        r.rhs = std::sqrt(std::max(radicand, 0.0));
    }
}

}  // namespace detail

// Second-order minor of the quadratic form for the pair of basis monomials
// A = (n, m) and B = (p, q): |W_BA|² > W_AA · W_BB.
template <CorrelationProvider P>
CriterionResult check_second_order(const P& provider, const MultiIndex& a, const MultiIndex& b,
                                   const Tolerances& tol = {}) {
    if (a.points() != provider.points() || b.points() != provider.points()) {
        throw invalid_argument("check_second_order: indices must span all provider points");
    }
    CriterionResult r;
    r.id = "second_order_minor";
    const cplx cross = provider.evaluate(combine(b, a));
    const double waa = provider.evaluate(combine(a, a)).real();
    const double wbb = provider.evaluate(combine(b, b)).real();
    r.lhs = std::norm(cross);
    r.rhs = waa * wbb;
    for (std::size_t i = 0; i < provider.points(); ++i) r.points.push_back(i);
    for (std::size_t i = 0; i < a.points(); ++i) {
        r.inputs.emplace_back("a.n" + std::to_string(i), a[i].creation);
        r.inputs.emplace_back("a.m" + std::to_string(i), a[i].annihilation);
    }
    for (std::size_t i = 0; i < b.points(); ++i) {
        r.inputs.emplace_back("b.n" + std::to_string(i), b[i].creation);
        r.inputs.emplace_back("b.m" + std::to_string(i), b[i].annihilation);
    }
    detail::finalize(r, provider, tol);
    return r;
}

// 3×3 minor for f = c₁[E⁺(1)]^m + c₂[E⁻(2)]^n + c₃:[I(3)]^p:, entries laid out
// row by row in the basis order (E⁺(1)^m, E⁻(2)^n, :I(3)^p:).
template <CorrelationProvider P>
Eigen::Matrix3cd third_order_matrix(const P& provider, unsigned m, unsigned n, unsigned p,
                                    const std::array<std::size_t, 3>& pts) {
    const std::size_t k = provider.points();
    using detail::IndexBuilder;
    auto ev = [&](IndexBuilder b) { return provider.evaluate(b.idx); };
    const auto [p1, p2, p3] = pts;
    Eigen::Matrix3cd w;
    w(0, 0) = ev(IndexBuilder(k).at(p1, m, m));
    w(0, 1) = ev(IndexBuilder(k).at(p1, m, 0).at(p2, n, 0));
    w(0, 2) = ev(IndexBuilder(k).at(p1, m, 0).at(p3, p, p));
    w(1, 0) = ev(IndexBuilder(k).at(p1, 0, m).at(p2, 0, n));
    w(1, 1) = ev(IndexBuilder(k).at(p2, n, n));
    w(1, 2) = ev(IndexBuilder(k).at(p3, p, p).at(p2, 0, n));
    w(2, 0) = ev(IndexBuilder(k).at(p1, 0, m).at(p3, p, p));
    w(2, 1) = ev(IndexBuilder(k).at(p3, p, p).at(p2, n, 0));
    w(2, 2) = ev(IndexBuilder(k).at(p3, 2 * p, 2 * p));
    return w;
}

// Negative 3×3 determinant: reported as lhs = 0 > rhs = det.
template <CorrelationProvider P>
CriterionResult check_third_order_minor(const P& provider, unsigned m, unsigned n, unsigned p,
                                        const std::array<std::size_t, 3>& pts, const Tolerances& tol = {}) {
    if (m == 0 || n == 0 || p == 0) throw invalid_argument("check_third_order_minor: m, n, p must be positive");
    detail::check_labels(provider, {pts[0], pts[1], pts[2]}, "check_third_order_minor");
    const Eigen::Matrix3cd raw = third_order_matrix(provider, m, n, p, pts);
    const Eigen::MatrixXcd herm = 0.5 * (raw + raw.adjoint());
    const double det = determinant(herm).real();
    const double scale = hadamard_scale(herm);

    CriterionResult r;
    r.id = "third_order_minor";
    r.lhs = 0.0;
    r.rhs = det;
    r.points = {pts[0], pts[1], pts[2]};
    r.inputs = {{"m", m}, {"n", n}, {"p", p}};
    r.threshold = tol.eps_rel * scale;
    r.violated = r.lhs > r.rhs + r.threshold;
    if (!r.violated && scale <= kVanishing) {
        r.trivial = true;
        r.note = detail::any_coincident(provider, r.points)
                     ? "trivial: coincident retarded times (retarded times must not become equal)"
                     : "trivial: both sides vanish";
    }
    return r;
}

// ⟨∘∘ I(1) I(2) ∘∘⟩ > sqrt(⟨:I(1)²:⟩ ⟨:I(2)²:⟩)
template <CorrelationProvider P>
CriterionResult check_antibunching(const P& provider, std::size_t a, std::size_t b, const Tolerances& tol = {}) {
    detail::check_labels(provider, {a, b}, "check_antibunching");
    const std::size_t k = provider.points();
    using detail::IndexBuilder;
    CriterionResult r;
    r.id = "antibunching";
    r.points = {a, b};
    r.lhs = provider.evaluate(IndexBuilder(k).at(a, 1, 1).at(b, 1, 1).idx).real();
    const double i1 = provider.evaluate(IndexBuilder(k).at(a, 2, 2).idx).real();
    const double i2 = provider.evaluate(IndexBuilder(k).at(b, 2, 2).idx).real();
    detail::set_root_side(r, i1 * i2, tol);
    detail::finalize(r, provider, tol);
    return r;
}

// ⟨∘∘ I(1)^N I(2)^M ∘∘⟩ > sqrt(⟨∘∘ I(1)^{2(N−n)} I(2)^{2(M−m)} ∘∘⟩ ⟨∘∘ I(1)^{2n} I(2)^{2m} ∘∘⟩)
// With n = 0, m = M this is the direct higher-order antibunching form.
template <CorrelationProvider P>
CriterionResult check_higher_order_intensity(const P& provider, unsigned N, unsigned M, unsigned n, unsigned m,
                                             std::size_t a, std::size_t b, const Tolerances& tol = {}) {
    if (n > N || m > M) throw invalid_argument("check_higher_order_intensity: requires N >= n and M >= m");
    if (N + M == 0) throw invalid_argument("check_higher_order_intensity: requires N + M >= 1");
    detail::check_labels(provider, {a, b}, "check_higher_order_intensity");
    const std::size_t k = provider.points();
    using detail::IndexBuilder;
    CriterionResult r;
    r.id = (n == 0 && m == M) ? "higher_order_antibunching" : "higher_order_intensity";
    r.points = {a, b};
    r.inputs = {{"N", N}, {"M", M}, {"n", n}, {"m", m}};
    r.lhs = provider.evaluate(IndexBuilder(k).at(a, N, N).at(b, M, M).idx).real();
    const unsigned f1 = 2 * (N - n), f2 = 2 * (M - m);
    const double left = provider.evaluate(IndexBuilder(k).at(a, f1, f1).at(b, f2, f2).idx).real();
    const double right = provider.evaluate(IndexBuilder(k).at(a, 2 * n, 2 * n).at(b, 2 * m, 2 * m).idx).real();
    detail::set_root_side(r, left * right, tol);
    detail::finalize(r, provider, tol);
    return r;
}

// ⟨∘∘ [Ê_θ(a)]^power · extra ∘∘⟩ with Ê_θ = e^{iθ}E⁻ + e^{−iθ}E⁺, by binomial expansion.
template <CorrelationProvider P>
cplx field_power_moment(const P& provider, std::size_t a, unsigned power, double phase, const MultiIndex& extra) {
    cplx sum = 0.0;
    double binom = 1.0;
    for (unsigned j = 0; j <= power; ++j) {
        MultiIndex idx = extra;
        idx.add(a, j, power - j);
        const double winding = static_cast<double>(2 * static_cast<int>(j) - static_cast<int>(power));
        sum += binom * std::polar(1.0, winding * phase) * provider.evaluate(idx);
        binom = binom * static_cast<double>(power - j) / static_cast<double>(j + 1);
    }
    return sum;
}

// Phase θ minimizing ⟨:Ê_θ²:⟩ (centered = false) or the normally ordered
// variance ⟨:(ΔÊ_θ)²:⟩ (centered = true) at one point.
template <CorrelationProvider P>
double optimal_quadrature_phase(const P& provider, std::size_t a, bool centered = false) {
    const std::size_t k = provider.points();
    cplx second = provider.evaluate(detail::IndexBuilder(k).at(a, 0, 2).idx);
    if (centered) {
        const cplx first = provider.evaluate(detail::IndexBuilder(k).at(a, 0, 1).idx);
        second -= first * first;
    }
    if (std::abs(second) == 0.0) return 0.0;
    return 0.5 * (std::arg(second) - std::numbers::pi);
}

// ⟨:Ê_θ²:⟩ − ⟨Ê_θ⟩²
template <CorrelationProvider P>
double normally_ordered_field_variance(const P& provider, std::size_t a, double phase) {
    const MultiIndex none(provider.points());
    const double mean = field_power_moment(provider, a, 1, phase, none).real();
    return field_power_moment(provider, a, 2, phase, none).real() - mean * mean;
}

struct FieldIntensityTask {
    FieldIntensityVariant variant = FieldIntensityVariant::lowest_order;
    std::vector<std::size_t> points;         // general / multipoint: all k labels; otherwise (field, intensity)
    std::vector<unsigned> field_powers;      // general: p_i
    std::vector<unsigned> intensity_powers;  // general: m_i
    std::size_t field_points = 0;            // multipoint: l
    double phase = 0.0;                      // full_field
    bool optimal_phase = false;              // full_field: choose θ minimizing ⟨:Ê_θ²:⟩
};

// |⟨∘∘ ∏ E⁻(i)^{p_i} ∏ I(i)^{m_i} ∘∘⟩| > sqrt(⟨∘∘ ∏ I(i)^{2m_i+p_i} ∘∘⟩)
template <CorrelationProvider P>
CriterionResult check_field_intensity_general(const P& provider, const std::vector<std::size_t>& pts,
                                              const std::vector<unsigned>& field_powers,
                                              const std::vector<unsigned>& intensity_powers,
                                              const Tolerances& tol = {}) {
    if (pts.empty() || field_powers.size() != pts.size() || intensity_powers.size() != pts.size()) {
        throw invalid_argument("check_field_intensity(general): need one field and one intensity power per point");
    }
    detail::check_labels(provider, pts, "check_field_intensity(general)");
    const std::size_t k = provider.points();
    detail::IndexBuilder num(k), den(k);
    CriterionResult r;
    r.id = "field_intensity.general";
    r.points = pts;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const unsigned p = field_powers[i], m = intensity_powers[i];
        num.at(pts[i], m + p, m);
        den.at(pts[i], 2 * m + p, 2 * m + p);
        r.inputs.emplace_back("p" + std::to_string(i), p);
        r.inputs.emplace_back("m" + std::to_string(i), m);
    }
    r.lhs = std::abs(provider.evaluate(num.idx));
    detail::set_root_side(r, provider.evaluate(den.idx).real(), tol);
    detail::finalize(r, provider, tol);
    return r;
}

// |⟨∘∘ E⁻(1) I(2) ∘∘⟩| > sqrt(⟨∘∘ I(1) I(2)² ∘∘⟩)
template <CorrelationProvider P>
CriterionResult check_field_intensity_lowest(const P& provider, std::size_t a, std::size_t b,
                                             const Tolerances& tol = {}) {
    auto r = check_field_intensity_general(provider, {a, b}, {1, 0}, {0, 1}, tol);
    r.id = "field_intensity.lowest_order";
    r.inputs.clear();
    return r;
}

// |⟨∘∘ E⁻(1) I(2) ∘∘⟩| > sqrt(⟨I(1)⟩ ⟨:I(2)²:⟩)
template <CorrelationProvider P>
CriterionResult check_field_intensity_mean(const P& provider, std::size_t a, std::size_t b,
                                           const Tolerances& tol = {}) {
    detail::check_labels(provider, {a, b}, "check_field_intensity(mean_intensity)");
    const std::size_t k = provider.points();
    using detail::IndexBuilder;
    CriterionResult r;
    r.id = "field_intensity.mean_intensity";
    r.points = {a, b};
    r.lhs = std::abs(provider.evaluate(IndexBuilder(k).at(a, 1, 0).at(b, 1, 1).idx));
    const double i1 = provider.evaluate(IndexBuilder(k).at(a, 1, 1).idx).real();
    const double i2 = provider.evaluate(IndexBuilder(k).at(b, 2, 2).idx).real();
    detail::set_root_side(r, i1 * i2, tol);
    detail::finalize(r, provider, tol);
    return r;
}

// |⟨∘∘ Ê_θ(1) I(2) ∘∘⟩| > sqrt(⟨:Ê_θ(1)²:⟩ ⟨:I(2)²:⟩)
template <CorrelationProvider P>
CriterionResult check_field_intensity_full(const P& provider, std::size_t a, std::size_t b, double phase,
                                           const Tolerances& tol = {}) {
    detail::check_labels(provider, {a, b}, "check_field_intensity(full_field)");
    const std::size_t k = provider.points();
    using detail::IndexBuilder;
    CriterionResult r;
    r.id = "field_intensity.full_field";
    r.points = {a, b};
    r.inputs = {{"phase", phase}};
    r.lhs = std::abs(field_power_moment(provider, a, 1, phase, IndexBuilder(k).at(b, 1, 1).idx));
    const double field_sq = field_power_moment(provider, a, 2, phase, MultiIndex(k)).real();
    const double i2 = provider.evaluate(IndexBuilder(k).at(b, 2, 2).idx).real();
    r.inputs.emplace_back("field_square", field_sq);
    detail::set_root_side(r, field_sq * i2, tol);
    if (r.domain_flag) r.note = "negative normally ordered field square under square root";
    detail::finalize(r, provider, tol);
    return r;
}

// |⟨∘∘ E⁻(1)…E⁻(l) I(l+1)…I(k) ∘∘⟩| > sqrt(⟨∘∘ I(1)…I(l) I(l+1)²…I(k)² ∘∘⟩), 1 < l < k
template <CorrelationProvider P>
CriterionResult check_field_intensity_multipoint(const P& provider, const std::vector<std::size_t>& pts,
                                                 std::size_t l, const Tolerances& tol = {}) {
    if (!(1 < l && l < pts.size())) {
        throw invalid_argument("check_field_intensity(multipoint): requires 1 < l < k, got l = " + std::to_string(l) +
                               ", k = " + std::to_string(pts.size()));
    }
    std::vector<unsigned> field(pts.size(), 0), intensity(pts.size(), 0);
    for (std::size_t i = 0; i < pts.size(); ++i) (i < l ? field[i] : intensity[i]) = 1;
    auto r = check_field_intensity_general(provider, pts, field, intensity, tol);
    r.id = "field_intensity.multipoint";
    r.inputs = {{"l", static_cast<double>(l)}};
    return r;
}

template <CorrelationProvider P>
CriterionResult check_field_intensity(const P& provider, const FieldIntensityTask& task, const Tolerances& tol = {}) {
    auto need_two = [&] {
        if (task.points.size() != 2) {
            throw invalid_argument("check_field_intensity(" + to_string(task.variant) +
                                   "): requires exactly two point labels");
        }
    };
    switch (task.variant) {
        case FieldIntensityVariant::general:
            return check_field_intensity_general(provider, task.points, task.field_powers, task.intensity_powers, tol);
        case FieldIntensityVariant::lowest_order:
            need_two();
            return check_field_intensity_lowest(provider, task.points[0], task.points[1], tol);
        case FieldIntensityVariant::mean_intensity:
            need_two();
            return check_field_intensity_mean(provider, task.points[0], task.points[1], tol);
        case FieldIntensityVariant::full_field: {
            need_two();
            detail::check_labels(provider, task.points, "check_field_intensity(full_field)");
            const double phase = task.optimal_phase ? optimal_quadrature_phase(provider, task.points[0]) : task.phase;
            auto r = check_field_intensity_full(provider, task.points[0], task.points[1], phase, tol);
            if (task.optimal_phase) r.inputs.emplace_back("optimal_phase", 1.0);
            return r;
        }
        case FieldIntensityVariant::multipoint:
            return check_field_intensity_multipoint(provider, task.points, task.field_points, tol);
    }
    throw invalid_argument("check_field_intensity: unknown variant");
}

}  // namespace ncorr
