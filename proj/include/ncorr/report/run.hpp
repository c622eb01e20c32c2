// run.hpp: provider construction and task execution.

#pragma once

#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstddef>
#include <exception>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "ncorr/atom_source.hpp"
#include "ncorr/criteria.hpp"
#include "ncorr/moments.hpp"
#include "ncorr/provider.hpp"
#include "ncorr/report/config.hpp"
#include "ncorr/state_model.hpp"
#include "ncorr/witness.hpp"

namespace ncorr::report {

inline constexpr const char* kToolName = "ncorr";
inline constexpr const char* kToolVersion = "0.1.0";

struct SeriesPoint {
    double tau = 0.0;
    std::complex<double> value;
};

struct Series {
    std::string task;  // task name or index
    std::vector<SeriesPoint> points;
};

struct AnalysisReport {
    json body;                   // everything except timing
    json timing;                 // wall-clock seconds, excluded from determinism checks
    std::vector<Series> series;  // correlation-function sweeps for CSV output
    bool provider_failed = false;
};

inline json conventions() {
    return {
        {"squeezing", "S(xi) = exp[(conj(xi) a^2 - xi adag^2)/2], xi = r exp(i phi); <a^2> = -exp(i phi) sinh(r) cosh(r)"},
        {"atom_hamiltonian", "H = -(Omega/2)(sigma_+ + sigma_-) + Delta sigma_+ sigma_-, decay Gamma sigma_- rho sigma_+"},
        {"field_normalization",
         "state: E+(i) = a_i; atom: E+(r,t) = sigma_-(t - r/c); unit prefactor, criteria are homogeneous"},
        {"field_strength", "E_theta = exp(i theta) E- + exp(-i theta) E+"},
        {"units", "Gamma = 1 sets the time unit; Omega and Delta in units of Gamma"},
        {"tensor_order", "mode 0 is the most significant Kronecker factor"},
        {"basis_order", "graded lexicographic, all-zero index first; flat exponents (n_1, m_1, ..., n_k, m_k)"},
        {"criterion_verdict", "violated = domain_flag || lhs > rhs + threshold; domain_flag = radicand < -threshold"},
        {"minor_verdict",
         "nonclassical iff some determinant < -eps_rel * scale (Hadamard row-norm bound) or min eigenvalue < -eps_rel * "
         "spectral norm"},
    };
}

inline TruncatedState build_mode(const ModeSpec& m) {
    const ModeCutoff cut(m.cutoff);
    if (m.kind == "vacuum") return make_vacuum(cut);
    if (m.kind == "fock") return make_fock(m.n, cut);
    if (m.kind == "coherent") return make_coherent(m.alpha, cut);
    if (m.kind == "thermal") return make_thermal(m.nbar, cut);
    if (m.kind == "squeezed") return make_squeezed(m.r, m.phi, cut);
    throw invalid_parameter("unknown mode kind '" + m.kind + "'");
}

inline TruncatedState build_state(const StateSpec& spec) {
    std::vector<TruncatedState> components;
    std::vector<double> weights;
    for (const auto& c : spec.components) {
        std::vector<TruncatedState> modes;
        for (const auto& m : c.modes) modes.push_back(build_mode(m));
        components.push_back(tensor(modes));
        weights.push_back(c.weight);
    }
    if (components.size() == 1) return components.front();
    return mix(weights, components);
}

inline AnyProvider build_provider(const AnalysisConfig& cfg) {
    if (cfg.is_atom()) {
        const auto& a = std::get<AtomSpec>(cfg.provider);
        return AnyProvider(as_provider(a.params, a.points));
    }
    return AnyProvider(StateProvider(build_state(std::get<StateSpec>(cfg.provider))));
}

// ----------------------------- serialization -------------------------------

inline json complex_json(std::complex<double> z) { return json::array({z.real(), z.imag()}); }

inline json to_json(const CriterionResult& r) {
    json j{{"id", r.id},
           {"lhs", r.lhs},
           {"rhs", r.rhs},
           {"threshold", r.threshold},
           {"violated", r.violated},
           {"domain_flag", r.domain_flag},
           {"trivial", r.trivial},
           {"points", r.points},
           {"verdict", r.violated ? "nonclassical" : "no violation"}};
    j["radicand"] = r.radicand ? json(*r.radicand) : json(nullptr);
    json inputs = json::object();
    for (const auto& [k, v] : r.inputs) inputs[k] = v;
    j["inputs"] = inputs;
    if (!r.note.empty()) j["note"] = r.note;
    return j;
}

inline json matrix_json(const Eigen::MatrixXcd& m) {
    json rows = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(complex_json(m(r, c)));
        rows.push_back(row);
    }
    return rows;
}

inline json to_json(const WitnessMatrix& w, const MinorReport& rep) {
    json basis = json::array();
    for (const auto& e : w.basis.entries()) basis.push_back(e.flat());
    json minors = json::array();
    for (const auto& m : rep.minors) {
        minors.push_back({{"subset", m.subset},
                          {"order", m.order()},
                          {"determinant", m.determinant},
                          {"scale", m.scale},
                          {"normalized", m.normalized},
                          {"negative", m.determinant < -rep.eps_rel * m.scale}});
    }
    json vecj = json::array();
    for (Eigen::Index i = 0; i < rep.witness_vector.size(); ++i) vecj.push_back(complex_json(rep.witness_vector(i)));
    return {{"basis", basis},
            {"matrix", matrix_json(w.entries)},
            {"hermiticity_deviation", w.hermiticity_deviation},
            {"minors", minors},
            {"min_eigenvalue", rep.min_eigenvalue},
            {"spectral_norm", rep.eigen_norm},
            {"witness_coefficients", vecj},
            {"margin", rep.margin},
            {"eps_rel", rep.eps_rel},
            {"eigenvalue_threshold", rep.eps_rel * rep.eigen_norm},
            {"minors_negative", rep.minors_negative},
            {"eigenvalue_negative", rep.eigenvalue_negative},
            {"nonclassical", rep.verdict == Verdict::nonclassical},
            {"verdict", rep.label()}};
}

// ------------------------------- execution ---------------------------------

namespace detail {

inline std::vector<double> tau_grid(const G2SweepTask& s) {
    std::vector<double> taus(s.steps);
    const double step = (s.tau_stop - s.tau_start) / static_cast<double>(s.steps - 1);
    for (std::size_t i = 0; i < s.steps; ++i) taus[i] = s.tau_start + step * static_cast<double>(i);
    taus.back() = s.tau_stop;
    return taus;
}

inline json run_task(const AnalysisConfig& cfg, const AnyProvider& provider, const TaskSpec& task,
                     std::vector<Series>& series, const std::string& label) {
    const auto& tol = cfg.tolerances;
    return std::visit(
        [&](const auto& b) -> json {
            using B = std::decay_t<decltype(b)>;
            if constexpr (std::is_same_v<B, WitnessTask>) {
                OperatorBasis basis;
                if (b.basis) {
                    std::vector<MultiIndex> entries;
                    for (const auto& f : *b.basis) entries.push_back(MultiIndex::from_flat(f));
                    basis = OperatorBasis(std::move(entries));
                } else {
                    basis = enumerate_basis(provider.points(), *b.max_degree);
                }
                const auto w = build_witness_matrix(provider, basis);
                const std::size_t order = b.max_order ? std::min(*b.max_order, basis.size()) : basis.size();
                return to_json(w, principal_minors(w, order, tol));
            } else if constexpr (std::is_same_v<B, SecondOrderTask>) {
                return to_json(check_second_order(provider, MultiIndex::from_flat(b.a), MultiIndex::from_flat(b.b), tol));
            } else if constexpr (std::is_same_v<B, ThirdOrderTask>) {
                return to_json(check_third_order_minor(provider, b.m, b.n, b.p, b.points, tol));
            } else if constexpr (std::is_same_v<B, AntibunchingTask>) {
                return to_json(check_antibunching(provider, b.a, b.b, tol));
            } else if constexpr (std::is_same_v<B, HigherOrderTask>) {
                return to_json(check_higher_order_intensity(provider, b.N, b.M, b.n, b.m, b.a, b.b, tol));
            } else if constexpr (std::is_same_v<B, FieldIntensityConfig>) {
                return to_json(check_field_intensity(provider, b.task, tol));
            } else if constexpr (std::is_same_v<B, FieldVarianceTask>) {
                const double phase = b.optimal_phase ? optimal_quadrature_phase(provider, b.point, true) : b.phase;
                const double v = normally_ordered_field_variance(provider, b.point, phase);
                const double threshold = tol.eps_abs;
                return {{"point", b.point},
                        {"phase", phase},
                        {"variance", v},
                        {"threshold", threshold},
                        {"negative", v < -threshold},
                        {"verdict", v < -threshold ? "nonclassical" : "no violation"}};
            } else if constexpr (std::is_same_v<B, G2SweepTask>) {
                const auto& a = std::get<AtomSpec>(cfg.provider);
                const auto taus = tau_grid(b);
                const auto values = g2_series(a.params, taus);
                Series s{label, {}};
                json rows = json::array();
                for (std::size_t i = 0; i < taus.size(); ++i) {
                    s.points.push_back({taus[i], values[i]});
                    rows.push_back({taus[i], values[i].real(), values[i].imag()});
                }
                series.push_back(std::move(s));
                return {{"columns", {"tau", "value_re", "value_im"}}, {"rows", rows}};
            }
        },
        task.body);
}

}  // namespace detail

inline AnalysisReport run(const AnalysisConfig& cfg) {
    using clock = std::chrono::steady_clock;
    const auto t0 = clock::now();
    AnalysisReport rep;
    rep.body["tool"] = {{"name", kToolName}, {"version", kToolVersion}};
    rep.body["conventions"] = conventions();
    rep.body["config"] = to_json(cfg);
    rep.timing["tasks_seconds"] = json::array();

    std::optional<AnyProvider> provider;
    try {
        provider.emplace(build_provider(cfg));
    } catch (const std::exception& e) {
        rep.provider_failed = true;
        rep.body["provider"] = {{"status", "error"}, {"error", e.what()}};
        rep.body["tasks"] = json::array();
        rep.timing["total_seconds"] = std::chrono::duration<double>(clock::now() - t0).count();
        return rep;
    }
    rep.body["provider"] = {{"status", "ok"}, {"kind", provider->kind()}, {"points", provider->points()}};

    json tasks = json::array();
    for (std::size_t i = 0; i < cfg.tasks.size(); ++i) {
        const auto& task = cfg.tasks[i];
        const std::string label = task.name.empty() ? "task" + std::to_string(i) : task.name;
        const auto ts = clock::now();
        json entry{{"index", i}, {"type", task.type}, {"name", label}};
        try {
            entry["result"] = detail::run_task(cfg, *provider, task, rep.series, label);
            entry["status"] = "ok";
        } catch (const std::exception& e) {
            entry["status"] = "error";
            entry["error"] = e.what();
        }
        tasks.push_back(std::move(entry));
        rep.timing["tasks_seconds"].push_back(std::chrono::duration<double>(clock::now() - ts).count());
    }
    rep.body["tasks"] = std::move(tasks);
    rep.timing["total_seconds"] = std::chrono::duration<double>(clock::now() - t0).count();
    return rep;
}

}  // namespace ncorr::report
