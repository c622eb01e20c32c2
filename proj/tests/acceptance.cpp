// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "ncorr/ncorr.hpp"
#include "ncorr/report/emit.hpp"
#include "ncorr/report/run.hpp"
#include "oracles.hpp"

using namespace ncorr;

namespace {

struct Outcome {
    bool pass = true;
    std::vector<std::string> failures;
    std::string summary;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            failures.push_back(what);
        }
    }
};

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.3e", v);
    return buf;
}

// ------------------------------------------------------------------ AC1

Outcome ac1() {
    Outcome o;
    const StateProvider p(make_fock(1, ModeCutoff(8)));
    const auto w = build_witness_matrix(p, OperatorBasis({MultiIndex{{0, 0}}, MultiIndex{{1, 1}}}));
    const auto rep = principal_minors(w, 2);
    const double det = rep.minors.back().determinant;
    o.require(std::abs(det + 1.0) <= 1e-10, "2x2 minor = " + fmt(det));
    o.require(rep.verdict == Verdict::nonclassical, "verdict " + rep.label());
    o.summary = "det = " + fmt(det) + ", verdict " + rep.label();
    return o;
}

// ------------------------------------------------------------------ AC2

constexpr std::size_t kSuiteDim = 128;

std::vector<std::pair<std::string, TruncatedState>> classical_suite() {
    const ModeCutoff cut(kSuiteDim);
    std::vector<std::pair<std::string, TruncatedState>> base{
        {"coherent 0.5", make_coherent(0.5, cut)},     {"coherent 1", make_coherent(1.0, cut)},
        {"coherent 1+i", make_coherent(cplx(1, 1), cut)}, {"thermal 0.5", make_thermal(0.5, cut)},
        {"thermal 2", make_thermal(2.0, cut)},
    };
    std::mt19937 rng(2024);
    std::uniform_real_distribution<double> u(0.05, 0.95);
    std::uniform_int_distribution<std::size_t> pick(0, base.size() - 1);
    auto out = base;
    for (int i = 0; i < 8; ++i) {
        std::size_t a = pick(rng), b = pick(rng);
        while (b == a) b = pick(rng);
        const double w = u(rng);
        const std::vector<TruncatedState> comps{base[a].second, base[b].second};
        out.emplace_back(fmt(w) + " " + base[a].first + " + " + base[b].first,
                         mix(std::vector<double>{w, 1.0 - w}, comps));
    }
    return out;
}

template <CorrelationProvider P>
std::vector<CriterionResult> all_criteria(const P& p) {
    std::vector<CriterionResult> out;
    const auto basis = enumerate_basis(1, 2);
    for (std::size_t i = 0; i < basis.size(); ++i)
        for (std::size_t j = i + 1; j < basis.size(); ++j) out.push_back(check_second_order(p, basis[i], basis[j]));
    for (unsigned m = 1; m <= 2; ++m)
        for (unsigned n = 1; n <= 2; ++n)
            for (unsigned q = 1; q <= 2; ++q) out.push_back(check_third_order_minor(p, m, n, q, {0, 0, 0}));
    out.push_back(check_antibunching(p, 0, 0));
    for (unsigned N = 1; N <= 3; ++N)
        for (unsigned M = 0; M <= 3; ++M)
            for (unsigned n = 0; n <= N; ++n)
                for (unsigned m = 0; m <= M; ++m) out.push_back(check_higher_order_intensity(p, N, M, n, m, 0, 0));
    for (unsigned f = 0; f <= 2; ++f)
        for (unsigned i = 0; i <= 2; ++i)
            if (f + i > 0) out.push_back(check_field_intensity_general(p, {0}, {f}, {i}));
    out.push_back(check_field_intensity_general(p, {0, 0}, {1, 1}, {1, 0}));
    out.push_back(check_field_intensity_lowest(p, 0, 0));
    out.push_back(check_field_intensity_mean(p, 0, 0));
    for (double phase : {0.0, 0.7, 2.1}) out.push_back(check_field_intensity_full(p, 0, 0, phase));
    FieldIntensityTask opt;
    opt.variant = FieldIntensityVariant::full_field;
    opt.points = {0, 0};
    opt.optimal_phase = true;
    out.push_back(check_field_intensity(p, opt));
    out.push_back(check_field_intensity_multipoint(p, {0, 0, 0}, 2));
    return out;
}

Outcome ac2() {
    Outcome o;
    std::size_t criteria = 0, states = 0;
    double worst = 0.0;
    for (const auto& [name, s] : classical_suite()) {
        ++states;
        const StateProvider p(s);
        const auto w = build_witness_matrix(p, enumerate_basis(1, 3));
        const auto rep = principal_minors(w, w.basis.size());
        const double ratio = rep.min_eigenvalue / rep.eigen_norm;
        worst = std::min(worst, ratio);
        o.require(rep.min_eigenvalue >= -1e-9 * rep.eigen_norm, name + ": min eigenvalue " + fmt(rep.min_eigenvalue));
        o.require(rep.verdict == Verdict::classical_consistent, name + ": witness verdict " + rep.label());
        for (const auto& r : all_criteria(p)) {
            ++criteria;
            o.require(!r.violated, name + ": " + r.id + " violated (lhs " + fmt(r.lhs) + ", rhs " + fmt(r.rhs) + ")");
        }
    }
    o.summary = std::to_string(states) + " states, " + std::to_string(criteria) +
                " criterion checks, worst lambda_min/norm = " + fmt(worst);
    return o;
}

// ------------------------------------------------------------------ AC3

Outcome ac3() {
    Outcome o;
    const double pinned = -(1.0 - std::exp(-1.0));
    const double oracle32 = oracle::optimal_normal_variance(
        oracle::moments_from_amplitudes(oracle::squeezed_amplitudes_expm(0.5, 0.0, 32)));
    const double oracle64 = oracle::optimal_normal_variance(
        oracle::moments_from_amplitudes(oracle::squeezed_amplitudes_expm(0.5, 0.0, 64)));
    o.require(std::abs(oracle32 - oracle64) < 1e-8, "oracle cutoff 32 vs 64 differ by " + fmt(oracle32 - oracle64));
    o.require(std::abs(oracle64 - pinned) < 1e-8, "oracle vs closed form differ by " + fmt(oracle64 - pinned));

    for (std::size_t dim : {32, 64}) {
        const StateProvider p(make_squeezed(0.5, 0.0, ModeCutoff(dim)));
        const double theta = optimal_quadrature_phase(p, 0, true);
        const double v = normally_ordered_field_variance(p, 0, theta);
        o.require(v < 0.0, "variance not negative at cutoff " + std::to_string(dim));
        o.require(std::abs(v - oracle64) < 1e-8,
                  "cutoff " + std::to_string(dim) + " variance off oracle by " + fmt(v - oracle64));
    }

    const StateProvider p(make_squeezed(0.5, 0.0, ModeCutoff(32)));
    FieldIntensityTask t;
    t.variant = FieldIntensityVariant::full_field;
    t.points = {0, 0};
    t.optimal_phase = true;
    const auto r = check_field_intensity(p, t);
    o.require(r.domain_flag && r.violated, "full_field task did not flag the negative radicand");
    o.summary = "variance " + fmt(oracle64) + " (closed form " + fmt(pinned) + "), full_field radicand " +
                fmt(r.radicand.value_or(0.0)) + " -> nonclassical";
    return o;
}

// ------------------------------------------------------------------ AC4

Outcome ac4() {
    Outcome o;
    double worst_oracle = 0.0, worst = 0.0;
    for (double rabi : {1.0, 6.0}) {
        const AtomParams params{rabi, 0.0, 1.0};
        // analytic form against the fine-step integrator
        const oracle::Bloch b{rabi, 0.0, 1.0};
        const auto ss = b.stationary();
        const double pop = b.excited_population();
        for (int i = 0; i <= 20; ++i) {
            const double tau = 0.5 * i;
            const double d = std::abs(b.G2(tau, ss) / (pop * pop) - oracle::g2_analytic(rabi, 1.0, tau));
            worst_oracle = std::max(worst_oracle, d);
        }
        o.require(worst_oracle < 1e-6, "analytic g2 disagrees with integrator by " + fmt(worst_oracle));

        std::vector<double> taus;
        for (int i = 0; i <= 1000; ++i) taus.push_back(0.01 * i);
        const auto series = g2_series(params, taus);
        for (std::size_t i = 0; i < taus.size(); ++i) {
            worst = std::max(worst, std::abs(series[i] - oracle::g2_analytic(rabi, 1.0, taus[i])));
        }
        o.require(worst < 1e-6, "g2 off analytic form by " + fmt(worst));
        const cplx zero = g2(params, 0.0);
        o.require(zero == cplx(0.0), "g2(0) = " + fmt(zero.real()) + " for rabi " + fmt(rabi));
        const double far = std::abs(g2(params, 20.0) - 1.0);
        o.require(far < 1e-6, "|g2(20) - 1| = " + fmt(far));
    }
    o.summary = "g2(0) = 0 exactly, max |g2 - analytic| = " + fmt(worst) + ", analytic vs integrator " +
                fmt(worst_oracle);
    return o;
}

// ------------------------------------------------------------------ AC5

Outcome ac5() {
    Outcome o;
    std::string s;
    for (double rabi : {1.0, 6.0}) {
        const auto p = as_provider({rabi, 0.0, 1.0}, {{0.0, 0.0}, {0.5, 0.0}});
        const auto r = check_antibunching(p, 0, 1);
        o.require(std::abs(r.rhs) <= 1e-12, "rhs = " + fmt(r.rhs));
        o.require(r.lhs > 0.0, "lhs = " + fmt(r.lhs));
        o.require(r.violated, "not violated for rabi " + fmt(rabi));
        s += "rabi " + fmt(rabi) + ": lhs " + fmt(r.lhs) + " rhs " + fmt(r.rhs) + "; ";
    }
    o.summary = s + "violated";
    return o;
}

// ------------------------------------------------------------------ AC6

Outcome ac6() {
    Outcome o;
    std::size_t checks = 0;
    for (double rabi : {1.0, 6.0}) {
        const auto p = as_provider({rabi, 0.0, 1.0}, {{0.0, 0.0}, {0.5, 0.0}});
        for (unsigned M = 1; M <= 2; ++M)
            for (unsigned n = 0; n <= 2; ++n)
                for (unsigned m = 0; m <= M; ++m) {
                    const auto r = check_higher_order_intensity(p, 2, M, n, m, 0, 1);
                    ++checks;
                    o.require(std::abs(r.lhs) <= 1e-12 && std::abs(r.rhs) <= 1e-12,
                              "N=2 M=" + std::to_string(M) + ": lhs " + fmt(r.lhs) + " rhs " + fmt(r.rhs));
                    o.require(!r.violated, "N=2 reported a violation");
                }
    }
    o.summary = std::to_string(checks) + " N = 2 checks: lhs = rhs = 0, no violation";
    return o;
}

// ------------------------------------------------------------------ AC7

Outcome ac7() {
    Outcome o;
    const AtomParams params{6.0, 0.0, 1.0};
    const auto p = as_provider(params, {{0.0, 0.0}, {0.4, 0.0}, {0.9, 0.0}});
    const auto r = check_field_intensity_multipoint(p, {0, 1, 2}, 2);
    o.require(std::abs(r.rhs) <= 1e-12, "rhs = " + fmt(r.rhs));
    o.require(r.lhs > 1e-6, "lhs = " + fmt(r.lhs));
    o.require(r.violated, "verdict not nonclassical");

    const oracle::Bloch b{6.0, 0.0, 1.0};
    const double ref = std::abs(b.field_field_intensity(0.0, 0.4, 0.9, b.stationary()));
    o.require(std::abs(r.lhs - ref) < 1e-8, "lhs off integrator by " + fmt(r.lhs - ref));

    std::size_t trivial = 0;
    for (const std::vector<SpaceTimePoint>& pts :
         {std::vector<SpaceTimePoint>{{0.0, 0.0}, {0.0, 0.0}, {0.9, 0.0}},
          std::vector<SpaceTimePoint>{{0.0, 0.0}, {0.4, 0.0}, {0.4, 0.0}},
          std::vector<SpaceTimePoint>{{0.0, 0.0}, {1.0, 1.0}, {0.9, 0.0}}}) {
        const auto c = check_field_intensity_multipoint(as_provider(params, pts), {0, 1, 2}, 2);
        o.require(std::abs(c.lhs) <= 1e-12 && std::abs(c.rhs) <= 1e-12, "coincident case has nonzero sides");
        o.require(c.trivial && c.note.find("coincident") != std::string::npos, "coincident case not flagged trivial");
        o.require(!c.violated, "coincident case reported a violation");
        trivial += c.trivial;
    }
    o.summary = "lhs " + fmt(r.lhs) + " (integrator " + fmt(ref) + "), rhs " + fmt(r.rhs) + "; " +
                std::to_string(trivial) + " coincident layouts flagged trivial";
    return o;
}

// ------------------------------------------------------------------ AC8

Outcome ac8() {
    Outcome o;
    // (a) ladder products vs photon-number sums, cutoff 64
    double worst_a = 0.0;
    std::vector<std::vector<double>> dists{oracle::thermal_populations(0.5, 64), oracle::thermal_populations(2.0, 64)};
    std::mt19937 rng(8);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 4; ++i) {
        std::vector<double> p(64);
        double z = 0.0;
        for (std::size_t n = 0; n < 64; ++n) z += (p[n] = u(rng) * std::exp(-0.2 * static_cast<double>(n)));
        for (auto& v : p) v /= z;
        dists.push_back(p);
    }
    for (const auto& p : dists) {
        Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(64, 64);
        for (std::size_t n = 0; n < 64; ++n) rho(n, n) = p[n];
        const auto s = TruncatedState::from_matrix({64}, rho);
        for (unsigned k = 0; k <= 16; ++k) {
            const double ref = oracle::factorial_moment(p, k);
            const double got = normally_ordered_moment(s, MultiIndex{{k, k}}).real();
            worst_a = std::max(worst_a, std::abs(got - ref) / std::max(std::abs(ref), 1e-300));
        }
    }
    o.require(worst_a < 1e-8, "(a) relative error " + fmt(worst_a));

    // (b) LU determinants vs cofactor expansion, every minor of side <= 4 in the suite
    // absolute 1e-10 is below one ulp for minors near 5e6, so the error is taken
    // relative to max(1, Hadamard bound) and the absolute figure is reported
    double worst_b = 0.0, worst_b_abs = 0.0;
    std::size_t minors = 0;
    for (const auto& [name, s] : classical_suite()) {
        const auto w = build_witness_matrix(StateProvider(s), enumerate_basis(1, 3));
        const Eigen::MatrixXcd h = w.entries;
        for (const auto& m : enumerate_minors(h, 4, Tolerances{})) {
            Eigen::MatrixXcd sub(m.order(), m.order());
            for (std::size_t r = 0; r < m.order(); ++r)
                for (std::size_t c = 0; c < m.order(); ++c) sub(r, c) = h(m.subset[r], m.subset[c]);
            const double err = std::abs(m.determinant - oracle::cofactor_det(sub).real());
            worst_b_abs = std::max(worst_b_abs, err);
            worst_b = std::max(worst_b, err / std::max(1.0, m.scale));
            ++minors;
        }
    }
    o.require(worst_b < 1e-10, "(b) determinant error " + fmt(worst_b));

    // (c) steady state vs propagation to t = 50
    double worst_c = 0.0;
    for (const AtomParams& p : {AtomParams{1.0, 0.0, 1.0}, AtomParams{6.0, 0.0, 1.0}, AtomParams{2.0, 1.0, 1.0},
                                AtomParams{0.25, 0.0, 1.0}}) {
        Matrix2c g = Matrix2c::Zero();
        g(0, 0) = 1.0;
        worst_c = std::max(worst_c, (steady_state(p) - propagate(p, g, 50.0)).cwiseAbs().maxCoeff());
    }
    o.require(worst_c < 1e-9, "(c) steady state error " + fmt(worst_c));
    o.summary = "(a) " + fmt(worst_a) + " (b) " + fmt(worst_b) + " scaled, " + fmt(worst_b_abs) + " absolute, over " +
                std::to_string(minors) + " minors (c) " + fmt(worst_c);
    return o;
}

// ------------------------------------------------------------------ AC9

Outcome ac9() {
    Outcome o;
    namespace fs = std::filesystem;
    std::vector<fs::path> configs;
    for (const auto& e : fs::directory_iterator(NCORR_CONFIG_DIR))
        if (e.path().extension() == ".json") configs.push_back(e.path());
    std::sort(configs.begin(), configs.end());
    o.require(!configs.empty(), "no battery configs found");
    std::size_t bytes = 0;
    for (const auto& path : configs) {
        std::ifstream in(path);
        std::stringstream ss;
        ss << in.rdbuf();
        const auto cfg = report::parse_config(ss.str());
        const auto a = report::run(cfg), b = report::run(cfg);
        const std::string ja = report::emit(a, report::Format::json_report, true);
        const std::string jb = report::emit(b, report::Format::json_report, true);
        o.require(ja == jb, path.filename().string() + ": json reports differ");
        o.require(report::emit(a, report::Format::csv_series) == report::emit(b, report::Format::csv_series),
                  path.filename().string() + ": csv differs");
        for (const auto& t : a.body["tasks"])
            o.require(t["status"] == "ok", path.filename().string() + ": task " + t["name"].get<std::string>() + " failed");
        bytes += ja.size();
    }
    o.summary = std::to_string(configs.size()) + " configs, " + std::to_string(bytes) + " report bytes identical";
    return o;
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"AC1 fock-1 second-order minor", ac1},   {"AC2 classicality suite", ac2},
        {"AC3 squeezed variance", ac3},           {"AC4 resonance fluorescence g2", ac4},
        {"AC5 antibunching", ac5},                {"AC6 higher-order null result", ac6},
        {"AC7 multipoint field-intensity", ac7},  {"AC8 oracle equivalences", ac8},
        {"AC9 determinism", ac9},
    };
    int failed = 0;
    for (const auto& [name, fn] : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = fn();
        } catch (const std::exception& e) {
            o.pass = false;
            o.failures.push_back(std::string("exception: ") + e.what());
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("%s %s: %s [%.2fs]\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.summary.c_str(), secs);
        for (std::size_t i = 0; i < o.failures.size() && i < 10; ++i) std::printf("    %s\n", o.failures[i].c_str());
        failed += !o.pass;
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
