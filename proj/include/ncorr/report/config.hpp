// config.hpp: parsing and validation of analysis configs.
//
// The configuration is a JSON document:
//
//   {
//     "provider": { "state": {...} }  or  { "atom": {...} },
//     "tasks":    [ {"type": ..., ...}, ... ],
//     "output":   { "report": "path.json", "csv": "path.csv" },   (optional)
//     "tolerances": { "eps_rel": 1e-9, "eps_abs": 1e-9, "max_subsets": 1000000 }  (optional)
//   }
//
// The README lists every key. Validation collects all problems, each
// tagged with the JSON pointer of the offending value.

#pragma once

#include <json.hpp>

#include <complex>
#include <cstddef>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "ncorr/atom_source.hpp"
#include "ncorr/criteria.hpp"
#include "ncorr/witness.hpp"

namespace ncorr::report {

using json = nlohmann::json;

struct ModeSpec {
    std::string kind = "vacuum";  // vacuum | fock | coherent | thermal | squeezed
    std::size_t cutoff = 2;
    std::size_t n = 0;                  // fock
    std::complex<double> alpha{0, 0};   // coherent
    double nbar = 0.0;                  // thermal
    double r = 0.0, phi = 0.0;          // squeezed
};

struct MixtureComponent {
    double weight = 1.0;
    std::vector<ModeSpec> modes;
};

struct StateSpec {
    std::vector<MixtureComponent> components;  // one component = product state
    bool mixture = false;                      // echo as "mixture" rather than "modes"
};

struct AtomSpec {
    AtomParams params;
    std::vector<SpaceTimePoint> points;
};

struct WitnessTask {
    std::optional<unsigned> max_degree;
    std::optional<std::vector<std::vector<unsigned>>> basis;  // flat (n_1, m_1, …) per entry
    std::optional<std::size_t> max_order;
};

struct SecondOrderTask {
    std::vector<unsigned> a, b;  // flat exponent lists
};

struct ThirdOrderTask {
    unsigned m = 1, n = 1, p = 1;
    std::array<std::size_t, 3> points{0, 1, 2};
};

struct AntibunchingTask {
    std::size_t a = 0, b = 1;
};

struct HigherOrderTask {
    unsigned N = 1, M = 1, n = 0, m = 0;
    std::size_t a = 0, b = 1;
};

struct FieldIntensityConfig {
    FieldIntensityTask task;
};

struct FieldVarianceTask {
    std::size_t point = 0;
    double phase = 0.0;
    bool optimal_phase = false;
};

struct G2SweepTask {
    double tau_start = 0.0, tau_stop = 10.0;
    std::size_t steps = 101;
};

using TaskBody = std::variant<WitnessTask, SecondOrderTask, ThirdOrderTask, AntibunchingTask, HigherOrderTask,
                              FieldIntensityConfig, FieldVarianceTask, G2SweepTask>;

struct TaskSpec {
    std::string type;
    std::string name;
    TaskBody body;
};

struct OutputPaths {
    std::optional<std::string> report;
    std::optional<std::string> csv;
};

struct AnalysisConfig {
    std::variant<StateSpec, AtomSpec> provider;
    std::vector<TaskSpec> tasks;
    OutputPaths output;
    Tolerances tolerances;

    bool is_atom() const noexcept { return std::holds_alternative<AtomSpec>(provider); }
    std::size_t point_count() const {
        if (is_atom()) return std::get<AtomSpec>(provider).points.size();
        const auto& s = std::get<StateSpec>(provider);
        return s.components.empty() ? 0 : s.components.front().modes.size();
    }
};

struct ValidationError {
    std::string path;
    std::string message;
    std::string str() const { return path + ": " + message; }
};

class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(std::vector<ValidationError> errors)
        : std::runtime_error(summarize(errors)), errors_(std::move(errors)) {}
    ConfigError(std::string path, std::string message)
        : ConfigError(std::vector<ValidationError>{{std::move(path), std::move(message)}}) {}
    const std::vector<ValidationError>& errors() const noexcept { return errors_; }

private:
    static std::string summarize(const std::vector<ValidationError>& errs) {
        std::string s = std::to_string(errs.size()) + " configuration error(s)";
        for (const auto& e : errs) s += "\n  " + e.str();
        return s;
    }
    std::vector<ValidationError> errors_;
};

namespace detail {

class Reader {
public:
    std::vector<ValidationError> errors;

    void fail(const std::string& path, const std::string& msg) { errors.push_back({path, msg}); }

    bool expect_object(const json& j, const std::string& path) {
        if (!j.is_object()) {
            fail(path, "expected an object");
            return false;
        }
        return true;
    }

    void allow_keys(const json& j, const std::string& path, std::initializer_list<const char*> keys) {
        if (!j.is_object()) return;
        for (const auto& [k, _] : j.items()) {
            bool known = false;
            for (const char* allowed : keys) known = known || k == allowed;
            if (!known) fail(path + "/" + k, "unknown key");
        }
    }

    std::optional<double> number(const json& j, const std::string& key, const std::string& path, bool required,
                                 std::optional<double> fallback = std::nullopt) {
        if (!j.contains(key)) {
            if (required) fail(path + "/" + key, "missing required number");
            return fallback;
        }
        const auto& v = j.at(key);
        if (!v.is_number()) {
            fail(path + "/" + key, "expected a number");
            return fallback;
        }
        return v.get<double>();
    }

    std::optional<long long> integer(const json& j, const std::string& key, const std::string& path, bool required,
                                     std::optional<long long> fallback = std::nullopt) {
        if (!j.contains(key)) {
            if (required) fail(path + "/" + key, "missing required integer");
            return fallback;
        }
        const auto& v = j.at(key);
        if (!v.is_number_integer()) {
            fail(path + "/" + key, "expected an integer");
            return fallback;
        }
        return v.get<long long>();
    }

    std::optional<std::size_t> nonneg(const json& j, const std::string& key, const std::string& path, bool required,
                                      std::optional<std::size_t> fallback = std::nullopt) {
        auto v = integer(j, key, path, required);
        if (!v) return fallback;
        if (*v < 0) {
            fail(path + "/" + key, "must be >= 0");
            return fallback;
        }
        return static_cast<std::size_t>(*v);
    }

    std::optional<std::vector<unsigned>> uint_list(const json& j, const std::string& key, const std::string& path,
                                                   bool required) {
        if (!j.contains(key)) {
            if (required) fail(path + "/" + key, "missing required integer list");
            return std::nullopt;
        }
        return uint_list_value(j.at(key), path + "/" + key);
    }

    std::optional<std::vector<unsigned>> uint_list_value(const json& v, const std::string& path) {
        if (!v.is_array()) {
            fail(path, "expected an array of nonnegative integers");
            return std::nullopt;
        }
        std::vector<unsigned> out;
        bool ok = true;
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (!v[i].is_number_integer() || v[i].get<long long>() < 0) {
                fail(path + "/" + std::to_string(i), "expected a nonnegative integer");
                ok = false;
            } else {
                out.push_back(static_cast<unsigned>(v[i].get<long long>()));
            }
        }
        if (!ok) return std::nullopt;
        return out;
    }
};

inline std::optional<ModeSpec> read_mode(Reader& rd, const json& j, const std::string& path) {
    if (!rd.expect_object(j, path)) return std::nullopt;
    ModeSpec m;
    if (!j.contains("kind") || !j.at("kind").is_string()) {
        rd.fail(path + "/kind", "missing mode kind (vacuum | fock | coherent | thermal | squeezed)");
        return std::nullopt;
    }
    m.kind = j.at("kind").get<std::string>();
    const std::size_t errors_before = rd.errors.size();
    if (auto c = rd.integer(j, "cutoff", path, true)) {
        if (*c < 2) rd.fail(path + "/cutoff", "cutoff must be >= 2");
        else m.cutoff = static_cast<std::size_t>(*c);
    }
    if (m.kind == "vacuum") {
        rd.allow_keys(j, path, {"kind", "cutoff"});
    } else if (m.kind == "fock") {
        rd.allow_keys(j, path, {"kind", "cutoff", "n"});
        m.n = rd.nonneg(j, "n", path, true, 0).value_or(0);
    } else if (m.kind == "coherent") {
        rd.allow_keys(j, path, {"kind", "cutoff", "alpha"});
        if (!j.contains("alpha")) {
            rd.fail(path + "/alpha", "missing coherent amplitude");
        } else if (const auto& a = j.at("alpha"); a.is_number()) {
            m.alpha = {a.get<double>(), 0.0};
        } else if (a.is_array() && a.size() == 2 && a[0].is_number() && a[1].is_number()) {
            m.alpha = {a[0].get<double>(), a[1].get<double>()};
        } else {
            rd.fail(path + "/alpha", "expected a number or [re, im]");
        }
    } else if (m.kind == "thermal") {
        rd.allow_keys(j, path, {"kind", "cutoff", "nbar"});
        m.nbar = rd.number(j, "nbar", path, true, 0.0).value_or(0.0);
        if (m.nbar < 0.0) rd.fail(path + "/nbar", "nbar must be >= 0");
    } else if (m.kind == "squeezed") {
        rd.allow_keys(j, path, {"kind", "cutoff", "r", "phi"});
        m.r = rd.number(j, "r", path, true, 0.0).value_or(0.0);
        m.phi = rd.number(j, "phi", path, false, 0.0).value_or(0.0);
        if (m.r < 0.0) rd.fail(path + "/r", "squeeze magnitude must be >= 0");
    } else {
        rd.fail(path + "/kind", "unknown mode kind '" + m.kind + "'");
    }
    if (rd.errors.size() != errors_before) return std::nullopt;
    return m;
}

inline std::vector<ModeSpec> read_modes(Reader& rd, const json& j, const std::string& path) {
    std::vector<ModeSpec> out;
    if (!j.is_array() || j.empty()) {
        rd.fail(path, "expected a nonempty array of mode specifications");
        return out;
    }
    for (std::size_t i = 0; i < j.size(); ++i) {
        if (auto m = read_mode(rd, j[i], path + "/" + std::to_string(i))) out.push_back(*m);
    }
    return out;
}

inline std::optional<StateSpec> read_state(Reader& rd, const json& j, const std::string& path) {
    if (!rd.expect_object(j, path)) return std::nullopt;
    rd.allow_keys(j, path, {"modes", "mixture"});
    StateSpec s;
    const bool has_modes = j.contains("modes"), has_mix = j.contains("mixture");
    if (has_modes == has_mix) {
        rd.fail(path, "exactly one of 'modes' or 'mixture' is required");
        return std::nullopt;
    }
    if (has_modes) {
        s.components.push_back({1.0, read_modes(rd, j.at("modes"), path + "/modes")});
        return s;
    }
    s.mixture = true;
    const auto& mix = j.at("mixture");
    if (!mix.is_array() || mix.empty()) {
        rd.fail(path + "/mixture", "expected a nonempty array of {weight, modes}");
        return std::nullopt;
    }
    double total = 0.0;
    for (std::size_t i = 0; i < mix.size(); ++i) {
        const std::string p = path + "/mixture/" + std::to_string(i);
        if (!rd.expect_object(mix[i], p)) continue;
        rd.allow_keys(mix[i], p, {"weight", "modes"});
        MixtureComponent c;
        c.weight = rd.number(mix[i], "weight", p, true, 0.0).value_or(0.0);
        if (c.weight < 0.0) rd.fail(p + "/weight", "mixture weights must be >= 0");
        total += c.weight;
        if (mix[i].contains("modes")) c.modes = read_modes(rd, mix[i].at("modes"), p + "/modes");
        else rd.fail(p + "/modes", "missing modes");
        s.components.push_back(std::move(c));
    }
    if (std::abs(total - 1.0) > 1e-12) rd.fail(path + "/mixture", "weights must sum to 1 within 1e-12");
    for (std::size_t i = 1; i < s.components.size(); ++i) {
        const auto& a = s.components[0].modes;
        const auto& b = s.components[i].modes;
        bool same = a.size() == b.size();
        for (std::size_t k = 0; same && k < a.size(); ++k) same = a[k].cutoff == b[k].cutoff;
        if (!same) rd.fail(path + "/mixture/" + std::to_string(i), "mode count and cutoffs must match component 0");
    }
    return s;
}

inline std::optional<AtomSpec> read_atom(Reader& rd, const json& j, const std::string& path) {
    if (!rd.expect_object(j, path)) return std::nullopt;
    rd.allow_keys(j, path, {"rabi", "detuning", "gamma", "points"});
    AtomSpec a;
    a.params.rabi = rd.number(j, "rabi", path, true, 0.0).value_or(0.0);
    a.params.detuning = rd.number(j, "detuning", path, false, 0.0).value_or(0.0);
    a.params.gamma = rd.number(j, "gamma", path, false, 1.0).value_or(1.0);
    if (a.params.rabi < 0.0) rd.fail(path + "/rabi", "rabi must be >= 0");
    if (!(a.params.gamma > 0.0)) rd.fail(path + "/gamma", "gamma must be > 0");
    if (!j.contains("points") || !j.at("points").is_array() || j.at("points").empty()) {
        rd.fail(path + "/points", "expected a nonempty array of {t, r}");
        return a;
    }
    const auto& pts = j.at("points");
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const std::string p = path + "/points/" + std::to_string(i);
        if (!rd.expect_object(pts[i], p)) continue;
        rd.allow_keys(pts[i], p, {"t", "r"});
        SpaceTimePoint sp;
        sp.t = rd.number(pts[i], "t", p, true, 0.0).value_or(0.0);
        sp.r = rd.number(pts[i], "r", p, false, 0.0).value_or(0.0);
        if (sp.r < 0.0) rd.fail(p + "/r", "distance must be >= 0");
        a.points.push_back(sp);
    }
    return a;
}

inline std::optional<std::size_t> read_label(Reader& rd, const json& v, const std::string& path, std::size_t k) {
    if (!v.is_number_integer() || v.get<long long>() < 0) {
        rd.fail(path, "expected a nonnegative point label");
        return std::nullopt;
    }
    const auto l = static_cast<std::size_t>(v.get<long long>());
    if (l >= k) {
        rd.fail(path, "point label " + std::to_string(l) + " out of range for " + std::to_string(k) + " points");
        return std::nullopt;
    }
    return l;
}

inline std::vector<std::size_t> read_labels(Reader& rd, const json& j, const std::string& path, std::size_t k,
                                            std::optional<std::size_t> exact) {
    std::vector<std::size_t> out;
    if (!j.contains("points") || !j.at("points").is_array()) {
        rd.fail(path + "/points", "expected an array of point labels");
        return out;
    }
    const auto& arr = j.at("points");
    if (exact && arr.size() != *exact) {
        rd.fail(path + "/points", "expected exactly " + std::to_string(*exact) + " point labels");
        return out;
    }
    for (std::size_t i = 0; i < arr.size(); ++i) {
        if (auto l = read_label(rd, arr[i], path + "/points/" + std::to_string(i), k)) out.push_back(*l);
    }
    return out;
}

inline std::optional<TaskSpec> read_task(Reader& rd, const json& j, const std::string& path, std::size_t k,
                                         bool atom) {
    if (!rd.expect_object(j, path)) return std::nullopt;
    if (!j.contains("type") || !j.at("type").is_string()) {
        rd.fail(path + "/type", "missing task type");
        return std::nullopt;
    }
    TaskSpec t;
    t.type = j.at("type").get<std::string>();
    if (j.contains("name")) {
        if (j.at("name").is_string()) t.name = j.at("name").get<std::string>();
        else rd.fail(path + "/name", "expected a string");
    }
    const std::size_t before = rd.errors.size();

    if (t.type == "witness") {
        rd.allow_keys(j, path, {"type", "name", "max_degree", "basis", "max_order"});
        WitnessTask w;
        if (j.contains("max_degree") == j.contains("basis")) {
            rd.fail(path, "exactly one of 'max_degree' or 'basis' is required");
        }
        if (auto d = rd.integer(j, "max_degree", path, false)) {
            if (*d < 1) rd.fail(path + "/max_degree", "must be >= 1");
            else w.max_degree = static_cast<unsigned>(*d);
        }
        if (j.contains("basis")) {
            const auto& b = j.at("basis");
            if (!b.is_array() || b.empty()) {
                rd.fail(path + "/basis", "expected a nonempty array of flat exponent lists");
            } else {
                std::vector<std::vector<unsigned>> entries;
                for (std::size_t i = 0; i < b.size(); ++i) {
                    const std::string p = path + "/basis/" + std::to_string(i);
                    auto e = rd.uint_list_value(b[i], p);
                    if (!e) continue;
                    if (e->size() != 2 * k) rd.fail(p, "expected " + std::to_string(2 * k) + " exponents");
                    entries.push_back(*e);
                }
                w.basis = std::move(entries);
            }
        }
        if (auto o = rd.integer(j, "max_order", path, false)) {
            if (*o < 1) rd.fail(path + "/max_order", "must be >= 1");
            else w.max_order = static_cast<std::size_t>(*o);
        }
        t.body = w;
    } else if (t.type == "second_order") {
        rd.allow_keys(j, path, {"type", "name", "a", "b"});
        SecondOrderTask s;
        s.a = rd.uint_list(j, "a", path, true).value_or(std::vector<unsigned>{});
        s.b = rd.uint_list(j, "b", path, true).value_or(std::vector<unsigned>{});
        if (j.contains("a") && s.a.size() != 2 * k) rd.fail(path + "/a", "expected " + std::to_string(2 * k) + " exponents");
        if (j.contains("b") && s.b.size() != 2 * k) rd.fail(path + "/b", "expected " + std::to_string(2 * k) + " exponents");
        t.body = s;
    } else if (t.type == "third_order_minor") {
        rd.allow_keys(j, path, {"type", "name", "m", "n", "p", "points"});
        ThirdOrderTask s;
        s.m = static_cast<unsigned>(rd.nonneg(j, "m", path, true, 1).value_or(1));
        s.n = static_cast<unsigned>(rd.nonneg(j, "n", path, true, 1).value_or(1));
        s.p = static_cast<unsigned>(rd.nonneg(j, "p", path, true, 1).value_or(1));
        if (s.m == 0 || s.n == 0 || s.p == 0) rd.fail(path, "m, n, p must be positive");
        auto labels = read_labels(rd, j, path, k, 3);
        if (labels.size() == 3) s.points = {labels[0], labels[1], labels[2]};
        t.body = s;
    } else if (t.type == "antibunching") {
        rd.allow_keys(j, path, {"type", "name", "points"});
        AntibunchingTask s;
        auto labels = read_labels(rd, j, path, k, 2);
        if (labels.size() == 2) s = {labels[0], labels[1]};
        t.body = s;
    } else if (t.type == "higher_order_intensity") {
        rd.allow_keys(j, path, {"type", "name", "N", "M", "n", "m", "points"});
        HigherOrderTask s;
        s.N = static_cast<unsigned>(rd.nonneg(j, "N", path, true, 1).value_or(1));
        s.M = static_cast<unsigned>(rd.nonneg(j, "M", path, true, 1).value_or(1));
        s.n = static_cast<unsigned>(rd.nonneg(j, "n", path, false, 0).value_or(0));
        s.m = static_cast<unsigned>(rd.nonneg(j, "m", path, false, 0).value_or(0));
        if (s.n > s.N || s.m > s.M) rd.fail(path, "requires N >= n and M >= m");
        if (s.N + s.M == 0) rd.fail(path, "requires N + M >= 1");
        auto labels = read_labels(rd, j, path, k, 2);
        if (labels.size() == 2) {
            s.a = labels[0];
            s.b = labels[1];
        }
        t.body = s;
    } else if (t.type == "field_intensity") {
        rd.allow_keys(j, path, {"type", "name", "variant", "points", "field_powers", "intensity_powers", "l", "phase"});
        FieldIntensityConfig c;
        std::optional<FieldIntensityVariant> variant;
        if (j.contains("variant") && j.at("variant").is_string()) variant = parse_variant(j.at("variant").get<std::string>());
        if (!variant) {
            rd.fail(path + "/variant", "expected one of general | lowest_order | mean_intensity | full_field | multipoint");
            return std::nullopt;
        }
        c.task.variant = *variant;
        const bool two = *variant == FieldIntensityVariant::lowest_order ||
                         *variant == FieldIntensityVariant::mean_intensity ||
                         *variant == FieldIntensityVariant::full_field;
        c.task.points = read_labels(rd, j, path, k, two ? std::optional<std::size_t>(2) : std::nullopt);
        if (*variant == FieldIntensityVariant::general) {
            c.task.field_powers = rd.uint_list(j, "field_powers", path, true).value_or(std::vector<unsigned>{});
            c.task.intensity_powers = rd.uint_list(j, "intensity_powers", path, true).value_or(std::vector<unsigned>{});
            if (c.task.field_powers.size() != c.task.points.size() ||
                c.task.intensity_powers.size() != c.task.points.size()) {
                rd.fail(path, "field_powers and intensity_powers need one entry per point label");
            }
        } else if (j.contains("field_powers") || j.contains("intensity_powers")) {
            rd.fail(path, "field_powers / intensity_powers only apply to the general variant");
        }
        if (*variant == FieldIntensityVariant::multipoint) {
            c.task.field_points = rd.nonneg(j, "l", path, true, 0).value_or(0);
            if (!(1 < c.task.field_points && c.task.field_points < c.task.points.size())) {
                rd.fail(path + "/l", "requires 1 < l < number of points");
            }
        } else if (j.contains("l")) {
            rd.fail(path + "/l", "only applies to the multipoint variant");
        }
        if (j.contains("phase")) {
            if (*variant != FieldIntensityVariant::full_field) {
                rd.fail(path + "/phase", "only applies to the full_field variant");
            } else if (j.at("phase").is_string() && j.at("phase").get<std::string>() == "optimal") {
                c.task.optimal_phase = true;
            } else if (j.at("phase").is_number()) {
                c.task.phase = j.at("phase").get<double>();
            } else {
                rd.fail(path + "/phase", "expected a number or \"optimal\"");
            }
        }
        t.body = c;
    } else if (t.type == "field_variance") {
        rd.allow_keys(j, path, {"type", "name", "point", "phase"});
        if (atom) rd.fail(path, "field_variance requires a state provider");
        FieldVarianceTask s;
        if (j.contains("point")) {
            if (auto l = read_label(rd, j.at("point"), path + "/point", k)) s.point = *l;
        } else {
            rd.fail(path + "/point", "missing point label");
        }
        if (j.contains("phase")) {
            if (j.at("phase").is_string() && j.at("phase").get<std::string>() == "optimal") s.optimal_phase = true;
            else if (j.at("phase").is_number()) s.phase = j.at("phase").get<double>();
            else rd.fail(path + "/phase", "expected a number or \"optimal\"");
        }
        t.body = s;
    } else if (t.type == "g2_sweep") {
        rd.allow_keys(j, path, {"type", "name", "tau_start", "tau_stop", "steps"});
        if (!atom) rd.fail(path, "g2_sweep requires an atom provider");
        G2SweepTask s;
        s.tau_start = rd.number(j, "tau_start", path, false, 0.0).value_or(0.0);
        s.tau_stop = rd.number(j, "tau_stop", path, true, 10.0).value_or(10.0);
        s.steps = rd.nonneg(j, "steps", path, true, 101).value_or(101);
        if (s.tau_start < 0.0) rd.fail(path + "/tau_start", "must be >= 0");
        if (!(s.tau_stop >= s.tau_start)) rd.fail(path + "/tau_stop", "must be >= tau_start");
        if (s.steps < 2) rd.fail(path + "/steps", "must be >= 2");
        t.body = s;
    } else {
        rd.fail(path + "/type", "unknown task type '" + t.type + "'");
        return std::nullopt;
    }
    if (rd.errors.size() != before) return std::nullopt;
    return t;
}

}  // namespace detail

inline AnalysisConfig parse_config(const json& doc) {
    detail::Reader rd;
    AnalysisConfig cfg;
    if (!doc.is_object()) throw ConfigError("", "configuration must be a JSON object");
    rd.allow_keys(doc, "", {"provider", "tasks", "output", "tolerances"});

    std::size_t k = 0;
    bool atom = false;
    bool provider_ok = false;
    if (!doc.contains("provider")) {
        rd.fail("/provider", "missing provider (one of 'state' or 'atom')");
    } else if (const auto& pv = doc.at("provider"); rd.expect_object(pv, "/provider")) {
        rd.allow_keys(pv, "/provider", {"state", "atom"});
        const bool has_state = pv.contains("state"), has_atom = pv.contains("atom");
        if (has_state && has_atom) {
            rd.fail("/provider", "both 'state' and 'atom' given; exactly one provider is allowed");
        } else if (!has_state && !has_atom) {
            rd.fail("/provider", "missing provider (one of 'state' or 'atom')");
        } else if (has_state) {
            if (auto s = detail::read_state(rd, pv.at("state"), "/provider/state")) {
                cfg.provider = *s;
                k = s->components.empty() ? 0 : s->components.front().modes.size();
                provider_ok = k > 0;
            }
        } else {
            atom = true;
            if (auto a = detail::read_atom(rd, pv.at("atom"), "/provider/atom")) {
                cfg.provider = *a;
                k = a->points.size();
                provider_ok = k > 0;
            }
        }
    }

    if (!doc.contains("tasks") || !doc.at("tasks").is_array() || doc.at("tasks").empty()) {
        rd.fail("/tasks", "expected a nonempty task list");
    } else if (provider_ok) {
        const auto& tasks = doc.at("tasks");
        std::set<std::string> names;
        for (std::size_t i = 0; i < tasks.size(); ++i) {
            const std::string p = "/tasks/" + std::to_string(i);
            if (auto t = detail::read_task(rd, tasks[i], p, k, atom)) {
                if (!t->name.empty() && !names.insert(t->name).second) {
                    rd.fail(p + "/name", "duplicate task name '" + t->name + "'");
                }
                cfg.tasks.push_back(std::move(*t));
            }
        }
    }

    if (doc.contains("output")) {
        const auto& o = doc.at("output");
        if (rd.expect_object(o, "/output")) {
            rd.allow_keys(o, "/output", {"report", "csv"});
            for (const char* key : {"report", "csv"}) {
                if (!o.contains(key)) continue;
                if (!o.at(key).is_string()) {
                    rd.fail(std::string("/output/") + key, "expected a path string");
                    continue;
                }
                (std::string(key) == "report" ? cfg.output.report : cfg.output.csv) = o.at(key).get<std::string>();
            }
        }
    }

    if (doc.contains("tolerances")) {
        const auto& t = doc.at("tolerances");
        if (rd.expect_object(t, "/tolerances")) {
            rd.allow_keys(t, "/tolerances", {"eps_rel", "eps_abs", "max_subsets"});
            cfg.tolerances.eps_rel = rd.number(t, "eps_rel", "/tolerances", false, 1e-9).value_or(1e-9);
            cfg.tolerances.eps_abs = rd.number(t, "eps_abs", "/tolerances", false, 1e-9).value_or(1e-9);
            cfg.tolerances.max_subsets = rd.nonneg(t, "max_subsets", "/tolerances", false, 1'000'000).value_or(1'000'000);
            if (!(cfg.tolerances.eps_rel >= 0.0)) rd.fail("/tolerances/eps_rel", "must be >= 0");
            if (!(cfg.tolerances.eps_abs >= 0.0)) rd.fail("/tolerances/eps_abs", "must be >= 0");
        }
    }

    if (!rd.errors.empty()) throw ConfigError(std::move(rd.errors));
    return cfg;
}

inline AnalysisConfig parse_config(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError({{"", std::string("malformed JSON: ") + e.what()}});
    }
    return parse_config(doc);
}

// ------------------------------- echo --------------------------------------

inline json to_json(const ModeSpec& m) {
    json j{{"kind", m.kind}, {"cutoff", m.cutoff}};
    if (m.kind == "fock") j["n"] = m.n;
    if (m.kind == "coherent") j["alpha"] = json::array({m.alpha.real(), m.alpha.imag()});
    if (m.kind == "thermal") j["nbar"] = m.nbar;
    if (m.kind == "squeezed") {
        j["r"] = m.r;
        j["phi"] = m.phi;
    }
    return j;
}

inline json to_json(const TaskSpec& t) {
    json j{{"type", t.type}};
    if (!t.name.empty()) j["name"] = t.name;
    std::visit(
        [&](const auto& b) {
            using B = std::decay_t<decltype(b)>;
            if constexpr (std::is_same_v<B, WitnessTask>) {
                if (b.max_degree) j["max_degree"] = *b.max_degree;
                if (b.basis) j["basis"] = *b.basis;
                if (b.max_order) j["max_order"] = *b.max_order;
            } else if constexpr (std::is_same_v<B, SecondOrderTask>) {
                j["a"] = b.a;
                j["b"] = b.b;
            } else if constexpr (std::is_same_v<B, ThirdOrderTask>) {
                j["m"] = b.m;
                j["n"] = b.n;
                j["p"] = b.p;
                j["points"] = b.points;
            } else if constexpr (std::is_same_v<B, AntibunchingTask>) {
                j["points"] = {b.a, b.b};
            } else if constexpr (std::is_same_v<B, HigherOrderTask>) {
                j["N"] = b.N;
                j["M"] = b.M;
                j["n"] = b.n;
                j["m"] = b.m;
                j["points"] = {b.a, b.b};
            } else if constexpr (std::is_same_v<B, FieldIntensityConfig>) {
                j["variant"] = to_string(b.task.variant);
                j["points"] = b.task.points;
                if (b.task.variant == FieldIntensityVariant::general) {
                    j["field_powers"] = b.task.field_powers;
                    j["intensity_powers"] = b.task.intensity_powers;
                }
                if (b.task.variant == FieldIntensityVariant::multipoint) j["l"] = b.task.field_points;
                if (b.task.variant == FieldIntensityVariant::full_field) {
                    if (b.task.optimal_phase) j["phase"] = "optimal";
                    else j["phase"] = b.task.phase;
                }
            } else if constexpr (std::is_same_v<B, FieldVarianceTask>) {
                j["point"] = b.point;
                if (b.optimal_phase) j["phase"] = "optimal";
                else j["phase"] = b.phase;
            } else if constexpr (std::is_same_v<B, G2SweepTask>) {
                j["tau_start"] = b.tau_start;
                j["tau_stop"] = b.tau_stop;
                j["steps"] = b.steps;
            }
        },
        t.body);
    return j;
}

inline json to_json(const AnalysisConfig& cfg) {
    json j;
    if (cfg.is_atom()) {
        const auto& a = std::get<AtomSpec>(cfg.provider);
        json pts = json::array();
        for (const auto& p : a.points) pts.push_back({{"t", p.t}, {"r", p.r}});
        j["provider"]["atom"] = {{"rabi", a.params.rabi},
                                 {"detuning", a.params.detuning},
                                 {"gamma", a.params.gamma},
                                 {"points", pts}};
    } else {
        const auto& s = std::get<StateSpec>(cfg.provider);
        auto modes = [](const std::vector<ModeSpec>& ms) {
            json arr = json::array();
            for (const auto& m : ms) arr.push_back(to_json(m));
            return arr;
        };
        if (!s.mixture) {
            j["provider"]["state"]["modes"] = modes(s.components.front().modes);
        } else {
            json mix = json::array();
            for (const auto& c : s.components) mix.push_back({{"weight", c.weight}, {"modes", modes(c.modes)}});
            j["provider"]["state"]["mixture"] = mix;
        }
    }
    json tasks = json::array();
    for (const auto& t : cfg.tasks) tasks.push_back(to_json(t));
    j["tasks"] = tasks;
    if (cfg.output.report || cfg.output.csv) {
        j["output"] = json::object();
        if (cfg.output.report) j["output"]["report"] = *cfg.output.report;
        if (cfg.output.csv) j["output"]["csv"] = *cfg.output.csv;
    }
    j["tolerances"] = {{"eps_rel", cfg.tolerances.eps_rel},
                       {"eps_abs", cfg.tolerances.eps_abs},
                       {"max_subsets", cfg.tolerances.max_subsets}};
    return j;
}

}  // namespace ncorr::report
