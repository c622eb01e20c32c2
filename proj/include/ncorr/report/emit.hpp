// emit.hpp: byte-stable serialization of reports.
//
// json-report: keys sorted, two-space indentation, doubles printed with 17
// significant digits ("%.17g"); non-finite doubles become null.
// csv-series: "tau,value_re,value_im" header, one row per sample, with a
// leading "series" column when more than one sweep is present.

#pragma once

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>

#include "ncorr/report/run.hpp"

namespace ncorr::report {

enum class Format { json_report, csv_series };

inline std::optional<Format> parse_format(const std::string& s) {
    if (s == "json-report" || s == "json") return Format::json_report;
    if (s == "csv-series" || s == "csv") return Format::csv_series;
    return std::nullopt;
}

inline std::string format_double(double v) {
    if (!std::isfinite(v)) return "null";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace detail {

inline void write_json(std::ostringstream& os, const json& j, int depth) {
    const std::string pad(2 * static_cast<std::size_t>(depth + 1), ' ');
    const std::string close(2 * static_cast<std::size_t>(depth), ' ');
    switch (j.type()) {
        case json::value_t::object: {
            if (j.empty()) {
                os << "{}";
                return;
            }
            os << "{\n";
            bool first = true;
            for (auto it = j.begin(); it != j.end(); ++it) {  // std::map ordering = sorted keys
                if (!first) os << ",\n";
                first = false;
                os << pad << json(it.key()).dump() << ": ";
                write_json(os, it.value(), depth + 1);
            }
            os << "\n" << close << "}";
            return;
        }
        case json::value_t::array: {
            if (j.empty()) {
                os << "[]";
                return;
            }
            bool scalars = true;
            for (const auto& e : j) scalars = scalars && !e.is_structured();
            if (scalars) {
                os << "[";
                for (std::size_t i = 0; i < j.size(); ++i) {
                    if (i) os << ", ";
                    write_json(os, j[i], depth + 1);
                }
                os << "]";
                return;
            }
            os << "[\n";
            for (std::size_t i = 0; i < j.size(); ++i) {
                if (i) os << ",\n";
                os << pad;
                write_json(os, j[i], depth + 1);
            }
            os << "\n" << close << "]";
            return;
        }
        case json::value_t::number_float:
            os << format_double(j.get<double>());
            return;
        default:
            os << j.dump();
            return;
    }
}

}  // namespace detail

inline std::string canonical_json(const json& j) {
    std::ostringstream os;
    detail::write_json(os, j, 0);
    os << "\n";
    return os.str();
}

inline std::string emit_csv(const std::vector<Series>& series) {
    std::ostringstream os;
    const bool tagged = series.size() > 1;
    os << (tagged ? "series,tau,value_re,value_im\n" : "tau,value_re,value_im\n");
    for (const auto& s : series) {
        for (const auto& p : s.points) {
            if (tagged) os << s.task << ",";
            os << format_double(p.tau) << "," << format_double(p.value.real()) << ","
               << format_double(p.value.imag()) << "\n";
        }
    }
    return os.str();
}

// Full report including timing; strip_timing drops it for determinism checks.
inline std::string emit(const AnalysisReport& rep, Format format, bool strip_timing = false) {
    switch (format) {
        case Format::json_report: {
            json j = rep.body;
            if (!strip_timing) j["timing"] = rep.timing;
            return canonical_json(j);
        }
        case Format::csv_series:
            return emit_csv(rep.series);
    }
    throw std::invalid_argument("emit: unsupported format");
}

inline std::string emit(const AnalysisReport& rep, const std::string& format, bool strip_timing = false) {
    const auto f = parse_format(format);
    if (!f) throw std::invalid_argument("emit: unsupported format tag '" + format + "'");
    return emit(rep, *f, strip_timing);
}

}  // namespace ncorr::report
