// ncorr: command-line driver.
//
//   ncorr analyze  <config> [--out path] [--format json-report|csv-series]
//   ncorr sweep-g2 <config> [--out path]
//   ncorr validate <config>
//   ncorr --version
//
// Exit codes: 0 ran (verdicts are in the report), 2 invalid config,
// 3 runtime failure.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "ncorr/report/config.hpp"
#include "ncorr/report/emit.hpp"
#include "ncorr/report/run.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_output(const std::string& text, const std::optional<std::string>& path) {
    if (!path) {
        std::cout << text;
        return;
    }
    std::ofstream out(*path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + *path + "'");
    out << text;
}

int report_config_error(const ncorr::report::ConfigError& e) {
    for (const auto& err : e.errors()) std::cerr << "config error: " << err.str() << "\n";
    return kExitConfig;
}

ncorr::report::AnalysisConfig load(const std::string& path) {
    std::string text;
    try {
        text = read_file(path);
    } catch (const std::exception& e) {
        throw ncorr::report::ConfigError("", e.what());
    }
    return ncorr::report::parse_config(text);
}

}  // namespace

int main(int argc, char** argv) {
    using namespace ncorr::report;

    CLI::App app{"ncorr: nonclassical space-time correlation analysis"};
    app.set_version_flag("--version", std::string(kToolName) + " " + kToolVersion);
    app.require_subcommand(1);

    std::string config_path, out_path, format = "json-report";

    auto* analyze = app.add_subcommand("analyze", "run every task in a config and write the report");
    analyze->add_option("config", config_path, "configuration file (JSON)")->required();
    analyze->add_option("-o,--out", out_path, "output path (overrides output.report / output.csv)");
    analyze->add_option("-f,--format", format, "json-report or csv-series")
        ->check(CLI::IsMember({"json-report", "csv-series"}));

    auto* sweep = app.add_subcommand("sweep-g2", "evaluate the atom g2(tau) sweep tasks and write CSV");
    sweep->add_option("config", config_path, "configuration file (JSON)")->required();
    sweep->add_option("-o,--out", out_path, "CSV output path (overrides output.csv)");

    auto* validate = app.add_subcommand("validate", "check a configuration file");
    validate->add_option("config", config_path, "configuration file (JSON)")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (validate->parsed()) {
            try {
                const auto cfg = load(config_path);
                std::cout << "valid: " << cfg.tasks.size() << " task(s), "
                          << (cfg.is_atom() ? "atom" : "state") << " provider with " << cfg.point_count()
                          << " point(s)\n";
                return kExitOk;
            } catch (const ConfigError& e) {
                return report_config_error(e);
            }
        }

        AnalysisConfig cfg;
        try {
            cfg = load(config_path);
        } catch (const ConfigError& e) {
            return report_config_error(e);
        }

        if (sweep->parsed()) {
            AnalysisConfig sweep_cfg = cfg;
            sweep_cfg.tasks.clear();
            for (const auto& t : cfg.tasks)
                if (t.type == "g2_sweep") sweep_cfg.tasks.push_back(t);
            if (sweep_cfg.tasks.empty()) {
                std::cerr << "config error: /tasks: sweep-g2 needs at least one g2_sweep task\n";
                return kExitConfig;
            }
            const auto rep = run(sweep_cfg);
            if (rep.provider_failed) {
                std::cerr << "runtime error: " << rep.body["provider"]["error"].get<std::string>() << "\n";
                return kExitRuntime;
            }
            for (const auto& t : rep.body["tasks"]) {
                if (t["status"] != "ok") {
                    std::cerr << "runtime error: " << t["error"].get<std::string>() << "\n";
                    return kExitRuntime;
                }
            }
            write_output(emit(rep, Format::csv_series),
                         out_path.empty() ? cfg.output.csv : std::optional<std::string>(out_path));
            return kExitOk;
        }

        const auto rep = run(cfg);
        const Format f = *parse_format(format);
        std::optional<std::string> dest = out_path.empty()
                                              ? (f == Format::json_report ? cfg.output.report : cfg.output.csv)
                                              : std::optional<std::string>(out_path);
        write_output(emit(rep, f), dest);
        if (f == Format::json_report && cfg.output.csv && !rep.series.empty() && out_path.empty()) {
            write_output(emit(rep, Format::csv_series), cfg.output.csv);
        }
        if (rep.provider_failed) {
            std::cerr << "runtime error: " << rep.body["provider"]["error"].get<std::string>() << "\n";
            return kExitRuntime;
        }
        return kExitOk;
    } catch (const std::exception& e) {
        std::cerr << "runtime error: " << e.what() << "\n";
        return kExitRuntime;
    }
}
