#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "ncorr/report/config.hpp"
#include "ncorr/report/emit.hpp"
#include "ncorr/report/run.hpp"

using namespace ncorr;
using namespace ncorr::report;
namespace fs = std::filesystem;

namespace {

const char* kFockConfig = R"({
  "provider": {"state": {"modes": [{"kind": "fock", "n": 1, "cutoff": 8}]}},
  "tasks": [
    {"type": "witness", "name": "w", "basis": [[0, 0], [1, 1]]},
    {"type": "second_order", "a": [0, 0], "b": [1, 1]}
  ]
})";

const char* kAtomConfig = R"({
  "provider": {"atom": {"rabi": 6, "points": [{"t": 0}, {"t": 0.4}, {"t": 0.9}]}},
  "tasks": [
    {"type": "antibunching", "points": [0, 1]},
    {"type": "field_intensity", "variant": "multipoint", "points": [0, 1, 2], "l": 2},
    {"type": "g2_sweep", "name": "g2", "tau_stop": 2, "steps": 5}
  ]
})";

std::vector<std::string> error_paths(const std::string& text) {
    try {
        parse_config(text);
    } catch (const ConfigError& e) {
        std::vector<std::string> out;
        for (const auto& err : e.errors()) out.push_back(err.path);
        return out;
    }
    return {};
}

bool has_path(const std::vector<std::string>& v, const std::string& p) {
    return std::find(v.begin(), v.end(), p) != v.end();
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int run_cli(const std::string& args) {
    const std::string cmd = std::string(NCORR_CLI_PATH) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

fs::path scratch(const std::string& name, const std::string& content) {
    const fs::path dir = fs::temp_directory_path() / "ncorr_test_report";
    fs::create_directories(dir);
    const fs::path p = dir / name;
    std::ofstream(p) << content;
    return p;
}

}  // namespace

TEST(ParseConfig, AcceptsValidDocuments) {
    const auto c = parse_config(std::string(kFockConfig));
    EXPECT_FALSE(c.is_atom());
    EXPECT_EQ(c.point_count(), 1u);
    ASSERT_EQ(c.tasks.size(), 2u);
    EXPECT_EQ(c.tasks[0].name, "w");

    const auto a = parse_config(std::string(kAtomConfig));
    EXPECT_TRUE(a.is_atom());
    EXPECT_EQ(a.point_count(), 3u);
    EXPECT_DOUBLE_EQ(std::get<AtomSpec>(a.provider).params.gamma, 1.0);
}

TEST(ParseConfig, BothProvidersRejectedNamingBothKeys) {
    try {
        parse_config(std::string(R"({"provider": {"state": {"modes": [{"kind": "vacuum", "cutoff": 4}]},
                                                  "atom": {"rabi": 1, "points": [{"t": 0}]}},
                                     "tasks": [{"type": "antibunching", "points": [0, 0]}]})"));
        FAIL();
    } catch (const ConfigError& e) {
        const std::string msg = e.what();
        EXPECT_NE(msg.find("'state'"), std::string::npos) << msg;
        EXPECT_NE(msg.find("'atom'"), std::string::npos) << msg;
    }
}

TEST(ParseConfig, CollectsEveryErrorWithPointer) {
    const auto paths = error_paths(R"({
      "provider": {"state": {"modes": [{"kind": "fock", "n": 1, "cutoff": 1, "bogus": 3}]}},
      "tasks": [
        {"type": "witness", "max_degree": 0},
        {"type": "antibunching", "points": [0, 4]},
        {"type": "nope"},
        {"type": "g2_sweep", "tau_stop": 1, "steps": 3}
      ],
      "extra": true
    })");
    EXPECT_TRUE(has_path(paths, "/provider/state/modes/0/cutoff"));
    EXPECT_TRUE(has_path(paths, "/provider/state/modes/0/bogus"));
    EXPECT_TRUE(has_path(paths, "/extra"));
    // tasks are only checked once the provider parses
    EXPECT_FALSE(has_path(paths, "/tasks/0/max_degree"));
}

TEST(ParseConfig, TaskLevelErrors) {
    const std::string head = R"({"provider": {"state": {"modes": [{"kind": "vacuum", "cutoff": 4}]}}, "tasks": )";
    EXPECT_TRUE(has_path(error_paths(head + R"([{"type": "witness", "max_degree": 0}]})"), "/tasks/0/max_degree"));
    EXPECT_TRUE(has_path(error_paths(head + R"([{"type": "antibunching", "points": [0, 4]}]})"), "/tasks/0/points/1"));
    EXPECT_TRUE(has_path(error_paths(head + R"([{"type": "nope"}]})"), "/tasks/0/type"));
    EXPECT_TRUE(has_path(error_paths(head + R"([{"type": "g2_sweep", "tau_stop": 1, "steps": 3}]})"), "/tasks/0"));
    EXPECT_TRUE(has_path(error_paths(head + R"([{"type": "antibunching", "name": "x", "points": [0, 0]},
                                                {"type": "antibunching", "name": "x", "points": [0, 0]}]})"),
                         "/tasks/1/name"));
    EXPECT_TRUE(has_path(error_paths(head + R"([]})"), "/tasks"));
    EXPECT_TRUE(has_path(error_paths("[1, 2]"), ""));
}

TEST(ParseConfig, MixtureWeights) {
    const std::string bad = R"({"provider": {"state": {"mixture": [
        {"weight": 0.5, "modes": [{"kind": "thermal", "nbar": 0.5, "cutoff": 16}]},
        {"weight": 0.6, "modes": [{"kind": "coherent", "alpha": [0.3, 0.1], "cutoff": 16}]}]}},
        "tasks": [{"type": "witness", "max_degree": 1}]})";
    EXPECT_TRUE(has_path(error_paths(bad), "/provider/state/mixture"));
}

TEST(ParseConfig, EchoRoundTrips) {
    for (const char* text : {kFockConfig, kAtomConfig}) {
        const auto a = parse_config(std::string(text));
        const json once = to_json(a);
        const json twice = to_json(parse_config(once));
        EXPECT_EQ(once, twice);
    }
}

TEST(Run, FockReport) {
    const auto rep = run(parse_config(std::string(kFockConfig)));
    ASSERT_FALSE(rep.provider_failed);
    const auto& tasks = rep.body["tasks"];
    ASSERT_EQ(tasks.size(), 2u);
    EXPECT_EQ(tasks[0]["status"], "ok");
    EXPECT_EQ(tasks[0]["result"]["verdict"], "nonclassical");
    EXPECT_NEAR(tasks[0]["result"]["minors"][2]["determinant"].get<double>(), -1.0, 1e-10);
    EXPECT_EQ(tasks[1]["result"]["verdict"], "nonclassical");
    EXPECT_EQ(rep.body["tool"]["version"], kToolVersion);
    EXPECT_TRUE(rep.body.contains("conventions"));
    EXPECT_FALSE(rep.body.contains("timing"));
}

TEST(Run, TaskFailureDoesNotAbortSiblings) {
    const auto cfg = parse_config(std::string(R"({
      "provider": {"state": {"modes": [{"kind": "fock", "n": 1, "cutoff": 10}]}},
      "tasks": [{"type": "witness", "max_degree": 3}, {"type": "second_order", "a": [0, 0], "b": [1, 1]}]})"));
    const auto rep = run(cfg);
    EXPECT_EQ(rep.body["tasks"][0]["status"], "error");
    EXPECT_NE(rep.body["tasks"][0]["error"].get<std::string>().find("while evaluating index"), std::string::npos);
    EXPECT_EQ(rep.body["tasks"][1]["status"], "ok");
}

TEST(Run, ProviderFailureIsReported) {
    const auto cfg = parse_config(std::string(R"({
      "provider": {"state": {"modes": [{"kind": "coherent", "alpha": 3, "cutoff": 8}]}},
      "tasks": [{"type": "witness", "max_degree": 1}]})"));
    const auto rep = run(cfg);
    EXPECT_TRUE(rep.provider_failed);
    EXPECT_EQ(rep.body["provider"]["status"], "error");
}

TEST(Emit, DeterministicModuloTiming) {
    const auto cfg = parse_config(std::string(kAtomConfig));
    const auto a = run(cfg), b = run(cfg);
    EXPECT_EQ(emit(a, Format::json_report, true), emit(b, Format::json_report, true));
    EXPECT_EQ(emit(a, Format::csv_series), emit(b, Format::csv_series));
    const std::string full = emit(a, Format::json_report);
    EXPECT_NE(full.find("\"timing\""), std::string::npos);
    EXPECT_EQ(emit(a, Format::json_report, true).find("\"timing\""), std::string::npos);
}

TEST(Emit, CanonicalFormatting) {
    json j = {{"b", 0.1}, {"a", {1, 2}}, {"c", {{"z", true}, {"y", nullptr}}}};
    EXPECT_EQ(canonical_json(j),
              "{\n  \"a\": [1, 2],\n  \"b\": 0.10000000000000001,\n  \"c\": {\n    \"y\": null,\n    \"z\": true\n  }\n}\n");
    EXPECT_EQ(format_double(std::nan("")), "null");
    EXPECT_EQ(format_double(-1.0), "-1");
}

TEST(Emit, CsvSeries) {
    const auto rep = run(parse_config(std::string(kAtomConfig)));
    const std::string csv = emit(rep, Format::csv_series);
    std::istringstream in(csv);
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, "tau,value_re,value_im");
    std::getline(in, line);
    EXPECT_EQ(line, "0,0,0");
    int rows = 1;
    while (std::getline(in, line)) ++rows;
    EXPECT_EQ(rows, 5);
    EXPECT_EQ(parse_format("csv-series"), Format::csv_series);
    EXPECT_FALSE(parse_format("xml").has_value());
}

TEST(Cli, ExitCodes) {
    const auto good = scratch("good.json", kFockConfig);
    const auto atom = scratch("atom.json", kAtomConfig);
    const auto bad = scratch("bad.json", R"({"provider": {}, "tasks": []})");
    const auto broken = scratch("broken.json", "{ not json");
    const auto risky = scratch("risky.json", R"({"provider": {"state": {"modes": [{"kind": "coherent", "alpha": 3, "cutoff": 8}]}},
                                               "tasks": [{"type": "witness", "max_degree": 1}]})");
    const auto out = good.parent_path() / "out.json";
    const auto csv = good.parent_path() / "out.csv";

    EXPECT_EQ(run_cli("--version"), 0);
    EXPECT_EQ(run_cli("validate " + good.string()), 0);
    EXPECT_EQ(run_cli("validate " + bad.string()), 2);
    EXPECT_EQ(run_cli("validate " + broken.string()), 2);
    EXPECT_EQ(run_cli("validate /nonexistent/config.json"), 2);
    EXPECT_EQ(run_cli("analyze " + good.string() + " --out " + out.string()), 0);
    EXPECT_NE(slurp(out).find("\"nonclassical\""), std::string::npos);
    EXPECT_EQ(run_cli("analyze " + bad.string()), 2);
    EXPECT_EQ(run_cli("analyze " + risky.string() + " --out " + out.string()), 3);
    EXPECT_EQ(run_cli("sweep-g2 " + atom.string() + " --out " + csv.string()), 0);
    EXPECT_EQ(slurp(csv).rfind("tau,value_re,value_im\n", 0), 0u);
    EXPECT_EQ(run_cli("sweep-g2 " + good.string()), 2);
    EXPECT_NE(run_cli("frobnicate"), 0);
}
