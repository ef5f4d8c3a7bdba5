#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cagap/experiments.hpp"

using namespace cagap;

namespace {

std::string csv(const Report& r) {
    std::ostringstream os;
    write_csv(r, os);
    return os.str();
}

std::string first_line(const std::string& s) { return s.substr(0, s.find('\n')); }

ExperimentConfig small_gap() {
    ExperimentConfig c;
    c.id = ExperimentId::gap;
    c.T = {100};
    c.alpha = {0.9};
    return c;
}

int run_cli(const std::string& args) {
    const std::string cmd = std::string(CAGAP_CLI_PATH) + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

} // namespace

TEST(ExperimentId, NamesRoundTrip) {
    for (const auto& [id, name] : kExperimentNames)
        EXPECT_EQ(parse_experiment_id(name), id);
    EXPECT_THROW(parse_experiment_id("prop9"), InvalidParameter);
}

TEST(ExperimentConfig, DefaultsPerExperiment) {
    auto c = small_gap();
    c.T.clear();
    c.alpha.clear();
    const auto r = c.resolve();
    EXPECT_EQ(r.T, (std::vector<long long>{1000, 10000, 100000}));
    EXPECT_EQ(*r.a, 1e-4);
    EXPECT_EQ(*r.eps, 1e-2);
    ExperimentConfig p;
    p.id = ExperimentId::prop2;
    EXPECT_EQ(p.resolve().x0, (std::vector<double>{0.0, 0.25, 0.5, 0.9}));
    EXPECT_EQ(p.resolve().lambda.size(), 3u);
}

TEST(ExperimentConfig, Validation) {
    auto c = small_gap();
    c.alpha = {1.0};
    EXPECT_THROW(c.resolve(), InvalidParameter);
    c = small_gap();
    c.T = {0};
    EXPECT_THROW(c.resolve(), InvalidParameter);
    c = small_gap();
    c.a = 0.05;
    EXPECT_THROW(c.resolve(), InvalidParameter);
    ExperimentConfig p;
    p.id = ExperimentId::prop2;
    p.lambda = {0.7};
    EXPECT_THROW(p.resolve(), InvalidParameter);
    p.lambda = {0.1};
    p.x0 = {1.0};
    EXPECT_THROW(p.resolve(), InvalidParameter);
    p = {};
    p.grid_x = 1;
    EXPECT_THROW(p.resolve(), InvalidParameter);
}

TEST(Report, RejectsRowsOfWrongWidth) {
    Report r;
    r.columns = {"a", "b"};
    EXPECT_THROW(r.add({1.0}), std::logic_error);
}

TEST(Report, CellFormatting) {
    EXPECT_EQ(format_cell(Cell{0.1}), "0.10000000000000001");
    EXPECT_EQ(format_cell(Cell{42LL}), "42");
    EXPECT_EQ(format_cell(Cell{true}), "true");
    EXPECT_EQ(format_cell(Cell{std::string("x")}), "x");
}

TEST(RunGap, TinyRunIsReportedNotCertified) {
    const Report r = run_gap(small_gap());
    ASSERT_EQ(r.rows.size(), 1u);
    EXPECT_EQ(first_line(csv(r)),
              "T,alpha,a,eps,method,V_estimate,h_estimate,V_envelope,h_envelope,"
              "certified_gap_lower_bound,V_dp,h_dp,status,passed");
    EXPECT_EQ(std::get<std::string>(r.rows[0][12]), "not-certified");
    EXPECT_LT(std::get<double>(r.rows[0][9]), kCertifiedGap);
    EXPECT_TRUE(r.passed);
}

TEST(RunGap, CompactificationDoesNotChangeEstimates) {
    auto c = small_gap();
    c.T = {1000};
    c.alpha = {0.999};
    const Report open = run_gap(c);
    c.compactified = true;
    const Report closed = run_gap(c);
    for (std::size_t k : {5u, 6u})
        EXPECT_NEAR(std::get<double>(open.rows[0][k]), std::get<double>(closed.rows[0][k]), 1e-12);
}

TEST(RunGap, CoarseRowIsFlaggedNotThrown) {
    auto c = small_gap();
    c.T = {10};
    const Report r = run_gap(c);
    EXPECT_EQ(std::get<std::string>(r.rows[0][12]), "insufficient-resolution");
    EXPECT_TRUE(r.passed);
}

TEST(Reports, DeterministicGivenConfig) {
    ExperimentConfig c;
    c.id = ExperimentId::prop7;
    c.T = {200};
    EXPECT_EQ(csv(run_construction_check(c, 50)), csv(run_construction_check(c, 50)));
    ExperimentConfig reseeded = c;
    reseeded.seed = 7;
    EXPECT_NE(csv(run_construction_check(c, 50)), csv(run_construction_check(reseeded, 50)));
    ExperimentConfig p;
    p.id = ExperimentId::prop3;
    p.T = {100};
    EXPECT_EQ(csv(run_proposition_suite(p)), csv(run_proposition_suite(p)));
}

TEST(Reports, HeadersEmittedWithoutRows) {
    Report r;
    r.columns = {"x", "y"};
    EXPECT_EQ(csv(r), "x,y\n");
}

TEST(Reports, CsvWithSidecar) {
    const auto dir = std::filesystem::temp_directory_path() / "cagap_test_reports";
    std::filesystem::create_directories(dir);
    auto c = small_gap();
    c.out = (dir / "gap.csv").string();
    const auto resolved = c.resolve();
    const Report r = run_gap(resolved);
    std::ostringstream unused;
    write_report(r, resolved, unused);
    EXPECT_TRUE(unused.str().empty());
    std::ifstream table(c.out);
    std::string header;
    std::getline(table, header);
    EXPECT_EQ(header, first_line(csv(r)));
    std::ifstream side(c.out + ".json");
    const auto j = nlohmann::json::parse(side);
    EXPECT_EQ(j["config"]["experiment"], "gap");
    EXPECT_EQ(j["config"]["version"], std::string(kVersion));
    EXPECT_EQ(j["config"]["seed"], "0x5EED");
    EXPECT_EQ(j["columns"].size(), r.columns.size());
}

TEST(Reports, JsonDocument) {
    auto c = small_gap().resolve();
    c.format = OutputFormat::json;
    std::ostringstream os;
    write_report(run_gap(c), c, os);
    const auto j = nlohmann::json::parse(os.str());
    EXPECT_EQ(j["rows"].size(), 1u);
    EXPECT_EQ(j["rows"][0]["status"], "not-certified");
}

TEST(RunExperiments, PropositionSuitesPass) {
    for (auto id : {ExperimentId::prop1, ExperimentId::prop2, ExperimentId::prop3}) {
        ExperimentConfig c;
        c.id = id;
        c.T = {10, 100};
        const Report r = run_experiment(c);
        EXPECT_TRUE(r.passed) << to_string(id);
        EXPECT_EQ(r.columns.size(), 10u);
    }
}

TEST(RunExperiments, InitialMinimaNegativeControl) {
    ExperimentConfig c;
    c.id = ExperimentId::initial_min_equality;
    c.x0 = {0.5, 2.5};
    const Report r = run_initial_min_equality(c);
    EXPECT_TRUE(r.passed);
    ASSERT_EQ(r.notes.size(), 2u);
    for (const auto& row : r.rows)
        EXPECT_GT(std::get<double>(row[2]), 0.0);
}

TEST(Cli, ExitCodes) {
    EXPECT_EQ(run_cli("prop1 --T 10 --x0 0 0.5"), 0);
    EXPECT_EQ(run_cli("gap --T 100 --alpha 0.9"), 0);
    EXPECT_EQ(run_cli("prop1 --T 0"), 2);
    EXPECT_EQ(run_cli("gap --a 0.5 --eps 0.01"), 2);
    EXPECT_EQ(run_cli("gap --seed xyz"), 2);
    EXPECT_EQ(run_cli("nonsense"), 2);
    EXPECT_EQ(run_cli("gap --format yaml"), 2);
    EXPECT_EQ(run_cli("prop7 --T 200"), 1);
    EXPECT_EQ(run_cli("--version"), 0);
}
