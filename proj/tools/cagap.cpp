// Command-line front end: one subcommand per experiment, reports as CSV or JSON.

#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "cagap/cagap.hpp"

namespace {

struct RawOptions {
    std::optional<double> a;
    std::optional<double> eps;
    std::vector<long long> T;
    std::vector<double> alpha;
    std::vector<double> lambda;
    std::vector<double> x0;
    std::optional<int> grid_x;
    std::optional<int> grid_y;
    std::string out;
    std::string format = "csv";
    std::string seed = "0x5EED";
    bool compactified = false;
    std::string method = "reduction";
};

void add_flags(CLI::App* cmd, RawOptions& o) {
    cmd->add_option("--a", o.a, "controllability width a in (0,1)");
    cmd->add_option("--eps", o.eps, "smoothing width in [0,0.5)");
    cmd->add_option("--T", o.T, "horizon (repeatable)")->take_all();
    cmd->add_option("--alpha", o.alpha, "discount factor (repeatable)")->take_all();
    cmd->add_option("--lambda", o.lambda, "continuous discount rate (repeatable)")->take_all();
    cmd->add_option("--x0", o.x0, "initial position (repeatable)")->take_all();
    cmd->add_option("--grid-x", o.grid_x, "DP x cells per unit length");
    cmd->add_option("--grid-y", o.grid_y, "DP y cells");
    cmd->add_option("--out", o.out, "output path (stdout when omitted)");
    cmd->add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--seed", o.seed, "64-bit seed in hex");
    cmd->add_flag("--compactified", o.compactified, "use the compactified system");
    cmd->add_option("--method", o.method, "reduction, dp or both")
        ->check(CLI::IsMember({"reduction", "dp", "both"}));
}

std::string describe(cagap::ExperimentId id) {
    using cagap::ExperimentId;
    switch (id) {
    case ExperimentId::gap: return "average vs discounted optimal cost from (0,0) with envelopes";
    case ExperimentId::prop1: return "continuous average cost: numeric minimum vs closed form";
    case ExperimentId::prop2: return "continuous discounted cost: numeric minimum vs closed form";
    case ExperimentId::prop3: return "discrete average cost over initial velocities vs target";
    case ExperimentId::prop4: return "discrete discounted cost over initial velocities vs target";
    case ExperimentId::prop5: return "smoothed discrete average cost vs target";
    case ExperimentId::prop6: return "smoothed discrete discounted cost vs target";
    case ExperimentId::prop7: return "launch-time construction on random controlled trajectories";
    case ExperimentId::tauberian_sanity: return "average and discounted means of fixed sequences";
    case ExperimentId::initial_min_equality: return "minima of both costs over initial states";
    case ExperimentId::continuity: return "adjacent-node jumps of the grid values near (0,0)";
    }
    return {};
}

cagap::ExperimentConfig to_config(cagap::ExperimentId id, const RawOptions& o) {
    cagap::ExperimentConfig c;
    c.id = id;
    c.a = o.a;
    c.eps = o.eps;
    c.T = o.T;
    c.alpha = o.alpha;
    c.lambda = o.lambda;
    c.x0 = o.x0;
    c.grid_x = o.grid_x;
    c.grid_y = o.grid_y;
    c.out = o.out;
    c.format = o.format == "json" ? cagap::OutputFormat::json : cagap::OutputFormat::csv;
    c.compactified = o.compactified;
    c.method = cagap::parse_gap_method(o.method);
    std::size_t used = 0;
    try {
        c.seed = std::stoull(o.seed, &used, 16);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != o.seed.size())
        throw cagap::InvalidParameter("seed must be a hexadecimal integer");
    return c.resolve();
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Cesaro and Abel optimal costs of a controlled discrete system"};
    app.set_version_flag("--version", std::string(cagap::kVersion));
    app.require_subcommand(1);
    RawOptions raw;
    for (const auto& [id, name] : cagap::kExperimentNames)
        add_flags(app.add_subcommand(std::string(name), describe(id)), raw);

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        const auto* cmd = app.get_subcommands().front();
        const auto config = to_config(cagap::parse_experiment_id(cmd->get_name()), raw);
        const cagap::Report report = cagap::run_experiment(config);
        cagap::write_report(report, config, std::cout);
        for (const auto& note : report.notes)
            std::cerr << note << '\n';
        std::cerr << report.experiment << ": " << (report.passed ? "passed" : "FAILED") << '\n';
        return report.passed ? 0 : 1;
    } catch (const cagap::InvalidParameter& e) {
        std::cerr << "invalid configuration: " << e.what() << '\n';
        return 2;
    }
}
