// histq — command line front end: scenario runs, norm/divergence sweeps and
// report rendering for the history quantum toolkit.

#include <cstdio>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "histq/report.hpp"
#include "histq/scenario.hpp"

namespace {

int cmd_sweep(const std::string& probe, const std::string& family, int n,
              const std::string& dims_text, std::uint64_t seed, const std::string& out,
              const std::string& weights_text, int i1) {
    using namespace histq;
    const std::vector<int> dims = parse_dims(dims_text);
    std::string csv;
    if (probe == "norms") {
        const SweepResult result =
            norm_sweep(make_state_family(family), n, dims,
                       [](const HistorySpec& s) { return Propagator::identity(s); }, seed, 512,
                       family);
        csv = sweep_csv(result);
    } else if (probe == "divergence") {
        std::vector<double> weights;
        std::stringstream ss(weights_text);
        std::string item;
        while (std::getline(ss, item, ',')) weights.push_back(std::stod(item));
        if (weights.empty()) throw ParseError("sweep: divergence probe needs --weights");
        const DivergenceResult result = divergence_probe(
            weights, i1, dims,
            [](int d) { return ComplexMatrix(ComplexMatrix::Identity(d * d, d * d)); });
        csv = divergence_csv(result);
    } else {
        throw ParseError("sweep: unknown probe '" + probe + "'");
    }
    if (out.empty() || out == "-")
        std::fputs(csv.c_str(), stdout);
    else
        write_atomic(out, csv);
    return 0;
}

int cmd_report(const std::string& out_dir, const std::string& task, const std::string& format) {
    using namespace histq;
    const std::filesystem::path path = find_report(out_dir, task);
    std::ifstream in(path);
    nlohmann::json rep;
    in >> rep;
    if (format == "json")
        std::cout << rep.dump(2) << "\n";
    else
        std::cout << render_text(rep);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"histq — decoherence functionals on finite history spaces"};
    app.require_subcommand(1);

    auto* run = app.add_subcommand("run", "execute a scenario file");
    std::string scenario_path;
    std::string run_out = "out";
    bool parallel = false;
    run->add_option("scenario", scenario_path, "scenario JSON file")->required();
    run->add_option("--out", run_out, "output directory for reports");
    run->add_flag("--parallel", parallel, "run independent tasks concurrently");

    auto* sweep = app.add_subcommand("sweep", "norm or divergence sweep to CSV");
    std::string probe = "norms", family = "pure", dims = "2..8", sweep_out, weights;
    int n = 1, i1 = 0;
    std::uint64_t seed = 0;
    sweep->add_option("--probe", probe, "norms | divergence");
    sweep->add_option("--family", family, "pure | maximally_mixed | geometric:<r>");
    sweep->add_option("--n", n, "number of time slots");
    sweep->add_option("--dims", dims, "dimension list, e.g. 2..8 or 2,3,5");
    sweep->add_option("--seed", seed, "random seed");
    sweep->add_option("--out", sweep_out, "CSV output file ('-' for stdout)");
    sweep->add_option("--weights", weights, "divergence probe weights, e.g. 0.4,0.3,0.2,0.1");
    sweep->add_option("--i1", i1, "distinguished weight index for the divergence probe");

    auto* report = app.add_subcommand("report", "render a stored task report");
    std::string rep_dir, rep_task, rep_format = "text";
    report->add_option("--scenario", rep_dir, "output directory of a prior run")->required();
    report->add_option("--task", rep_task, "task index or kind")->required();
    report->add_option("--format", rep_format, "json | text");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 64;
    }

    try {
        if (run->parsed()) return histq::run_scenario(scenario_path, run_out, parallel);
        if (sweep->parsed())
            return cmd_sweep(probe, family, n, dims, seed, sweep_out, weights, i1);
        if (report->parsed()) return cmd_report(rep_dir, rep_task, rep_format);
    } catch (const histq::NotFound& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const histq::Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 64;
}
