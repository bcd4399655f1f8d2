// riesz: run verification experiments from a config file.

#include <CLI11.hpp>

#include <atomic>
#include <csignal>
#include <iostream>
#include <thread>

#include "riesz/harness/experiments.hpp"

namespace {

std::atomic<bool> g_cancel{false};

extern "C" void on_signal(int) { g_cancel.store(true); }

}  // namespace

int main(int argc, char** argv) {
    using namespace riesz::harness;
    CLI::App app{"Damped Euler-Riesz verification harness"};
    app.require_subcommand(1);

    ExperimentSpec spec;
    spec.workers = 1;
    const std::pair<const char*, Kind> commands[] = {
        {"simulate", Kind::simulate},         {"linear-analyze", Kind::linear_analyze},
        {"decay-verify", Kind::decay_verify}, {"lp-inspect", Kind::lp_inspect},
        {"sweep", Kind::sweep},
    };
    const char* help[] = {
        "integrate a preset and record functionals, residuals and decay fits",
        "eigenvalue scan, asymptotic ratios and semigroup check of the mode matrix",
        "continuum decay quadrature and slope fits for (sigma1, sigma) pairs",
        "partition, quasi-orthogonality, Bernstein and Wu ratio tables",
        "independent runs over one parameter axis, aggregated into one table",
    };
    for (std::size_t i = 0; i < std::size(commands); ++i) {
        CLI::App* sub = app.add_subcommand(commands[i].first, help[i]);
        sub->add_option("--config", spec.config_path, "configuration file")->required()->check(CLI::ExistingFile);
        sub->add_option("--out", spec.out, "output directory")->required();
        sub->add_option("--seed", spec.seed, "seed for randomized suites")->capture_default_str();
        sub->add_option("--workers", spec.workers, "concurrent child runs")
            ->check(CLI::Range(1, 1024))
            ->capture_default_str();
        sub->add_option("--name", spec.name, "experiment name (defaults to [experiment] name)");
        const Kind kind = commands[i].second;
        sub->callback([&spec, kind] { spec.kind = kind; });
    }
    CLI11_PARSE(app, argc, argv);

    std::signal(SIGINT, on_signal);
    std::signal(SIGTERM, on_signal);
    spec.cancel = &g_cancel;
    try {
        const int code = run_experiment(spec);
        if (code == kExitRunStopped) std::cerr << "riesz: run stopped early, see manifest.json\n";
        return code;
    } catch (const ConfigError& e) {
        std::cerr << "riesz: config error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "riesz: " << e.what() << (g_cancel ? " (partial output removed)" : "") << '\n';
        return g_cancel ? 130 : 1;
    }
}
