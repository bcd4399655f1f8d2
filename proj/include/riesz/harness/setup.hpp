#pragma once

// Config sections -> grid, parameters, solver settings, preset and diagnostic options.

#include <iomanip>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "riesz/harness/config.hpp"
#include "riesz/solver/presets.hpp"
#include "riesz/solver/solver.hpp"

namespace riesz::harness {

enum class Kind { simulate, linear_analyze, decay_verify, lp_inspect, sweep };

inline std::string to_string(Kind k) {
    switch (k) {
        case Kind::simulate: return "simulate";
        case Kind::linear_analyze: return "linear-analyze";
        case Kind::decay_verify: return "decay-verify";
        case Kind::lp_inspect: return "lp-inspect";
        case Kind::sweep: return "sweep";
    }
    return "?";
}

inline Kind parse_kind(const std::string& s) {
    for (Kind k : {Kind::simulate, Kind::linear_analyze, Kind::decay_verify, Kind::lp_inspect, Kind::sweep})
        if (to_string(k) == s) return k;
    throw Error("unknown experiment kind '" + s + "'");
}

inline const std::map<std::string, std::set<std::string>>& config_schema() {
    static const std::map<std::string, std::set<std::string>> schema{
        {"experiment", {"name", "kind"}},
        {"grid", {"dim", "length", "modes"}},
        {"params", {"s_star", "alpha", "lambda", "kappa", "rho_bar"}},
        {"solver", {"dt", "t_end", "integrator", "dealias", "positivity_floor", "nonlinear", "snapshot_every",
                    "snapshot_times"}},
        {"preset", {"kind", "amplitude", "sigma1", "mode", "width", "cutoff", "velocity", "random_phase"}},
        {"diagnostics", {"p", "J1", "c_tilde", "fit_t0", "fit_t1", "predicted_slope", "residual_times", "lyapunov",
                         "linear_reference"}},
        {"output", {"snapshots"}},
        {"linear", {"s_star", "xi_min", "xi_max", "points", "propagator_samples", "t_max"}},
        {"decay", {"dim", "s_star", "sigma1", "sigma", "t_min", "t_max", "points", "cutoff", "rel_tol"}},
        {"lp", {"samples", "bernstein_k", "wu_p", "wu_alpha"}},
        {"sweep", {"axis", "values", "mode", "iterations", "s_star"}},
    };
    return schema;
}

enum class SnapshotOutput { none, ends, all };

struct DiagnosticOptions {
    double p = 2.0;
    int J1 = 0;
    double c_tilde = 0.05;
    std::optional<double> fit_t0;
    std::optional<double> fit_t1;
    /// Overrides the slope expected for the density L2 norm.
    std::optional<double> predicted_slope;
    /// Centres of residual windows {t - dt, t, t + dt}.
    std::vector<double> residual_times;
    bool lyapunov = false;
    /// Also run with the nonlinear terms disabled and fit that run.
    bool linear_reference = false;
};

struct RunSetup {
    SpectralGrid grid;
    RieszParams params;
    solver::SolverConfig solver;
    solver::PresetOptions preset;
    DiagnosticOptions diag;
    SnapshotOutput snapshots = SnapshotOutput::ends;
    /// Regularly spaced diagnostic times; 0 uses solver.snapshot_times or {0, t_end}.
    double snapshot_every = 0.0;

    /// Diagnostic (regular) times, sorted.
    std::vector<double> regular_times() const {
        std::vector<double> out;
        if (snapshot_every > 0.0) {
            const long n = static_cast<long>(std::floor(solver.t_end / snapshot_every + 1e-9));
            for (long i = 0; i <= n; ++i) out.push_back(std::min(solver.t_end, snapshot_every * static_cast<double>(i)));
            if (out.back() < solver.t_end) out.push_back(solver.t_end);
        } else {
            solver::SolverConfig c = solver;
            out = c.schedule();
        }
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
        return out;
    }
};

inline std::string grid_descriptor(const SpectralGrid& g) {
    std::ostringstream os;
    os << std::setprecision(17) << g.dim() << "d L=";
    for (int i = 0; i < g.dim(); ++i) os << (i ? "x" : "") << g.length(i);
    os << " N=";
    for (int i = 0; i < g.dim(); ++i) os << (i ? "x" : "") << g.modes(i);
    return os.str();
}

namespace detail {

template <class F>
auto rethrow_at(const Config& cfg, const std::string& section, const std::string& key, F&& f) {
    try {
        return f();
    } catch (const ConfigError&) {
        throw;
    } catch (const Error& e) {
        cfg.fail(section, key, e.what());
    }
}

}  // namespace detail

inline SpectralGrid parse_grid(const Config& cfg) {
    const long dim = cfg.get_int("grid", "dim", 1);
    if (dim != 1 && dim != 2) cfg.fail("grid", "dim", "grid dimension must be 1 or 2");
    std::vector<double> len = cfg.get_doubles("grid", "length", {2.0 * std::numbers::pi});
    std::vector<long> modes = cfg.get_ints("grid", "modes", {64});
    if (len.size() == 1 && dim == 2) len.push_back(len[0]);
    if (modes.size() == 1 && dim == 2) modes.push_back(modes[0]);
    if (len.size() != static_cast<std::size_t>(dim)) cfg.fail("grid", "length", "need one length per axis");
    if (modes.size() != static_cast<std::size_t>(dim)) cfg.fail("grid", "modes", "need one mode count per axis");
    std::vector<std::size_t> n;
    for (long m : modes) {
        if (m <= 0) cfg.fail("grid", "modes", "mode counts must be positive");
        n.push_back(static_cast<std::size_t>(m));
    }
    return detail::rethrow_at(cfg, "grid", "modes", [&] { return make_grid(static_cast<int>(dim), len, n); });
}

inline RieszParams parse_params(const Config& cfg, int dim) {
    RieszParams p;
    p.dim = dim;
    if (cfg.has("params", "s_star") && cfg.has("params", "alpha"))
        cfg.fail("params", "alpha", "give either s_star or alpha, not both");
    if (cfg.has("params", "alpha")) {
        p.alpha = cfg.get_double("params", "alpha", 0.0);
    } else {
        p.alpha = 2.0 * cfg.get_double("params", "s_star", 0.5) + dim - 2.0;
    }
    p.lambda = cfg.get_double("params", "lambda", 1.0);
    p.kappa = cfg.get_double("params", "kappa", 1.0);
    p.rho_bar = cfg.get_double("params", "rho_bar", 1.0);
    const std::string key = cfg.has("params", "alpha") ? "alpha" : "s_star";
    detail::rethrow_at(cfg, "params", key, [&] {
        p.validate();
        return 0;
    });
    return p;
}

inline solver::SolverConfig parse_solver(const Config& cfg) {
    solver::SolverConfig s;
    s.dt = cfg.get_double("solver", "dt", s.dt);
    s.t_end = cfg.get_double("solver", "t_end", s.t_end);
    s.integrator = detail::rethrow_at(cfg, "solver", "integrator",
                                      [&] { return solver::parse_integrator(cfg.get_string("solver", "integrator", "if-rk4")); });
    s.dealias = cfg.get_double("solver", "dealias", s.dealias);
    s.positivity_floor = cfg.get_double("solver", "positivity_floor", s.positivity_floor);
    s.nonlinear = cfg.get_bool("solver", "nonlinear", true);
    s.snapshot_times = cfg.get_doubles("solver", "snapshot_times", {});
    if (!(s.dt > 0.0)) cfg.fail("solver", "dt", "must be positive");
    if (!(s.t_end >= 0.0)) cfg.fail("solver", "t_end", "must be nonnegative");
    if (!(s.dealias > 0.0 && s.dealias <= 1.0)) cfg.fail("solver", "dealias", "must lie in (0, 1]");
    if (!(s.positivity_floor > 0.0 && s.positivity_floor < 1.0))
        cfg.fail("solver", "positivity_floor", "must lie in (0, 1)");
    for (double t : s.snapshot_times)
        if (t < 0.0 || t > s.t_end) cfg.fail("solver", "snapshot_times", "times must lie in [0, t_end]");
    return s;
}

inline solver::PresetOptions parse_preset(const Config& cfg, std::uint64_t seed) {
    solver::PresetOptions o;
    o.kind = detail::rethrow_at(cfg, "preset", "kind",
                                [&] { return solver::parse_preset(cfg.get_string("preset", "kind", "single-mode")); });
    o.amplitude = cfg.get_double("preset", "amplitude", o.amplitude);
    o.sigma1 = cfg.get_double("preset", "sigma1", o.sigma1);
    o.mode = static_cast<int>(cfg.get_int("preset", "mode", o.mode));
    o.width = cfg.get_double("preset", "width", o.width);
    o.cutoff = cfg.get_double("preset", "cutoff", o.cutoff);
    o.velocity = detail::rethrow_at(cfg, "preset", "velocity",
                                    [&] { return solver::parse_velocity(cfg.get_string("preset", "velocity", "zero")); });
    // phase seed 0 means "no random phases"; keep a random-phase run nonzero
    o.phase_seed = cfg.get_bool("preset", "random_phase", false) ? seed * 2 + 1 : 0;
    if (!(o.amplitude > 0.0 && o.amplitude < 1.0)) cfg.fail("preset", "amplitude", "must lie in (0, 1)");
    if (!(o.width > 0.0 && o.width <= 0.5)) cfg.fail("preset", "width", "must lie in (0, 0.5]");
    if (!(o.cutoff > 0.0)) cfg.fail("preset", "cutoff", "must be positive");
    if (o.mode < 1) cfg.fail("preset", "mode", "must be >= 1");
    return o;
}

inline DiagnosticOptions parse_diagnostics(const Config& cfg, const solver::SolverConfig& s) {
    DiagnosticOptions d;
    d.p = cfg.get_double("diagnostics", "p", d.p);
    d.J1 = static_cast<int>(cfg.get_int("diagnostics", "J1", d.J1));
    d.c_tilde = cfg.get_double("diagnostics", "c_tilde", d.c_tilde);
    if (cfg.has("diagnostics", "fit_t0")) d.fit_t0 = cfg.get_double("diagnostics", "fit_t0", 0.0);
    if (cfg.has("diagnostics", "fit_t1")) d.fit_t1 = cfg.get_double("diagnostics", "fit_t1", 0.0);
    if (cfg.has("diagnostics", "predicted_slope"))
        d.predicted_slope = cfg.get_double("diagnostics", "predicted_slope", 0.0);
    d.residual_times = cfg.get_doubles("diagnostics", "residual_times", {});
    d.lyapunov = cfg.get_bool("diagnostics", "lyapunov", false);
    d.linear_reference = cfg.get_bool("diagnostics", "linear_reference", false);
    if (!(d.p >= 1.0)) cfg.fail("diagnostics", "p", "must be >= 1");
    if (!(d.c_tilde >= 0.0)) cfg.fail("diagnostics", "c_tilde", "must be nonnegative");
    for (double t : d.residual_times)
        if (t - s.dt < 0.0 || t + s.dt > s.t_end)
            cfg.fail("diagnostics", "residual_times", "each centre t needs [t - dt, t + dt] inside [0, t_end]");
    return d;
}

inline RunSetup parse_run(const Config& cfg, std::uint64_t seed) {
    RunSetup r;
    r.grid = parse_grid(cfg);
    r.params = parse_params(cfg, r.grid.dim());
    r.solver = parse_solver(cfg);
    r.preset = parse_preset(cfg, seed);
    r.diag = parse_diagnostics(cfg, r.solver);
    r.snapshot_every = cfg.get_double("solver", "snapshot_every", 0.0);
    if (r.snapshot_every < 0.0) cfg.fail("solver", "snapshot_every", "must be nonnegative");
    if (r.snapshot_every > 0.0 && !r.solver.snapshot_times.empty())
        cfg.fail("solver", "snapshot_every", "give either snapshot_every or snapshot_times");
    const std::string out = cfg.get_string("output", "snapshots", "ends");
    if (out == "none") r.snapshots = SnapshotOutput::none;
    else if (out == "ends") r.snapshots = SnapshotOutput::ends;
    else if (out == "all") r.snapshots = SnapshotOutput::all;
    else cfg.fail("output", "snapshots", "expected none, ends or all");
    return r;
}

}  // namespace riesz::harness
