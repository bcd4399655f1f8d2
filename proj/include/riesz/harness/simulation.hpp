#pragma once

// One solver run plus the diagnostics recorded along it.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "riesz/diagnostics/decay_fit.hpp"
#include "riesz/diagnostics/effective_velocity.hpp"
#include "riesz/diagnostics/functionals.hpp"
#include "riesz/harness/setup.hpp"

namespace riesz::harness {

struct LyapunovSample {
    double t = 0.0;
    int j = 0;
    diagnostics::LyapunovReport report;
};

struct ResidualSample {
    diagnostics::ResidualReport low_a;
    diagnostics::ResidualReport low_z;
};

struct SimulationReport {
    solver::Trajectory trajectory;
    /// Indices into trajectory.snapshots of the regular diagnostic times.
    std::vector<std::size_t> regular;
    std::vector<diagnostics::FunctionalRecord> functionals;
    std::vector<double> l2_a;
    std::vector<double> l2_u;
    std::vector<LyapunovSample> lyapunov;
    std::vector<ResidualSample> residuals;
    std::optional<solver::Trajectory> linear;
    std::vector<double> linear_l2_a;
    std::vector<diagnostics::DecayFit> fits;
    std::vector<std::string> notes;
};

/// Slope expected for ||a||_{L2}: -(0 - sigma1)/(2 s*) for power-law data, else NaN.
inline double predicted_l2_slope(const RunSetup& s) {
    if (s.diag.predicted_slope) return *s.diag.predicted_slope;
    if (s.preset.kind != solver::PresetKind::powerlaw) return std::numeric_limits<double>::quiet_NaN();
    return s.preset.sigma1 / (2.0 * s.params.s_star());
}

namespace detail {

inline std::optional<std::size_t> find_time(const std::vector<FieldState>& snaps, double t) {
    for (std::size_t i = 0; i < snaps.size(); ++i)
        if (snaps[i].t == t) return i;
    return std::nullopt;
}

inline void try_fit(SimulationReport& r, const std::vector<double>& t, const std::vector<double>& y, double predicted,
                    double t0, double t1, const std::string& name) {
    try {
        r.fits.push_back(diagnostics::fit_decay(t, y, predicted, t0, t1, name));
    } catch (const Error& e) {
        r.notes.push_back(name + ": " + e.what());
    }
}

}  // namespace detail

inline SimulationReport simulate_run(const RunSetup& s) {
    SimulationReport r;
    const FieldState init = solver::perturbation_preset(s.grid, s.params, s.preset);
    const std::vector<double> regular = s.regular_times();
    solver::SolverConfig cfg = s.solver;
    cfg.snapshot_times = regular;
    for (double c : s.diag.residual_times)
        for (double t : {c - cfg.dt, c, c + cfg.dt}) cfg.snapshot_times.push_back(t);
    r.trajectory = solver::integrate(init, s.params, cfg);
    const auto& snaps = r.trajectory.snapshots;

    for (double t : regular)
        if (auto i = detail::find_time(snaps, t)) r.regular.push_back(*i);

    const lp::LPPartition part = lp::build_partition(s.grid);
    std::vector<double> times;
    for (std::size_t i : r.regular) {
        const FieldState& st = snaps[i];
        times.push_back(st.t);
        r.functionals.push_back(diagnostics::energy_functionals(st, s.params, part, s.diag.J1, s.diag.p));
        r.l2_a.push_back(l2_norm(st.a));
        r.l2_u.push_back(l2_norm(st.u));
        if (s.diag.lyapunov)
            for (int j = std::max(s.diag.J1 - 1, part.j_min()); j <= part.j_max(); ++j)
                r.lyapunov.push_back({st.t, j, diagnostics::lyapunov_block(st, j, s.diag.c_tilde, part, s.params, s.diag.J1)});
    }
    if (!r.functionals.empty() && !r.functionals.front().warning.empty()) r.notes.push_back(r.functionals.front().warning);

    for (double c : s.diag.residual_times) {
        const auto i0 = detail::find_time(snaps, c - cfg.dt);
        const auto i1 = detail::find_time(snaps, c);
        const auto i2 = detail::find_time(snaps, c + cfg.dt);
        if (!i0 || !i1 || !i2) continue;
        const std::vector<FieldState> w{snaps[*i0], snaps[*i1], snaps[*i2]};
        r.residuals.push_back({diagnostics::low_a_residual(w, s.params, cfg.dealias),
                               diagnostics::z_equation_residual(w, s.params, cfg.dealias)});
    }

    const auto [d0, d1] = diagnostics::default_window(s.solver.t_end);
    const double t0 = s.diag.fit_t0.value_or(d0);
    const double t1 = s.diag.fit_t1.value_or(d1);
    const double pred = predicted_l2_slope(s);
    if (r.trajectory.ok()) {
        detail::try_fit(r, times, r.l2_a, pred, t0, t1, "a_l2");
        std::vector<double> high;
        for (const auto& f : r.functionals) high.push_back(f.a_high);
        detail::try_fit(r, times, high, 2.0 * pred, t0, t1, "a_high");
    } else {
        r.notes.push_back("run stopped: " + solver::to_string(r.trajectory.status) + " at t = " +
                          std::to_string(r.trajectory.failure_time) + " (" + r.trajectory.message + ")");
    }

    if (s.diag.linear_reference) {
        solver::SolverConfig lc = s.solver;
        lc.nonlinear = false;
        lc.snapshot_times = regular;
        r.linear = solver::integrate(init, s.params, lc);
        std::vector<double> lt;
        for (const FieldState& st : r.linear->snapshots) {
            lt.push_back(st.t);
            r.linear_l2_a.push_back(l2_norm(st.a));
        }
        detail::try_fit(r, lt, r.linear_l2_a, pred, t0, t1, "a_l2_linear");
    }
    return r;
}

}  // namespace riesz::harness
