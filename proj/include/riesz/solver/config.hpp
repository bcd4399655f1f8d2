#pragma once

#include <algorithm>
#include <atomic>
#include <string>
#include <vector>

#include "riesz/error.hpp"

namespace riesz::solver {

enum class Integrator { if_rk4, exp_euler };

inline std::string to_string(Integrator i) { return i == Integrator::if_rk4 ? "if-rk4" : "exp-euler"; }

inline Integrator parse_integrator(const std::string& s) {
    if (s == "if-rk4" || s == "rk4") return Integrator::if_rk4;
    if (s == "exp-euler" || s == "euler") return Integrator::exp_euler;
    throw Error("unknown integrator '" + s + "' (expected if-rk4 or exp-euler)");
}

struct SolverConfig {
    double dt = 1e-2;
    double t_end = 1.0;
    Integrator integrator = Integrator::if_rk4;
    /// Fraction of the per-axis Nyquist index kept after each product (2/3 rule).
    double dealias = 2.0 / 3.0;
    /// Times at which the state is recorded; empty means {0, t_end}.
    std::vector<double> snapshot_times;
    /// Minimum allowed density 1 + a.
    double positivity_floor = 1e-3;
    bool nonlinear = true;
    /// Polled once per step; a set flag aborts the run with an Error.
    const std::atomic<bool>* cancel = nullptr;

    void validate() const {
        require(dt > 0.0, "solver config: dt must be positive");
        require(t_end >= 0.0, "solver config: t_end must be nonnegative");
        require(dealias > 0.0 && dealias <= 1.0, "solver config: dealias must lie in (0, 1]");
        require(positivity_floor > 0.0 && positivity_floor < 1.0, "solver config: positivity_floor must lie in (0, 1)");
        for (double t : snapshot_times) require(t >= 0.0 && t <= t_end, "solver config: snapshot time outside [0, t_end]");
    }

    /// Sorted, de-duplicated snapshot schedule.
    std::vector<double> schedule() const {
        std::vector<double> s = snapshot_times.empty() ? std::vector<double>{0.0, t_end} : snapshot_times;
        std::sort(s.begin(), s.end());
        s.erase(std::unique(s.begin(), s.end()), s.end());
        return s;
    }
};

/// Step size guideline dt <= c / max(|xi|_max ||u||_inf, 1).
inline double cfl_step(double xi_max, double u_max, double c = 0.5) { return c / std::max(xi_max * u_max, 1.0); }

}  // namespace riesz::solver
