#pragma once

// Continuum p = 2 decay oracle: ||Lambda^sigma a(t)||_{L^2} for radial data
// |a0^(xi)| = A |xi|^{-sigma1 - d/2} on |xi| <= cutoff with zero initial velocity.

#include <cmath>
#include <iomanip>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "riesz/linear/spectrum.hpp"

namespace riesz::linear {

struct PowerlawProfile {
    int dim = 1;
    double sigma1 = -0.5;
    double amplitude = 1.0;
    double cutoff = 1.0;
};

struct QuadratureOptions {
    /// Relative change between successive node doublings that stops refinement.
    double rel_tol = 1e-3;
    int initial_nodes = 256;
    int max_nodes = 1 << 22;
};

struct DecayPoint {
    double t = 0.0;
    double norm = 0.0;
    /// Same quadrature with e^{-t (c/lambda) |xi|^{2s*}} in place of the propagator.
    double reference = 0.0;
    int nodes = 0;
};

/// Surface area of the unit sphere in R^d (2 for d = 1).
inline double sphere_area(int d) {
    return 2.0 * std::pow(std::numbers::pi, 0.5 * d) / std::tgamma(0.5 * d);
}

namespace detail {

// Lower integration limit: well below the active scale t^{-1/(2s*)}.
inline double lower_limit(double t, double s_star) {
    return 1e-8 * std::min(1.0, std::pow(std::max(t, 1.0), -0.5 / s_star));
}

template <class Weight>
double radial_integral(const PowerlawProfile& prof, double sigma, double t, const Weight& weight,
                       const QuadratureOptions& opt, double s_star, int& nodes_used) {
    const double e = 2.0 * (sigma - prof.sigma1);
    const double lo = lower_limit(t, s_star);
    const double scale = sphere_area(prof.dim) * prof.amplitude * prof.amplitude;
    // log-variable integrand: xi^{2(sigma - sigma1)} * weight(xi)^2
    auto f = [&](double y) {
        const double xi = std::exp(y);
        const double w = weight(xi);
        return std::exp(e * y) * w * w;
    };
    const double ya = std::log(lo), yb = std::log(prof.cutoff);
    // below lo the weight is 1 to leading order
    const double w_lo = weight(lo);
    const double tail = std::pow(lo, e) / e * w_lo * w_lo;
    double prev = -1.0;
    for (int n = opt.initial_nodes; n <= opt.max_nodes; n *= 2) {
        const double h = (yb - ya) / (n - 1);
        double s = 0.5 * (f(ya) + f(yb));
        for (int i = 1; i < n - 1; ++i) s += f(ya + h * i);
        const double value = scale * (s * h + tail);
        nodes_used = n;
        if (prev >= 0.0 && std::abs(value - prev) <= opt.rel_tol * std::abs(value)) return value;
        prev = value;
    }
    return prev;
}

}  // namespace detail

inline std::vector<DecayPoint> linear_decay_quadrature(const PowerlawProfile& prof, const ModeSystem& base,
                                                       double sigma, const std::vector<double>& t_grid,
                                                       const QuadratureOptions& opt = {}) {
    if (!(sigma - prof.sigma1 > 0.0)) {
        std::ostringstream os;
        os << "linear_decay_quadrature: profile not integrable, need sigma - sigma1 > 0 (sigma=" << sigma
           << ", sigma1=" << prof.sigma1 << ")";
        throw Error(os.str());
    }
    require(prof.dim >= 1 && prof.cutoff > 0.0, "linear_decay_quadrature: bad profile");
    base.validate();
    std::vector<DecayPoint> out;
    for (double t : t_grid) {
        require(t >= 0.0, "linear_decay_quadrature: negative time");
        DecayPoint p;
        p.t = t;
        int nodes = 0;
        const auto prop = [&](double xi) {
            ModeSystem m = base;
            m.xi_norm = xi;
            return propagator(m, t)[0];
        };
        const double rate = base.coupling / base.damping;
        const auto heat = [&](double xi) { return std::exp(-t * rate * std::pow(xi, 2.0 * base.s_star)); };
        p.norm = std::sqrt(detail::radial_integral(prof, sigma, t, prop, opt, base.s_star, nodes));
        p.nodes = nodes;
        p.reference = std::sqrt(detail::radial_integral(prof, sigma, t, heat, opt, base.s_star, nodes));
        p.nodes = std::max(p.nodes, nodes);
        out.push_back(p);
    }
    return out;
}

inline std::string decay_csv_header() { return "t,norm,reference_norm"; }

inline std::string decay_csv_row(const DecayPoint& p) {
    std::ostringstream os;
    os << std::setprecision(17) << p.t << ',' << p.norm << ',' << p.reference;
    return os.str();
}

}  // namespace riesz::linear
