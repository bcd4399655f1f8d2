#pragma once

// Mode-wise analysis of the linearized system acting on (a^, m^):
//   d/dt (a, m) = A (a, m),  A = [[0, -|xi|], [c |xi|^{2s*-1}, -lambda]].

#include <array>
#include <cmath>
#include <complex>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include "riesz/error.hpp"
#include "riesz/field.hpp"

namespace riesz::linear {

using complex = std::complex<double>;

/// Row-major 2x2 real matrix.
using Mat2 = std::array<double, 4>;

inline Mat2 identity2() { return {1.0, 0.0, 0.0, 1.0}; }

inline Mat2 operator*(const Mat2& x, const Mat2& y) {
    return {x[0] * y[0] + x[1] * y[2], x[0] * y[1] + x[1] * y[3], x[2] * y[0] + x[3] * y[2],
            x[2] * y[1] + x[3] * y[3]};
}

inline double max_abs_diff(const Mat2& x, const Mat2& y) {
    double m = 0.0;
    for (int i = 0; i < 4; ++i) m = std::max(m, std::abs(x[i] - y[i]));
    return m;
}

/// Induced 2-norm.
inline double operator_norm(const Mat2& m) {
    const double a = m[0] * m[0] + m[2] * m[2];
    const double b = m[0] * m[1] + m[2] * m[3];
    const double d = m[1] * m[1] + m[3] * m[3];
    const double tr = a + d;
    const double disc = std::sqrt(std::max(0.0, 0.25 * (a - d) * (a - d) + b * b));
    return std::sqrt(0.5 * tr + disc);
}

/// One Fourier mode of the linear operator.
struct ModeSystem {
    double xi_norm = 0.0;
    double s_star = 0.5;
    double damping = 1.0;   // lambda
    double coupling = 1.0;  // kappa * rho_bar

    static ModeSystem from(double xi_norm, const RieszParams& p) {
        return {xi_norm, p.s_star(), p.lambda, p.coupling()};
    }

    double trace() const { return -damping; }
    double det() const { return coupling * std::pow(xi_norm, 2.0 * s_star); }

    Mat2 matrix() const {
        const double lower = xi_norm > 0.0 ? coupling * std::pow(xi_norm, 2.0 * s_star - 1.0) : 0.0;
        return {0.0, -xi_norm, lower, -damping};
    }

    void validate() const {
        require(xi_norm >= 0.0 && std::isfinite(xi_norm), "mode: |xi| must be finite and >= 0");
        require(s_star > 0.0 && s_star < 1.0, "mode: need 0 < s* < 1");
        require(damping > 0.0 && coupling > 0.0, "mode: damping and coupling must be positive");
    }
};

struct EigenPair {
    complex lambda1;  // slow branch (tends to 0 as |xi| -> 0)
    complex lambda2;  // fast branch (tends to -lambda)
    bool degenerate = false;
};

inline constexpr double kDegenerateTolerance = 1e-14;

inline bool is_degenerate(const ModeSystem& m) {
    return std::abs(4.0 * m.det() / (m.damping * m.damping) - 1.0) <= kDegenerateTolerance;
}

inline EigenPair eigenvalues(const ModeSystem& m) {
    m.validate();
    const double mu = -0.5 * m.damping;
    const double det = m.det();
    const double delta = mu * mu - det;
    EigenPair e;
    e.degenerate = is_degenerate(m);
    if (e.degenerate) {
        e.lambda1 = e.lambda2 = mu;
    } else if (delta > 0.0) {
        const double l2 = mu - std::sqrt(delta);
        e.lambda2 = l2;
        e.lambda1 = det / l2;  // avoids cancellation in mu + sqrt(delta)
    } else {
        const double w = std::sqrt(-delta);
        e.lambda1 = complex(mu, w);
        e.lambda2 = complex(mu, -w);
    }
    return e;
}

/// Normalized system (lambda = kappa = rho_bar = 1).
inline EigenPair eigenvalues(double xi_norm, double s_star) { return eigenvalues(ModeSystem{xi_norm, s_star}); }

/// e^{tA} = C(t) I + S(t) (A - mu I), mu = trace/2, evaluated without
/// cancellation in each regime of the discriminant.
inline Mat2 propagator(const ModeSystem& m, double t) {
    m.validate();
    if (!(t >= 0.0)) {
        std::ostringstream os;
        os << "propagator: need t >= 0, got " << t;
        throw Error(os.str());
    }
    const double mu = -0.5 * m.damping;
    const double det = m.det();
    const double delta = mu * mu - det;
    double c = 0.0, s = 0.0;
    if (is_degenerate(m)) {
        c = std::exp(mu * t);
        s = t * c;
    } else if (delta > 0.0) {
        const double q = std::sqrt(delta);
        const double l2 = mu - q;
        const double l1 = det / l2;
        const double e1 = std::exp(l1 * t);
        const double e2 = std::exp(l2 * t);
        c = 0.5 * (e1 + e2);
        s = 2.0 * q * t > 1.0 ? (e1 - e2) / (2.0 * q) : e2 * std::expm1(2.0 * q * t) / (2.0 * q);
    } else {
        const double w = std::sqrt(-delta);
        const double e = std::exp(mu * t);
        c = e * std::cos(w * t);
        s = e * std::sin(w * t) / w;
    }
    const Mat2 a = m.matrix();
    return {c + s * (a[0] - mu), s * a[1], s * a[2], c + s * (a[3] - mu)};
}

inline Mat2 propagator(double xi_norm, double s_star, double t) { return propagator(ModeSystem{xi_norm, s_star}, t); }

/// Damping factor of the curl part: omega(t) = e^{-lambda t} omega(0).
inline double vorticity_decay(double t, double damping = 1.0) {
    require(t >= 0.0, "vorticity_decay: need t >= 0");
    return std::exp(-damping * t);
}

enum class Regime { low, high };

struct AsymptoticRow {
    double xi = 0.0;
    double ratio1 = 0.0;
    double ratio2 = 0.0;
};

/// low:  lambda1 / (-|xi|^{2s*}) and lambda2 / (-1) for |xi| = 1e-1 ... 1e-6.
/// high: Re lambda / (-1/2) and |Im lambda| / |xi|^{s*} for |xi| = 10 ... 1e6.
inline std::vector<AsymptoticRow> asymptotic_check(double s_star, Regime regime) {
    std::vector<AsymptoticRow> rows;
    for (int k = 1; k <= 6; ++k) {
        const double xi = regime == Regime::low ? std::pow(10.0, -k) : std::pow(10.0, k);
        const EigenPair e = eigenvalues(xi, s_star);
        if (regime == Regime::low) {
            rows.push_back({xi, e.lambda1.real() / -std::pow(xi, 2.0 * s_star), e.lambda2.real() / -1.0});
        } else {
            rows.push_back({xi, e.lambda1.real() / -0.5, std::abs(e.lambda1.imag()) / std::pow(xi, s_star)});
        }
    }
    return rows;
}

struct DissipativeScan {
    /// Largest c with max Re lambda <= -c x / (1 + x), x = |xi|^{2s*}, over the scan.
    double constant = 0.0;
    double worst_xi = 0.0;
};

inline std::vector<double> log_grid(double lo, double hi, int points) {
    require(lo > 0.0 && hi > lo && points >= 2, "log_grid: need 0 < lo < hi and >= 2 points");
    std::vector<double> out(static_cast<std::size_t>(points));
    const double step = std::log(hi / lo) / (points - 1);
    for (int i = 0; i < points; ++i) out[static_cast<std::size_t>(i)] = lo * std::exp(step * i);
    return out;
}

inline DissipativeScan dissipative_scan(double s_star, const std::vector<double>& xis) {
    DissipativeScan out{std::numeric_limits<double>::infinity(), 0.0};
    for (double xi : xis) {
        const EigenPair e = eigenvalues(xi, s_star);
        const double x = std::pow(xi, 2.0 * s_star);
        const double max_re = std::max(e.lambda1.real(), e.lambda2.real());
        const double c = -max_re * (1.0 + x) / x;
        if (c < out.constant) out = {c, xi};
    }
    return out;
}

inline std::string eigen_csv_header() { return "xi,re1,im1,re2,im2"; }

inline std::string eigen_csv_row(double xi, const EigenPair& e) {
    std::ostringstream os;
    os << std::setprecision(17) << xi << ',' << e.lambda1.real() << ',' << e.lambda1.imag() << ','
       << e.lambda2.real() << ',' << e.lambda2.imag();
    return os.str();
}

}  // namespace riesz::linear
