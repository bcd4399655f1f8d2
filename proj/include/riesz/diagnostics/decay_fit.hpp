#pragma once

#include <cmath>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include "riesz/stats.hpp"

namespace riesz::diagnostics {

struct DecayFit {
    std::string name;
    double t0 = 0.0;
    double t1 = 0.0;
    double slope = 0.0;
    double predicted = 0.0;
    double rel_err = 0.0;
    double r_squared = 0.0;
    int samples = 0;
    /// r^2 below kAffineThreshold: the series is not a power law on the window.
    bool poor_fit = false;
};

inline constexpr double kAffineThreshold = 0.99;
inline constexpr int kMinFitSamples = 8;

/// Default window [max(1, t_end/10), t_end].
inline std::pair<double, double> default_window(double t_end) { return {std::max(1.0, t_end / 10.0), t_end}; }

/// Least-squares slope of log(norm) against log(1 + t) over samples with t0 <= t <= t1.
inline DecayFit fit_decay(const std::vector<double>& t, const std::vector<double>& norm, double predicted, double t0,
                          double t1, std::string name = "") {
    require(t.size() == norm.size(), "fit_decay: times and norms differ in length");
    require(t1 > t0 && t0 >= 0.0, "fit_decay: need 0 <= t0 < t1");
    std::vector<double> x, y;
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (t[i] < t0 || t[i] > t1) continue;
        if (!(norm[i] > 0.0)) {
            std::ostringstream os;
            os << "fit_decay: nonpositive norm " << norm[i] << " at t = " << t[i];
            throw Error(os.str());
        }
        x.push_back(std::log1p(t[i]));
        y.push_back(std::log(norm[i]));
    }
    if (x.size() < static_cast<std::size_t>(kMinFitSamples)) {
        std::ostringstream os;
        os << "fit_decay: " << x.size() << " samples in [" << t0 << ", " << t1 << "], need " << kMinFitSamples;
        throw Error(os.str());
    }
    const LineFit f = fit_line(x, y);
    DecayFit out;
    out.name = std::move(name);
    out.t0 = t0;
    out.t1 = t1;
    out.slope = f.slope;
    out.predicted = predicted;
    out.rel_err = predicted != 0.0 ? std::abs(f.slope - predicted) / std::abs(predicted) : std::abs(f.slope);
    out.r_squared = f.r_squared;
    out.samples = static_cast<int>(x.size());
    out.poor_fit = f.r_squared < kAffineThreshold;
    return out;
}

inline std::string decay_fit_csv_header() { return "name,t0,t1,slope,predicted,rel_err,r2"; }

inline std::string decay_fit_csv_row(const DecayFit& f) {
    std::ostringstream os;
    os << std::setprecision(12) << f.name << ',' << f.t0 << ',' << f.t1 << ',' << f.slope << ',' << f.predicted << ','
       << f.rel_err << ',' << f.r_squared;
    return os.str();
}

}  // namespace riesz::diagnostics
