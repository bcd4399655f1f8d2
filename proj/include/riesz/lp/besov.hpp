#pragma once

#include <cmath>
#include <iomanip>
#include <limits>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "riesz/lp/partition.hpp"

namespace riesz::lp {

enum class Flavor { full, low, high };

inline std::string to_string(Flavor f) {
    switch (f) {
        case Flavor::low: return "low";
        case Flavor::high: return "high";
        default: return "full";
    }
}

inline Flavor parse_flavor(const std::string& s) {
    if (s == "full") return Flavor::full;
    if (s == "low") return Flavor::low;
    if (s == "high") return Flavor::high;
    throw Error("unknown Besov flavor '" + s + "'");
}

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Homogeneous Besov (semi-)norm selector.
///
/// `low` sums j <= J1, `high` sums j >= J1 - 1 (the two overlap on purpose).
struct BesovSpec {
    double s = 0.0;
    double p = 2.0;
    double r = 1.0;
    Flavor flavor = Flavor::full;
    int J1 = 0;

    void validate() const {
        require(p >= 1.0 && r >= 1.0, "Besov spec: p and r must lie in [1, inf]");
    }

    bool includes(int j) const {
        switch (flavor) {
            case Flavor::low: return j <= J1;
            case Flavor::high: return j >= J1 - 1;
            default: return true;
        }
    }
};

/// ||Delta_j u||_{L^p} for every resolved j (index j - j_min).
inline std::vector<double> block_norms(const Field& u, const LPPartition& part, double p) {
    const Spectrum s = forward(u);
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(part.count()));
    for (int j = part.j_min(); j <= part.j_max(); ++j) out.push_back(lp_norm(inverse(block_spectrum(s, j, part)), p));
    return out;
}

/// Vector version: L^p norm of the pointwise magnitude of Delta_j u.
inline std::vector<double> block_norms(const VectorField& u, const LPPartition& part, double p) {
    if (u.size() == 1) return block_norms(u[0], part, p);
    std::vector<Spectrum> spectra;
    for (const Field& c : u) spectra.push_back(forward(c));
    std::vector<double> out;
    for (int j = part.j_min(); j <= part.j_max(); ++j) {
        VectorField blk;
        for (const Spectrum& s : spectra) blk.push_back(inverse(block_spectrum(s, j, part)));
        out.push_back(lp_norm(blk, p));
    }
    return out;
}

/// l^r combination of 2^{js} b_j over the indices selected by `spec`.
inline double besov_from_blocks(std::span<const double> blocks, const BesovSpec& spec, const LPPartition& part) {
    spec.validate();
    double acc = 0.0;
    for (int j = part.j_min(); j <= part.j_max(); ++j) {
        if (!spec.includes(j)) continue;
        const double term = std::exp2(spec.s * j) * blocks[static_cast<std::size_t>(j - part.j_min())];
        if (std::isinf(spec.r)) {
            acc = std::max(acc, term);
        } else {
            acc += std::pow(term, spec.r);
        }
    }
    return std::isinf(spec.r) ? acc : std::pow(acc, 1.0 / spec.r);
}

struct BesovReport {
    double value = 0.0;
    /// Spectral energy fraction not captured by the resolved shells.
    double residual = 0.0;
};

inline double besov_norm(const Field& u, const BesovSpec& spec, const LPPartition& part) {
    return besov_from_blocks(block_norms(u, part, spec.p), spec, part);
}

inline double besov_norm(const VectorField& u, const BesovSpec& spec, const LPPartition& part) {
    return besov_from_blocks(block_norms(u, part, spec.p), spec, part);
}

inline BesovReport besov_report(const Field& u, const BesovSpec& spec, const LPPartition& part) {
    return {besov_norm(u, spec, part), decompose(u, part).residual};
}

/// Time-stamped field for Chemin-Lerner norms.
template <class F>
struct Timed {
    double t;
    F field;
};

/// Chemin-Lerner norm: l^r over j of 2^{js} ||Delta_j u||_{L^rho_T(L^p)}, with
/// trapezoidal quadrature in time (rho = inf takes the max over snapshots).
template <class F>
double chemin_lerner_norm(std::span<const Timed<F>> snaps, double rho, const BesovSpec& spec, const LPPartition& part) {
    require(snaps.size() >= 2, "chemin_lerner_norm: need at least two snapshots");
    for (std::size_t i = 1; i < snaps.size(); ++i)
        require(snaps[i].t > snaps[i - 1].t, "chemin_lerner_norm: snapshot times must increase");
    require(rho >= 1.0, "chemin_lerner_norm: time exponent must be >= 1");
    std::vector<std::vector<double>> per_time;
    for (const auto& s : snaps) per_time.push_back(block_norms(s.field, part, spec.p));
    std::vector<double> time_norm(static_cast<std::size_t>(part.count()), 0.0);
    for (std::size_t b = 0; b < time_norm.size(); ++b) {
        if (std::isinf(rho)) {
            for (const auto& pt : per_time) time_norm[b] = std::max(time_norm[b], pt[b]);
            continue;
        }
        double integral = 0.0;
        for (std::size_t i = 1; i < snaps.size(); ++i) {
            const double dt = snaps[i].t - snaps[i - 1].t;
            integral += 0.5 * dt * (std::pow(per_time[i - 1][b], rho) + std::pow(per_time[i][b], rho));
        }
        time_norm[b] = std::pow(integral, 1.0 / rho);
    }
    return besov_from_blocks(time_norm, spec, part);
}

/// CSV header and row: time, s, p, r, flavor, J1, value, residual.
inline std::string besov_csv_header() { return "time,s,p,r,flavor,J1,value,residual"; }

inline std::string besov_csv_row(double time, const BesovSpec& spec, const BesovReport& rep) {
    std::ostringstream os;
    os << std::setprecision(17) << time << ',' << spec.s << ',' << spec.p << ',' << spec.r << ','
       << to_string(spec.flavor) << ',' << spec.J1 << ',' << rep.value << ',' << rep.residual;
    return os.str();
}

}  // namespace riesz::lp
