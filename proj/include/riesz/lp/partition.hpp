#pragma once

#include <cmath>
#include <map>
#include <optional>
#include <sstream>
#include <vector>

#include "riesz/fft.hpp"

namespace riesz::lp {

inline constexpr double kInner = 3.0 / 4.0;
inline constexpr double kOuter = 4.0 / 3.0;

/// Radial low-pass profile chi(r): 1 on [0, 3/4], 0 on [4/3, inf), and the C^inf
/// transition psi(1 - s) / (psi(1 - s) + psi(s)) with psi(x) = exp(-1/x) and
/// s = (r - 3/4) / (4/3 - 3/4) in between. Non-increasing in r.
inline double chi(double r) {
    if (r <= kInner) return 1.0;
    if (r >= kOuter) return 0.0;
    const double s = (r - kInner) / (kOuter - kInner);
    const double left = std::exp(-1.0 / (1.0 - s));
    const double right = std::exp(-1.0 / s);
    return left / (left + right);
}

/// Annulus profile phi(r) = chi(r/2) - chi(r), supported in [3/4, 8/3].
inline double phi(double r) { return chi(0.5 * r) - chi(r); }

/// Dyadic partition over the resolved index range [j_min, j_max].
class LPPartition {
public:
    LPPartition() = default;
    LPPartition(int j_min, int j_max) : j_min_(j_min), j_max_(j_max) {
        if (j_max - j_min + 1 < 3) {
            std::ostringstream os;
            os << "partition: need at least 3 dyadic shells, got [" << j_min << ", " << j_max << "]";
            throw Error(os.str());
        }
    }

    int j_min() const { return j_min_; }
    int j_max() const { return j_max_; }
    int count() const { return j_max_ - j_min_ + 1; }
    bool contains(int j) const { return j >= j_min_ && j <= j_max_; }

    /// phi(2^{-j} |xi|).
    double weight(int j, double xi_norm) const { return phi(std::ldexp(xi_norm, -j)); }

    /// Sum of all resolved block weights at |xi|.
    double total_weight(double xi_norm) const {
        double s = 0.0;
        for (int j = j_min_; j <= j_max_; ++j) s += weight(j, xi_norm);
        return s;
    }

    void check(int j) const {
        if (!contains(j)) {
            std::ostringstream os;
            os << "dyadic index " << j << " outside resolved range [" << j_min_ << ", " << j_max_ << "]";
            throw Error(os.str());
        }
    }

private:
    int j_min_ = 0;
    int j_max_ = 2;
};

/// Partition whose shells cover every nonzero lattice wavenumber of `grid`:
/// 2^{j_min} * 4/3 <= |xi|_min and |xi|_max <= 2^{j_max} * 3/2, so the block
/// weights sum to one at every nonzero lattice point.
inline LPPartition build_partition(const SpectralGrid& grid) {
    const int j_min = static_cast<int>(std::floor(std::log2(grid.min_wavenumber() / kOuter)));
    const int j_max = static_cast<int>(std::ceil(std::log2(grid.max_wavenumber() / 1.5)));
    return LPPartition(j_min, j_max);
}

/// max |sum_j phi(2^{-j} xi) - 1| over the nonzero lattice points.
inline double partition_of_unity_residue(const LPPartition& part, const SpectralGrid& grid) {
    double worst = 0.0;
    grid.for_each_mode([&](std::size_t, const Wavevector& w) {
        if (!w.zero) worst = std::max(worst, std::abs(part.total_weight(w.norm) - 1.0));
    });
    return worst;
}

inline Spectrum block_spectrum(const Spectrum& s, int j, const LPPartition& part) {
    Spectrum out(s.grid);
    s.grid.for_each_mode([&](std::size_t i, const Wavevector& w) {
        if (!w.zero) out.coeffs[i] = s.coeffs[i] * part.weight(j, w.norm);
    });
    return out;
}

/// u_j = F^{-1}(phi(2^{-j} .) F u).
inline Field dyadic_block(const Field& u, int j, const LPPartition& part) {
    part.check(j);
    return inverse(block_spectrum(forward(u), j, part));
}

/// Low-frequency cut-off S_j u = sum_{j' <= j-1} u_{j'} over the resolved range.
inline Field low_pass(const Field& u, int j, const LPPartition& part) {
    const Spectrum s = forward(u);
    Spectrum out(s.grid);
    s.grid.for_each_mode([&](std::size_t i, const Wavevector& w) {
        if (w.zero) return;
        double wt = 0.0;
        for (int jj = part.j_min(); jj <= std::min(j - 1, part.j_max()); ++jj) wt += part.weight(jj, w.norm);
        out.coeffs[i] = s.coeffs[i] * wt;
    });
    return inverse(out);
}

struct LPDecomposition {
    std::map<int, Field> blocks;
    /// ||(u - mean u) - sum_j u_j||^2 / ||u - mean u||^2.
    double residual = 0.0;
};

inline LPDecomposition decompose(const Field& u, const LPPartition& part) {
    const Spectrum s = forward(u);
    LPDecomposition out;
    for (int j = part.j_min(); j <= part.j_max(); ++j) out.blocks.emplace(j, inverse(block_spectrum(s, j, part)));
    out.residual = 0.0;
    double total = 0.0, missing = 0.0;
    s.grid.for_each_mode([&](std::size_t i, const Wavevector& w) {
        if (w.zero) return;
        const double e = w.weight * std::norm(s.coeffs[i]);
        total += e;
        missing += e * std::pow(1.0 - part.total_weight(w.norm), 2);
    });
    out.residual = total > 0.0 ? missing / total : 0.0;
    return out;
}

/// Spectral energy fraction of u outside the closed annulus lo <= |xi| <= hi.
inline double energy_outside(const Field& u, double lo, double hi) {
    const Spectrum s = forward(u);
    double total = 0.0, out = 0.0;
    s.grid.for_each_mode([&](std::size_t i, const Wavevector& w) {
        const double e = w.weight * std::norm(s.coeffs[i]);
        total += e;
        if (w.norm < lo || w.norm > hi) out += e;
    });
    return total > 0.0 ? out / total : 0.0;
}

}  // namespace riesz::lp
