#pragma once

// Numerical probes of the Bernstein and fractional lower-bound inequalities
// for annulus-localized fields.

#include <cmath>
#include <sstream>

#include "riesz/lp/partition.hpp"
#include "riesz/multiplier.hpp"

namespace riesz::lp {

/// Largest spectral energy fraction tolerated outside the annulus.
inline constexpr double kSupportTolerance = 1e-24;

inline void require_annulus_support(const Field& u, int j, const char* op) {
    const double lo = kInner * std::exp2(j);
    const double hi = (8.0 / 3.0) * std::exp2(j);
    const double outside = energy_outside(u, lo * (1 - 1e-12), hi * (1 + 1e-12));
    if (outside > kSupportTolerance) {
        std::ostringstream os;
        os << op << ": input is not supported in annulus j=" << j << " (energy fraction outside " << outside << ")";
        throw SupportError(os.str());
    }
}

/// Pointwise Frobenius norm of the tensor of all ordered k-th partials D^k u.
inline Field derivative_magnitude(const Field& u, int k) {
    require(k >= 0, "derivative order must be nonnegative");
    const SpectralGrid& g = u.grid();
    const bool odd = k % 2 == 1;
    Field acc(g);
    // sum over multi-indices (m along axis 0, k-m along axis 1) weighted by the
    // number of orderings C(k, m)
    for (int m = (g.dim() == 1 ? k : 0); m <= k; ++m) {
        const double mult = std::tgamma(k + 1.0) / (std::tgamma(m + 1.0) * std::tgamma(k - m + 1.0));
        const Field d = apply_multiplier(
            u,
            [m, k](const Wavevector& w) {
                complex z(1.0);
                for (int i = 0; i < m; ++i) z *= complex(0.0, w.xi[0]);
                for (int i = 0; i < k - m; ++i) z *= complex(0.0, w.xi[1]);
                return z;
            },
            SymbolTraits{.singular_at_zero = false, .odd = odd});
        for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += mult * d[i] * d[i];
    }
    for (double& v : acc.values()) v = std::sqrt(v);
    return acc;
}

/// ||D^k u||_{L^q} / (2^{j(k + d(1/p - 1/q))} ||u||_{L^p}) for u supported in
/// the j-th annulus.
inline double verify_bernstein(const Field& u, int j, int k, double p, double q) {
    require(p >= 1.0 && q >= p, "verify_bernstein: need 1 <= p <= q");
    require_annulus_support(u, j, "verify_bernstein");
    const int d = u.grid().dim();
    const double inv_p = std::isinf(p) ? 0.0 : 1.0 / p;
    const double inv_q = std::isinf(q) ? 0.0 : 1.0 / q;
    const double scale = std::exp2(j * (k + d * (inv_p - inv_q)));
    return lp_norm(derivative_magnitude(u, k), q) / (scale * lp_norm(u, p));
}

/// D(f) = int |f|^{p-2} f (-Delta)^{alpha_w} f dx divided by
/// 2^{2 alpha_w j} ||f||_{L^p}^p, for f supported in the j-th annulus.
inline double verify_wu_lower_bound(const Field& f, int j, double p, double alpha_w) {
    const bool ok = (p == 2.0 && alpha_w >= 0.0) || (p > 2.0 && std::isfinite(p) && alpha_w >= 0.0 && alpha_w <= 1.0);
    if (!ok) {
        std::ostringstream os;
        os << "verify_wu_lower_bound: need (p = 2, alpha >= 0) or (2 < p < inf, 0 <= alpha <= 1); got p=" << p
           << " alpha=" << alpha_w;
        throw Error(os.str());
    }
    require_annulus_support(f, j, "verify_wu_lower_bound");
    const Field lap = frac_lambda(f, 2.0 * alpha_w);
    double integral = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) integral += std::pow(std::abs(f[i]), p - 2.0) * f[i] * lap[i];
    integral *= f.grid().cell_volume();
    return integral / (std::exp2(2.0 * alpha_w * j) * std::pow(lp_norm(f, p), p));
}

}  // namespace riesz::lp
