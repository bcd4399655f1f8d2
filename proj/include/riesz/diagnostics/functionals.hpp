#pragma once

// Hybrid energy E_p and instantaneous dissipation D_p, and the block Lyapunov
// functional used for the high-frequency estimates.

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "riesz/lp/besov.hpp"
#include "riesz/multiplier.hpp"

namespace riesz::diagnostics {

/// Admissible Lebesgue exponents: [2, 4] for d <= 4, [2, 2d/(d-2)] above.
inline bool admissible_p(int d, double p) {
    const double hi = d <= 4 ? 4.0 : 2.0 * d / (d - 2.0);
    return p >= 2.0 && p <= hi;
}

struct FunctionalRecord {
    double t = 0.0;
    double a_low = 0.0;
    double u_low = 0.0;
    double a_high = 0.0;
    double u_high = 0.0;
    double energy = 0.0;  // E_p = a_low + u_low + a_high + u_high
    // D_p integrand
    double d_a_low = 0.0;
    double d_u_low = 0.0;
    double d_a_high = 0.0;
    double d_u_high = 0.0;
    double d_at = 0.0;
    double dissipation = 0.0;
    std::string warning;
};

/// E_p and the instantaneous D_p integrand at one snapshot. The time
/// derivative in D_p is evaluated from the continuity equation,
/// a_t = -div u - div(a u).
inline FunctionalRecord energy_functionals(const FieldState& s, const RieszParams& params, const lp::LPPartition& part,
                                           int J1, double p) {
    params.validate();
    const int d = s.grid().dim();
    const double sd = params.s_star();
    using lp::BesovSpec;
    using lp::Flavor;
    FunctionalRecord r;
    r.t = s.t;
    if (!admissible_p(d, p)) {
        std::ostringstream os;
        os << "p = " << p << " outside the admissible range for d = " << d;
        r.warning = os.str();
    }
    const auto a_p = lp::block_norms(s.a, part, p);
    const auto u_p = lp::block_norms(s.u, part, p);
    const auto a_2 = p == 2.0 ? a_p : lp::block_norms(s.a, part, 2.0);
    const auto u_2 = p == 2.0 ? u_p : lp::block_norms(s.u, part, 2.0);
    auto low = [&](double idx) { return BesovSpec{idx, p, 1.0, Flavor::low, J1}; };
    auto high = [&](double idx) { return BesovSpec{idx, 2.0, 1.0, Flavor::high, J1}; };

    r.a_low = lp::besov_from_blocks(a_p, low(d / p - 1.0), part);
    r.u_low = lp::besov_from_blocks(u_p, low(d / p), part);
    r.a_high = lp::besov_from_blocks(a_2, high(d / 2.0 + 1.0), part);
    r.u_high = lp::besov_from_blocks(u_2, high(d / 2.0 + 2.0 - sd), part);
    r.energy = r.a_low + r.u_low + r.a_high + r.u_high;

    r.d_a_low = lp::besov_from_blocks(a_p, low(d / p - 1.0 + 2.0 * sd), part);
    r.d_u_low = r.u_low;
    r.d_a_high = r.a_high;
    r.d_u_high = r.u_high;
    Field at = divergence(s.u);
    VectorField au;
    for (const Field& c : s.u) au.push_back(s.a * c);
    at += divergence(au);
    at *= -1.0;
    r.d_at = lp::besov_norm(at, BesovSpec{d / p, p, 1.0}, part);
    r.dissipation = r.d_a_low + r.d_u_low + r.d_a_high + r.d_u_high + r.d_at;
    return r;
}

struct LyapunovReport {
    double value = 0.0;  // L_j^2
    /// ||Lambda^{s*} a_j||^2 + ||Lambda u_j||^2
    double reference = 0.0;
    /// L_j^2 / reference (1 when both vanish)
    double ratio = 1.0;
    /// c~ (3/4 2^j)^{-s*} + ||S_{j-1} a||_inf, a rigorous bound on |ratio - 1|
    double bracket = 0.0;
};

/// L_j^2 = ||Lambda^{s*} a_j||^2 + ||Lambda u_j||^2 + int S_{j-1}a |Lambda u_j|^2
///         - 2 c~ int a_j div u_j
/// for a high block j >= J1 - 1, with S_{j-1} = sum_{j' <= j-2} Delta_{j'}.
inline LyapunovReport lyapunov_block(const FieldState& s, int j, double c_tilde, const lp::LPPartition& part,
                                     const RieszParams& params, int J1) {
    if (j < J1 - 1) {
        std::ostringstream os;
        os << "lyapunov_block: j = " << j << " is below the high-frequency range j >= J1 - 1 = " << J1 - 1;
        throw Error(os.str());
    }
    require(c_tilde >= 0.0, "lyapunov_block: c~ must be nonnegative");
    part.check(j);
    const double sd = params.s_star();
    const Field aj = lp::dyadic_block(s.a, j, part);
    VectorField uj;
    for (const Field& c : s.u) uj.push_back(lp::dyadic_block(c, j, part));
    const double dv = s.grid().cell_volume();

    const double a_term = std::pow(l2_norm(frac_lambda(aj, sd)), 2);
    VectorField lam_u;
    double u_term = 0.0;
    for (const Field& c : uj) {
        lam_u.push_back(frac_lambda(c, 1.0));
        u_term += std::pow(l2_norm(lam_u.back()), 2);
    }
    const Field low = j - 1 >= part.j_min() ? lp::low_pass(s.a, j - 1, part) : Field(s.grid());
    double cubic = 0.0;
    for (const Field& c : lam_u)
        for (std::size_t i = 0; i < c.size(); ++i) cubic += low[i] * c[i] * c[i];
    cubic *= dv;
    const Field divu = divergence(uj);
    double cross = 0.0;
    for (std::size_t i = 0; i < aj.size(); ++i) cross += aj[i] * divu[i];
    cross *= dv;

    LyapunovReport r;
    r.value = a_term + u_term + cubic - 2.0 * c_tilde * cross;
    r.reference = a_term + u_term;
    r.ratio = r.reference > 0.0 ? r.value / r.reference : 1.0;
    r.bracket = c_tilde * std::pow(0.75 * std::exp2(j), -sd) + low.max_abs();
    return r;
}

}  // namespace riesz::diagnostics
