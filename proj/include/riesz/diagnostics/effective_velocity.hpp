#pragma once

// Effective velocity z = u + (c/lambda) grad Lambda^{2s*-2} a and the residuals
// of the equations it satisfies, evaluated on recorded snapshots.

#include <limits>
#include <span>
#include <vector>

#include "riesz/multiplier.hpp"
#include "riesz/solver/solver.hpp"

namespace riesz::diagnostics {

/// c' = kappa rho_bar / lambda, the diffusion coefficient of the low modes.
inline double diffusion_coefficient(const RieszParams& p) { return p.coupling() / p.lambda; }

inline VectorField effective_velocity(const FieldState& s, const RieszParams& p) {
    p.validate();
    VectorField z = grad_frac_lambda(s.a, 2.0 * p.s_star() - 2.0);
    const double c = diffusion_coefficient(p);
    for (std::size_t k = 0; k < z.size(); ++k) {
        z[k] *= c;
        z[k] += s.u[k];
    }
    return z;
}

namespace detail {

inline Field masked(const Field& f, const std::vector<char>& keep) {
    Spectrum s = forward(f);
    solver::apply_mask(s, keep);
    return inverse(s);
}

/// Nonuniform centred difference at the middle of three samples (second order).
template <class F>
F centred_derivative(const F& f0, const F& f1, const F& f2, double t0, double t1, double t2) {
    const double h0 = t1 - t0, h1 = t2 - t1;
    require(h0 > 0.0 && h1 > 0.0, "residual: snapshot times must increase");
    const double w0 = -h1 / (h0 * (h0 + h1));
    const double w1 = (h1 - h0) / (h0 * h1);
    const double w2 = h0 / (h1 * (h0 + h1));
    F out = w1 * f1;
    out += w0 * f0;
    out += w2 * f2;
    return out;
}

inline VectorField scale(double c, VectorField v) {
    for (Field& f : v) f *= c;
    return v;
}

inline void add(VectorField& acc, const VectorField& v) {
    for (std::size_t k = 0; k < acc.size(); ++k) acc[k] += v[k];
}

// div(a u) and (u.grad) u with the solver's dealiasing applied to the products.
inline Field density_flux_divergence(const FieldState& s, const std::vector<char>& keep) {
    VectorField au;
    for (const Field& c : s.u) au.push_back(masked(s.a * c, keep));
    return divergence(au);
}

inline VectorField advection(const FieldState& s, const std::vector<char>& keep) {
    VectorField out;
    for (std::size_t l = 0; l < s.u.size(); ++l) {
        const VectorField g = gradient(s.u[l]);
        Field acc(s.a.grid());
        for (std::size_t c = 0; c < s.u.size(); ++c) acc += s.u[c] * g[c];
        out.push_back(masked(acc, keep));
    }
    return out;
}

}  // namespace detail

struct ResidualReport {
    double t = 0.0;
    double absolute = 0.0;
    /// absolute / normalizer
    double relative = 0.0;
    double normalizer = 0.0;
};

/// Residual of a_t + c' Lambda^{2s*} a + div z + div(a u) = 0 at the middle of
/// three consecutive snapshots, relative to the sum of the term norms.
/// `dealias` is the fraction the trajectory was computed with.
inline ResidualReport low_a_residual(std::span<const FieldState> window, const RieszParams& p, double dealias = 1.0) {
    require(window.size() == 3, "low_a_residual: need exactly three consecutive snapshots");
    const FieldState& s = window[1];
    const auto keep = solver::dealias_mask(s.grid(), dealias);
    const Field at = detail::centred_derivative(window[0].a, window[1].a, window[2].a, window[0].t, window[1].t, window[2].t);
    const double c = diffusion_coefficient(p);
    Field diff = frac_lambda(s.a, 2.0 * p.s_star());
    diff *= c;
    const Field divz = divergence(effective_velocity(s, p));
    const Field flux = detail::density_flux_divergence(s, keep);
    const Field r = at + diff + divz + flux;
    ResidualReport out;
    out.t = s.t;
    out.absolute = l2_norm(r);
    out.normalizer = l2_norm(at) + l2_norm(diff) + l2_norm(divz) + l2_norm(flux);
    out.relative = out.normalizer > 0.0 ? out.absolute / out.normalizer : 0.0;
    return out;
}

/// Residual of
///   z_t + lambda z + c' grad Lambda^{2s*-2} div z + c'^2 grad Lambda^{4s*-2} a
///       + c' grad Lambda^{2s*-2} div(a u) + (u.grad) u = 0
/// at the middle of three snapshots, relative to ||z||.
inline ResidualReport z_equation_residual(std::span<const FieldState> window, const RieszParams& p,
                                          double dealias = 1.0) {
    require(window.size() == 3, "z_equation_residual: need exactly three consecutive snapshots");
    const FieldState& s = window[1];
    const auto keep = solver::dealias_mask(s.grid(), dealias);
    const double c = diffusion_coefficient(p);
    const double sigma = 2.0 * p.s_star() - 2.0;
    const VectorField z0 = effective_velocity(window[0], p);
    const VectorField z1 = effective_velocity(window[1], p);
    const VectorField z2 = effective_velocity(window[2], p);
    VectorField r;
    for (std::size_t k = 0; k < z1.size(); ++k)
        r.push_back(detail::centred_derivative(z0[k], z1[k], z2[k], window[0].t, window[1].t, window[2].t));
    detail::add(r, detail::scale(p.lambda, z1));
    detail::add(r, detail::scale(c, grad_frac_lambda(divergence(z1), sigma)));
    detail::add(r, detail::scale(c * c, grad_frac_lambda(s.a, 4.0 * p.s_star() - 2.0)));
    detail::add(r, detail::scale(c, grad_frac_lambda(detail::density_flux_divergence(s, keep), sigma)));
    detail::add(r, detail::advection(s, keep));
    ResidualReport out;
    out.t = s.t;
    out.absolute = l2_norm(r);
    out.normalizer = l2_norm(z1);
    out.relative = out.normalizer > 0.0 ? out.absolute / out.normalizer : (out.absolute > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
    return out;
}

}  // namespace riesz::diagnostics
