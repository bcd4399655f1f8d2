#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <span>
#include <sstream>

#include "riesz/fft.hpp"

namespace riesz {

/// Properties of a Fourier symbol that change how it is applied.
///
/// `singular_at_zero`: the symbol is undefined at xi = 0; the zero mode is set
/// to 0 and the input must have zero mean. `odd`: m(-xi) = -m(xi) (e.g. i xi);
/// Nyquist modes are zeroed because their conjugate partner is not on the
/// lattice.
struct SymbolTraits {
    bool singular_at_zero = false;
    bool odd = false;
};

/// Up to 2 x 2 complex symbol matrix, row = output component, column = input.
using SymbolMatrix = std::array<std::array<complex, 2>, 2>;

namespace detail {

inline void check_mean_zero(const Field& f, const char* op) {
    if (!f.mean_zero()) {
        std::ostringstream os;
        os << op << ": symbol is singular at xi = 0 but the input has mean " << f.mean();
        throw ZeroModeError(os.str());
    }
}

}  // namespace detail

/// Multiplies a half spectrum in place by m(xi).
template <class Symbol>
void apply_symbol(Spectrum& s, Symbol&& symbol, SymbolTraits traits = {}) {
    s.grid.for_each_mode([&](std::size_t i, const Wavevector& w) {
        if ((w.zero && traits.singular_at_zero) || (w.nyquist && traits.odd)) {
            s.coeffs[i] = 0.0;
        } else {
            s.coeffs[i] *= symbol(w);
        }
    });
}

/// F^{-1}(m(xi) F f).
template <class Symbol>
Field apply_multiplier(const Field& f, Symbol&& symbol, SymbolTraits traits = {}) {
    if (traits.singular_at_zero) detail::check_mean_zero(f, "apply_multiplier");
    Spectrum s = forward(f);
    apply_symbol(s, symbol, traits);
    return inverse(s);
}

/// Applies a matrix-valued symbol mapping `in.size()` fields to `n_out` fields.
template <class Symbol>
VectorField apply_matrix_multiplier(std::span<const Field> in, std::size_t n_out, Symbol&& symbol,
                                    SymbolTraits traits = {}) {
    require(!in.empty() && in.size() <= 2 && n_out >= 1 && n_out <= 2, "matrix multiplier supports up to 2x2");
    if (traits.singular_at_zero)
        for (const Field& f : in) detail::check_mean_zero(f, "apply_matrix_multiplier");
    const SpectralGrid& g = in[0].grid();
    std::array<Spectrum, 2> src;
    for (std::size_t c = 0; c < in.size(); ++c) src[c] = forward(in[c]);
    std::array<Spectrum, 2> dst{Spectrum(g), Spectrum(g)};
    g.for_each_mode([&](std::size_t i, const Wavevector& w) {
        if ((w.zero && traits.singular_at_zero) || (w.nyquist && traits.odd)) return;
        SymbolMatrix m{};
        symbol(w, m);
        for (std::size_t r = 0; r < n_out; ++r) {
            complex acc{};
            for (std::size_t c = 0; c < in.size(); ++c) acc += m[r][c] * src[c].coeffs[i];
            dst[r].coeffs[i] = acc;
        }
    });
    VectorField out;
    for (std::size_t r = 0; r < n_out; ++r) out.push_back(inverse(dst[r]));
    return out;
}

/// Applies m(xi) on the full complex lattice (no Hermitian projection) and
/// reports max |Im| / max |output|. Used to check that a symbol preserves
/// reality without the real-to-complex transform forcing it.
template <class Symbol>
double multiplier_imaginary_residual(const Field& f, Symbol&& symbol, SymbolTraits traits = {}) {
    const SpectralGrid& g = f.grid();
    std::vector<complex> values(f.values().begin(), f.values().end());
    std::vector<complex> coeffs = forward_full(values, g);
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
        const Wavevector w = full_wavevector(g, i);
        if ((w.zero && traits.singular_at_zero) || (w.nyquist && traits.odd)) {
            coeffs[i] = 0.0;
        } else {
            coeffs[i] *= symbol(w);
        }
    }
    const std::vector<complex> out = inverse_full(coeffs, g);
    double im = 0.0, mag = 0.0;
    for (const complex& c : out) {
        im = std::max(im, std::abs(c.imag()));
        mag = std::max(mag, std::abs(c));
    }
    return mag > 0.0 ? im / mag : 0.0;
}

/// |xi|^sigma, defined as 0 at xi = 0.
inline complex frac_symbol(const Wavevector& w, double sigma) {
    return w.zero ? 0.0 : std::pow(w.norm, sigma);
}

/// Lambda^sigma f = F^{-1}(|xi|^sigma F f). Negative sigma requires zero mean.
inline Field frac_lambda(const Field& f, double sigma) {
    if (sigma == 0.0) {
        // |xi|^0 = 1 except at the zero mode, which Lambda^sigma always kills.
        Field out = f;
        const double m = f.mean();
        for (double& v : out.values()) v -= m;
        return out;
    }
    return apply_multiplier(
        f, [sigma](const Wavevector& w) { return frac_symbol(w, sigma); },
        SymbolTraits{.singular_at_zero = sigma < 0.0, .odd = false});
}

/// Gradient via i xi.
inline VectorField gradient(const Field& f) {
    const std::array<Field, 1> in{f};
    return apply_matrix_multiplier(
        in, static_cast<std::size_t>(f.grid().dim()),
        [](const Wavevector& w, SymbolMatrix& m) {
            m[0][0] = complex(0.0, w.xi[0]);
            m[1][0] = complex(0.0, w.xi[1]);
        },
        SymbolTraits{.singular_at_zero = false, .odd = true});
}

/// Divergence via i xi . u.
inline Field divergence(const VectorField& u) {
    return apply_matrix_multiplier(
               u, 1,
               [](const Wavevector& w, SymbolMatrix& m) {
                   m[0][0] = complex(0.0, w.xi[0]);
                   m[0][1] = complex(0.0, w.xi[1]);
               },
               SymbolTraits{.singular_at_zero = false, .odd = true})
        .front();
}

/// grad Lambda^{sigma} a, i.e. symbol i xi |xi|^sigma per component.
inline VectorField grad_frac_lambda(const Field& a, double sigma) {
    const std::array<Field, 1> in{a};
    return apply_matrix_multiplier(
        in, static_cast<std::size_t>(a.grid().dim()),
        [sigma](const Wavevector& w, SymbolMatrix& m) {
            if (w.zero) return;
            const double mag = std::pow(w.norm, sigma);
            m[0][0] = complex(0.0, w.xi[0] * mag);
            m[1][0] = complex(0.0, w.xi[1] * mag);
        },
        SymbolTraits{.singular_at_zero = sigma + 1.0 < 0.0, .odd = true});
}

/// Riesz interaction force grad Lambda^{alpha-d} a (without the coupling
/// coefficient kappa * rho_bar). The symbol i xi |xi|^{alpha-d} is singular at
/// the zero mode whenever alpha < d, so `a` must be a mean-zero fluctuation.
inline VectorField riesz_force(const Field& a, const RieszParams& params) {
    params.validate();
    require(params.dim == a.grid().dim(), "riesz_force: parameter dimension differs from grid");
    detail::check_mean_zero(a, "riesz_force");
    const double sigma = params.alpha - params.dim;
    const std::array<Field, 1> in{a};
    return apply_matrix_multiplier(
        in, static_cast<std::size_t>(a.grid().dim()),
        [sigma](const Wavevector& w, SymbolMatrix& m) {
            if (w.zero) return;
            const double mag = std::pow(w.norm, sigma);
            m[0][0] = complex(0.0, w.xi[0] * mag);
            m[1][0] = complex(0.0, w.xi[1] * mag);
        },
        SymbolTraits{.singular_at_zero = true, .odd = true});
}

/// Compressible and rotational parts m = Lambda^{-1} div u and
/// omega = Lambda^{-1} curl u (omega = 0 when d = 1).
struct HodgeParts {
    Field m;
    Field omega;
};

inline HodgeParts hodge_split(const VectorField& u) {
    require(!u.empty(), "hodge_split: empty velocity");
    const SpectralGrid& g = u[0].grid();
    require(u.size() == static_cast<std::size_t>(g.dim()), "hodge_split: velocity needs d components");
    for (const Field& c : u) detail::check_mean_zero(c, "hodge_split");
    VectorField parts = apply_matrix_multiplier(
        u, g.dim() == 2 ? 2 : 1,
        [](const Wavevector& w, SymbolMatrix& m) {
            const double r = w.norm;
            m[0][0] = complex(0.0, w.xi[0] / r);
            m[0][1] = complex(0.0, w.xi[1] / r);
            // curl u = d_0 u_1 - d_1 u_0
            m[1][0] = complex(0.0, -w.xi[1] / r);
            m[1][1] = complex(0.0, w.xi[0] / r);
        },
        SymbolTraits{.singular_at_zero = true, .odd = true});
    HodgeParts out{parts[0], Field(g)};
    if (g.dim() == 2) out.omega = parts[1];
    return out;
}

/// Inverse of hodge_split: u = -Lambda^{-1} grad m - Lambda^{-1} grad^perp omega,
/// with grad^perp = (-d_1, d_0).
inline VectorField hodge_reconstruct(const HodgeParts& parts) {
    const SpectralGrid& g = parts.m.grid();
    const std::array<Field, 2> in{parts.m, parts.omega};
    return apply_matrix_multiplier(
        std::span<const Field>(in.data(), g.dim() == 2 ? 2 : 1), static_cast<std::size_t>(g.dim()),
        [](const Wavevector& w, SymbolMatrix& m) {
            const double r = w.norm;
            m[0][0] = complex(0.0, -w.xi[0] / r);
            m[1][0] = complex(0.0, -w.xi[1] / r);
            m[0][1] = complex(0.0, w.xi[1] / r);
            m[1][1] = complex(0.0, -w.xi[0] / r);
        },
        SymbolTraits{.singular_at_zero = true, .odd = true});
}

}  // namespace riesz
