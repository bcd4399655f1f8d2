#pragma once

#include <cmath>
#include <sstream>
#include <string>

#include "riesz/fft.hpp"
#include "riesz/multiplier.hpp"
#include "riesz/random.hpp"

namespace riesz::solver {

enum class PresetKind { single_mode, smooth_bump, powerlaw };

inline std::string to_string(PresetKind k) {
    switch (k) {
        case PresetKind::single_mode: return "single-mode";
        case PresetKind::smooth_bump: return "smooth-bump";
        default: return "low-frequency-powerlaw";
    }
}

inline PresetKind parse_preset(const std::string& s) {
    if (s == "single-mode") return PresetKind::single_mode;
    if (s == "smooth-bump") return PresetKind::smooth_bump;
    if (s == "low-frequency-powerlaw" || s == "powerlaw") return PresetKind::powerlaw;
    throw Error("unknown preset '" + s + "' (expected single-mode, smooth-bump or low-frequency-powerlaw)");
}

enum class VelocityKind { zero, balanced };

inline VelocityKind parse_velocity(const std::string& s) {
    if (s == "zero") return VelocityKind::zero;
    if (s == "balanced") return VelocityKind::balanced;
    throw Error("unknown initial velocity '" + s + "' (expected zero or balanced)");
}

struct PresetOptions {
    PresetKind kind = PresetKind::single_mode;
    /// max |a0|.
    double amplitude = 1e-2;
    double sigma1 = -0.5;
    /// Lattice index of the single mode along axis 0.
    int mode = 1;
    /// Bump width (standard deviation for small widths) as a fraction of the box length.
    double width = 1.0 / 16.0;
    /// Upper end of the power-law band in |xi|.
    double cutoff = 1.0;
    /// Random phases for the power-law band; 0 keeps all phases zero.
    std::uint64_t phase_seed = 0;
    VelocityKind velocity = VelocityKind::zero;
};

/// Mean-zero initial data. `balanced` velocity sets u0 = -(c/lambda) grad Lambda^{2s*-2} a0,
/// the state with zero effective velocity.
inline FieldState perturbation_preset(const SpectralGrid& g, const RieszParams& params, const PresetOptions& opt) {
    params.validate();
    require(opt.amplitude >= 0.0, "preset: amplitude must be nonnegative");
    if (opt.amplitude >= 1.0) {
        std::ostringstream os;
        os << "preset: amplitude " << opt.amplitude << " makes 1 + a nonpositive";
        throw Error(os.str());
    }
    FieldState s = FieldState::zero(g);
    if (opt.amplitude == 0.0) return s;
    Field shape(g);
    switch (opt.kind) {
        case PresetKind::single_mode: {
            require(opt.mode >= 1 && static_cast<std::size_t>(opt.mode) < g.modes(0) / 2, "preset: mode index out of range");
            const double k = g.wavenumber_unit(0) * opt.mode;
            for (std::size_t i = 0; i < g.size(); ++i) shape[i] = std::cos(k * g.coordinate(i, 0));
            break;
        }
        case PresetKind::smooth_bump: {
            // periodic bump prod exp((cos(2 pi (x - L/2)/L) - 1) / (2 pi w)^2), width w in box units
            require(opt.width > 0.0 && opt.width <= 0.5, "preset: bump width must lie in (0, 1/2] of the box");
            const double kappa = 1.0 / std::pow(2.0 * std::numbers::pi * opt.width, 2);
            for (std::size_t i = 0; i < g.size(); ++i) {
                double e = 0.0;
                for (int c = 0; c < g.dim(); ++c)
                    e += std::cos(2.0 * std::numbers::pi * (g.coordinate(i, c) / g.length(c) - 0.5)) - 1.0;
                shape[i] = std::exp(kappa * e);
            }
            const double m = shape.mean();
            for (double& v : shape.values()) v -= m;
            break;
        }
        case PresetKind::powerlaw: {
            require(opt.cutoff >= g.min_wavenumber(), "preset: power-law cutoff below the lowest lattice wavenumber");
            Spectrum sp(g);
            Rng rng(opt.phase_seed);
            std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
            const double exponent = -opt.sigma1 - 0.5 * g.dim();
            g.for_each_mode([&](std::size_t i, const Wavevector& w) {
                const double ph = opt.phase_seed ? phase(rng) : 0.0;
                if (w.zero || w.nyquist || w.norm > opt.cutoff) return;
                sp.coeffs[i] = std::polar(std::pow(w.norm, exponent), ph);
            });
            shape = inverse(sp);
            break;
        }
    }
    const double peak = shape.max_abs();
    require(peak > 0.0, "preset: empty profile");
    shape *= opt.amplitude / peak;
    s.a = std::move(shape);
    if (opt.velocity == VelocityKind::balanced) {
        s.u = grad_frac_lambda(s.a, 2.0 * params.s_star() - 2.0);
        for (Field& c : s.u) c *= -params.coupling() / params.lambda;
    }
    return s;
}

}  // namespace riesz::solver
