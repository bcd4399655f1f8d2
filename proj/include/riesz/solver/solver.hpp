#pragma once

#include <cmath>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "riesz/fft.hpp"
#include "riesz/linear/spectrum.hpp"
#include "riesz/solver/config.hpp"

namespace riesz::solver {

/// (a^, u^) in half-spectrum form.
struct SpectralState {
    Spectrum a;
    std::vector<Spectrum> u;

    static SpectralState from(const FieldState& s) {
        SpectralState out{forward(s.a), {}};
        for (const Field& c : s.u) out.u.push_back(forward(c));
        return out;
    }

    FieldState to_fields(double t) const {
        FieldState out{t, inverse(a), {}};
        for (const Spectrum& c : u) out.u.push_back(inverse(c));
        return out;
    }

    /// this += h * o
    SpectralState& axpy(double h, const SpectralState& o) {
        for (std::size_t i = 0; i < a.coeffs.size(); ++i) a.coeffs[i] += h * o.a.coeffs[i];
        for (std::size_t c = 0; c < u.size(); ++c)
            for (std::size_t i = 0; i < u[c].coeffs.size(); ++i) u[c].coeffs[i] += h * o.u[c].coeffs[i];
        return *this;
    }

    SpectralState zero_like() const {
        SpectralState out{Spectrum(a.grid), {}};
        for (std::size_t c = 0; c < u.size(); ++c) out.u.emplace_back(a.grid);
        return out;
    }
};

/// Per-mode linear flow for one step size h. Acting on a mode with unit
/// direction n = xi/|xi| and m = i n.u:
///   a' = p11 a + i p12 (n.u)
///   u' = e (u - n (n.u)) + p22 n (n.u) - i p21 n a
/// with e = exp(-lambda h). The zero mode keeps a and damps u by e. Nyquist
/// modes have no conjugate partner for the odd coupling and are set to zero.
class LinearPlan {
public:
    LinearPlan(const SpectralGrid& g, const RieszParams& params, double h) : h_(h) {
        params.validate();
        const std::size_t n = g.spectral_size();
        coeff_.resize(n);
        e_ = std::exp(-params.lambda * h);
        g.for_each_mode([&](std::size_t i, const Wavevector& w) {
            if (w.zero) return;
            coeff_[i] = linear::propagator(linear::ModeSystem::from(w.norm, params), h);
        });
    }

    double step() const { return h_; }

    void apply(SpectralState& s) const {
        const SpectralGrid& g = s.a.grid;
        const int d = g.dim();
        g.for_each_mode([&](std::size_t i, const Wavevector& w) {
            if (w.zero) {
                for (auto& c : s.u) c.coeffs[i] *= e_;
                return;
            }
            if (w.nyquist) {
                s.a.coeffs[i] = 0.0;
                for (auto& c : s.u) c.coeffs[i] = 0.0;
                return;
            }
            const linear::Mat2& p = coeff_[i];
            double n[2] = {w.xi[0] / w.norm, w.xi[1] / w.norm};
            complex nu = 0.0;
            for (int c = 0; c < d; ++c) nu += n[c] * s.u[static_cast<std::size_t>(c)].coeffs[i];
            const complex a = s.a.coeffs[i];
            const complex I(0.0, 1.0);
            s.a.coeffs[i] = p[0] * a + I * p[1] * nu;
            for (int c = 0; c < d; ++c) {
                complex& uc = s.u[static_cast<std::size_t>(c)].coeffs[i];
                uc = e_ * (uc - n[c] * nu) + p[3] * n[c] * nu - I * p[2] * n[c] * a;
            }
        });
    }

private:
    double h_;
    double e_ = 1.0;
    std::vector<linear::Mat2> coeff_;
};

/// Mask of retained modes: |k_i| <= fraction * N_i / 2 on every axis, Nyquist removed.
inline std::vector<char> dealias_mask(const SpectralGrid& g, double fraction) {
    std::vector<char> keep(g.spectral_size(), 0);
    g.for_each_mode([&](std::size_t i, const Wavevector& w) {
        if (w.nyquist) return;
        bool ok = true;
        for (int c = 0; c < g.dim(); ++c)
            ok = ok && std::abs(static_cast<double>(w.k[c])) <= fraction * static_cast<double>(g.modes(c)) / 2.0;
        keep[i] = ok ? 1 : 0;
    });
    return keep;
}

inline void apply_mask(Spectrum& s, const std::vector<char>& keep) {
    for (std::size_t i = 0; i < s.coeffs.size(); ++i)
        if (!keep[i]) s.coeffs[i] = 0.0;
}

inline void apply_mask(SpectralState& s, const std::vector<char>& keep) {
    apply_mask(s.a, keep);
    for (auto& c : s.u) apply_mask(c, keep);
}

namespace detail {

inline Spectrum partial(const Spectrum& s, int axis) {
    Spectrum out(s.grid);
    s.grid.for_each_mode([&](std::size_t i, const Wavevector& w) {
        if (!w.nyquist) out.coeffs[i] = complex(0.0, w.xi[axis]) * s.coeffs[i];
    });
    return out;
}

}  // namespace detail

/// Physical-space values of the state that the step loop checks.
struct NonlinearTerms {
    SpectralState rhs;
    Field a;  // density fluctuation at the evaluation point
};

/// N_a = -div(a u), N_u = -(u.grad) u, products in physical space, derivatives
/// spectral, dealiased with `keep`. The zero mode of N_a is set to exactly 0.
inline NonlinearTerms rhs_nonlinear(const SpectralState& s, const std::vector<char>& keep) {
    const SpectralGrid& g = s.a.grid;
    const int d = g.dim();
    NonlinearTerms out{s.zero_like(), inverse(s.a)};
    VectorField u;
    for (const Spectrum& c : s.u) u.push_back(inverse(c));
    // -div(a u)
    for (int c = 0; c < d; ++c) {
        const Spectrum flux = forward(out.a * u[static_cast<std::size_t>(c)]);
        const Spectrum dflux = detail::partial(flux, c);
        for (std::size_t i = 0; i < flux.coeffs.size(); ++i) out.rhs.a.coeffs[i] -= dflux.coeffs[i];
    }
    // -(u.grad) u_l
    for (int l = 0; l < d; ++l) {
        Field adv(g);
        for (int c = 0; c < d; ++c) adv += u[static_cast<std::size_t>(c)] * inverse(detail::partial(s.u[static_cast<std::size_t>(l)], c));
        Spectrum sa = forward(adv);
        sa *= -1.0;
        out.rhs.u[static_cast<std::size_t>(l)] = std::move(sa);
    }
    apply_mask(out.rhs, keep);
    out.rhs.a.coeffs[0] = 0.0;
    return out;
}

/// Field-level convenience wrapper: (da, du).
inline FieldState rhs_nonlinear(const FieldState& state, double dealias = 2.0 / 3.0) {
    const SpectralState s = SpectralState::from(state);
    return rhs_nonlinear(s, dealias_mask(state.grid(), dealias)).rhs.to_fields(state.t);
}

/// Exact linear flow of a field state over dt.
inline FieldState linear_step(const FieldState& state, const RieszParams& params, double dt) {
    require(dt >= 0.0, "linear_step: need dt >= 0");
    state.validate();
    SpectralState s = SpectralState::from(state);
    LinearPlan(state.grid(), params, dt).apply(s);
    return s.to_fields(state.t + dt);
}

enum class Status { completed, positivity_violation, blowup };

inline std::string to_string(Status s) {
    switch (s) {
        case Status::completed: return "completed";
        case Status::positivity_violation: return "positivity_violation";
        default: return "blowup";
    }
}

struct Trajectory {
    std::vector<FieldState> snapshots;
    Status status = Status::completed;
    /// Time of the last accepted state when the run aborted.
    double failure_time = 0.0;
    std::string message;
    long steps = 0;

    bool ok() const { return status == Status::completed; }
};

/// Integrating-factor time stepper; caches the linear flow per step size.
class Stepper {
public:
    Stepper(const SpectralGrid& g, const RieszParams& params, const SolverConfig& cfg)
        : grid_(g), params_(params), cfg_(cfg), keep_(dealias_mask(g, cfg.dealias)) {}

    const std::vector<char>& mask() const { return keep_; }

    const LinearPlan& plan(double h) {
        auto it = plans_.find(h);
        if (it == plans_.end()) it = plans_.emplace(h, LinearPlan(grid_, params_, h)).first;
        return it->second;
    }

    /// N(v); also reports the physical density at v for the positivity check.
    SpectralState nonlinear(const SpectralState& v, Field* density = nullptr) {
        if (!cfg_.nonlinear) {
            if (density) *density = inverse(v.a);
            return v.zero_like();
        }
        NonlinearTerms nt = rhs_nonlinear(v, keep_);
        if (density) *density = std::move(nt.a);
        return std::move(nt.rhs);
    }

    /// Advances v by h. `density` receives 1 + a - 1 evaluated at the start of the step.
    void step(SpectralState& v, double h, Field* density = nullptr) {
        if (cfg_.integrator == Integrator::exp_euler) {
            v.axpy(h, nonlinear(v, density));
            plan(h).apply(v);
            return;
        }
        const LinearPlan& half = plan(0.5 * h);
        const SpectralState k1 = nonlinear(v, density);
        SpectralState ev = v;
        half.apply(ev);  // E(h/2) v

        SpectralState y = v;
        y.axpy(0.5 * h, k1);
        half.apply(y);
        const SpectralState k2 = nonlinear(y);

        y = ev;
        y.axpy(0.5 * h, k2);
        const SpectralState k3 = nonlinear(y);

        SpectralState evh = ev;
        half.apply(evh);  // E(h) v
        SpectralState ek3 = k3;
        half.apply(ek3);
        y = evh;
        y.axpy(h, ek3);
        const SpectralState k4 = nonlinear(y);

        // E(h) k1 + 2 E(h/2)(k2 + k3) = E(h/2)(E(h/2) k1 + 2 (k2 + k3))
        SpectralState acc = k1;
        half.apply(acc);
        acc.axpy(2.0, k2);
        acc.axpy(2.0, k3);
        half.apply(acc);
        acc.axpy(1.0, k4);
        v = std::move(evh);
        v.axpy(h / 6.0, acc);
    }

private:
    SpectralGrid grid_;
    RieszParams params_;
    SolverConfig cfg_;
    std::vector<char> keep_;
    std::map<double, LinearPlan> plans_;
};

namespace detail {

inline bool finite(const SpectralState& s) {
    for (const complex& c : s.a.coeffs)
        if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) return false;
    for (const Spectrum& u : s.u)
        for (const complex& c : u.coeffs)
            if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) return false;
    return true;
}

}  // namespace detail

/// Integrates from `initial` to cfg.t_end, recording snapshots on the
/// schedule. Each interval between snapshots is split into equal steps no
/// longer than dt so that snapshot times are hit exactly. The initial data is
/// projected onto the dealiased modes. Positivity and finiteness violations
/// abort the run and return the partial trajectory.
inline Trajectory integrate(const FieldState& initial, const RieszParams& params, const SolverConfig& cfg) {
    cfg.validate();
    params.validate();
    initial.validate();
    require(initial.a.mean_zero(), "integrate: initial density fluctuation must be mean-zero");
    require(initial.a.min() + 1.0 >= cfg.positivity_floor, "integrate: initial density below positivity floor");
    const SpectralGrid& g = initial.grid();
    Stepper stepper(g, params, cfg);
    SpectralState v = SpectralState::from(initial);
    apply_mask(v, stepper.mask());
    v.a.coeffs[0] = 0.0;

    Trajectory traj;
    double t = initial.t;
    auto fail = [&](Status st, const std::string& why) {
        traj.status = st;
        traj.failure_time = t;
        traj.message = why;
    };
    auto check_density = [&](const Field& a) {
        if (!a.finite()) {
            fail(Status::blowup, "non-finite density");
            return false;
        }
        if (a.min() + 1.0 < cfg.positivity_floor) {
            std::ostringstream os;
            os << "min(1 + a) = " << a.min() + 1.0 << " below floor " << cfg.positivity_floor;
            fail(Status::positivity_violation, os.str());
            return false;
        }
        return true;
    };

    for (double target : cfg.schedule()) {
        const double span = target - t;
        if (span > 0.0) {
            const long n = std::max(1L, static_cast<long>(std::ceil(span / cfg.dt - 1e-9)));
            const double h = span / static_cast<double>(n);
            for (long k = 0; k < n; ++k) {
                if (cfg.cancel && cfg.cancel->load()) throw Error("integrate: interrupted");
                Field density;
                stepper.step(v, h, &density);
                // the density seen by the step is the state before it
                if (!check_density(density)) return traj;
                if (!detail::finite(v)) {
                    fail(Status::blowup, "non-finite state");
                    return traj;
                }
                ++traj.steps;
                t = k + 1 == n ? target : t + h;
            }
        }
        FieldState snap = v.to_fields(t);
        if (!check_density(snap.a)) return traj;
        traj.snapshots.push_back(std::move(snap));
    }
    return traj;
}

}  // namespace riesz::solver
