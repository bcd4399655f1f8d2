#pragma once

#include <fftw3.h>

#include <complex>
#include <map>
#include <mutex>
#include <tuple>
#include <vector>

#include "riesz/field.hpp"

namespace riesz {

/// Half spectrum of a real field (real-to-complex layout of SpectralGrid).
///
/// Coefficients are normalized so that f(x) = sum_k c_k exp(i xi_k . x); the
/// zero mode is the mean.
struct Spectrum {
    SpectralGrid grid;
    std::vector<complex> coeffs;

    Spectrum() = default;
    explicit Spectrum(const SpectralGrid& g) : grid(g), coeffs(g.spectral_size(), complex{}) {}

    Spectrum& operator+=(const Spectrum& o) {
        for (std::size_t i = 0; i < coeffs.size(); ++i) coeffs[i] += o.coeffs[i];
        return *this;
    }
    Spectrum& operator*=(complex c) {
        for (auto& v : coeffs) v *= c;
        return *this;
    }
};

namespace detail {

// FFTW planning is not thread-safe; execution on new arrays is. Plans are
// built once per shape under a lock and reused for the life of the process.
class PlanCache {
public:
    enum Kind { R2C, C2R, C2C_FWD, C2C_BWD };

    static PlanCache& instance() {
        static PlanCache cache;
        return cache;
    }

    fftw_plan get(Kind kind, const SpectralGrid& g) {
        const auto key = std::make_tuple(static_cast<int>(kind), g.dim(), g.modes(0), g.dim() == 2 ? g.modes(1) : 1);
        std::lock_guard lock(mutex_);
        if (auto it = plans_.find(key); it != plans_.end()) return it->second;
        int n[2] = {static_cast<int>(g.modes(0)), g.dim() == 2 ? static_cast<int>(g.modes(1)) : 1};
        const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
        const std::size_t nreal = g.size();
        auto* rbuf = static_cast<double*>(fftw_malloc(sizeof(double) * nreal));
        auto* cbuf = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * nreal));
        auto* cbuf2 = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * nreal));
        fftw_plan p = nullptr;
        switch (kind) {
            case R2C: p = fftw_plan_dft_r2c(g.dim(), n, rbuf, cbuf, flags); break;
            case C2R: p = fftw_plan_dft_c2r(g.dim(), n, cbuf, rbuf, flags); break;
            case C2C_FWD: p = fftw_plan_dft(g.dim(), n, cbuf, cbuf2, FFTW_FORWARD, flags); break;
            case C2C_BWD: p = fftw_plan_dft(g.dim(), n, cbuf, cbuf2, FFTW_BACKWARD, flags); break;
        }
        fftw_free(rbuf);
        fftw_free(cbuf);
        fftw_free(cbuf2);
        require(p != nullptr, "FFTW failed to create a plan");
        plans_.emplace(key, p);
        return p;
    }

    PlanCache(const PlanCache&) = delete;
    PlanCache& operator=(const PlanCache&) = delete;

    ~PlanCache() {
        for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
    }

private:
    PlanCache() = default;
    std::mutex mutex_;
    std::map<std::tuple<int, int, std::size_t, std::size_t>, fftw_plan> plans_;
};

inline fftw_complex* as_fftw(complex* p) { return reinterpret_cast<fftw_complex*>(p); }

}  // namespace detail

inline Spectrum forward(const Field& f) {
    const SpectralGrid& g = f.grid();
    Spectrum out(g);
    std::vector<double> in(f.values().begin(), f.values().end());
    fftw_execute_dft_r2c(detail::PlanCache::instance().get(detail::PlanCache::R2C, g), in.data(),
                         detail::as_fftw(out.coeffs.data()));
    const double scale = 1.0 / static_cast<double>(g.size());
    for (auto& c : out.coeffs) c *= scale;
    return out;
}

inline Field inverse(const Spectrum& s) {
    const SpectralGrid& g = s.grid;
    std::vector<complex> scratch = s.coeffs;  // c2r overwrites its input
    std::vector<double> values(g.size());
    fftw_execute_dft_c2r(detail::PlanCache::instance().get(detail::PlanCache::C2R, g),
                         detail::as_fftw(scratch.data()), values.data());
    return Field(g, std::move(values));
}

/// Full complex spectrum (every lattice point), row-major, same normalization.
inline std::vector<complex> forward_full(const std::vector<complex>& values, const SpectralGrid& g) {
    std::vector<complex> in = values;
    std::vector<complex> out(g.size());
    fftw_execute_dft(detail::PlanCache::instance().get(detail::PlanCache::C2C_FWD, g), detail::as_fftw(in.data()),
                     detail::as_fftw(out.data()));
    const double scale = 1.0 / static_cast<double>(g.size());
    for (auto& c : out) c *= scale;
    return out;
}

inline std::vector<complex> inverse_full(const std::vector<complex>& coeffs, const SpectralGrid& g) {
    std::vector<complex> in = coeffs;
    std::vector<complex> out(g.size());
    fftw_execute_dft(detail::PlanCache::instance().get(detail::PlanCache::C2C_BWD, g), detail::as_fftw(in.data()),
                     detail::as_fftw(out.data()));
    return out;
}

/// Wavevector of full-lattice entry `idx` (row-major, FFT order on every axis).
inline Wavevector full_wavevector(const SpectralGrid& g, std::size_t idx) {
    Wavevector w;
    const long n0 = static_cast<long>(g.modes(0));
    const long n1 = static_cast<long>(g.dim() == 2 ? g.modes(1) : 1);
    const long i0 = g.dim() == 1 ? static_cast<long>(idx) : static_cast<long>(idx) / n1;
    const long i1 = g.dim() == 1 ? 0 : static_cast<long>(idx) % n1;
    w.k[0] = i0 < n0 / 2 ? i0 : i0 - n0;
    if (g.dim() == 2) w.k[1] = i1 < n1 / 2 ? i1 : i1 - n1;
    double s = 0.0;
    for (int a = 0; a < g.dim(); ++a) {
        w.xi[a] = g.wavenumber_unit(a) * static_cast<double>(w.k[a]);
        s += w.xi[a] * w.xi[a];
        if (w.k[a] == -static_cast<long>(g.modes(a) / 2)) w.nyquist = true;
    }
    w.norm = std::sqrt(s);
    w.zero = w.k[0] == 0 && w.k[1] == 0;
    return w;
}

/// Squared L^2 norm computed on the spectral side (Parseval).
inline double spectral_l2_squared(const Spectrum& s) {
    double acc = 0.0;
    s.grid.for_each_mode([&](std::size_t i, const Wavevector& w) { acc += w.weight * std::norm(s.coeffs[i]); });
    return acc * s.grid.volume();
}

}  // namespace riesz
