#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "riesz/error.hpp"

namespace riesz {

/// One point of the (half-)spectral lattice.
///
/// `xi` holds the physical wavenumber 2*pi*k/L per axis, with k taken in
/// [-N/2, N/2). `nyquist` is set when any axis sits on k = -N/2, where the
/// conjugate partner -xi is not a lattice point.
struct Wavevector {
    std::array<double, 2> xi{0.0, 0.0};
    std::array<long, 2> k{0, 0};
    double norm = 0.0;
    bool nyquist = false;
    bool zero = false;
    /// Multiplicity of this half-spectrum entry in the full lattice (1 or 2).
    double weight = 1.0;
};

/// Periodic box [0, L_0) x [0, L_1) with N_i points per axis (d = 1 or 2).
///
/// Physical data is stored row-major with the last axis fastest. The
/// spectral layout is the real-to-complex half spectrum: the last axis keeps
/// N/2 + 1 entries.
class SpectralGrid {
public:
    SpectralGrid() = default;

    SpectralGrid(int dim, std::span<const double> lengths, std::span<const std::size_t> modes)
        : dim_(dim) {
        require(dim == 1 || dim == 2, "grid dimension must be 1 or 2");
        require(lengths.size() == static_cast<std::size_t>(dim), "grid: need one length per axis");
        require(modes.size() == static_cast<std::size_t>(dim), "grid: need one mode count per axis");
        for (int i = 0; i < dim; ++i) {
            if (!(lengths[i] > 0.0) || !std::isfinite(lengths[i])) {
                std::ostringstream os;
                os << "grid: box length along axis " << i << " must be positive, got " << lengths[i];
                throw Error(os.str());
            }
            if (modes[i] < 8 || modes[i] % 2 != 0) {
                std::ostringstream os;
                os << "grid: mode count along axis " << i << " must be even and >= 8, got " << modes[i];
                throw Error(os.str());
            }
            length_[i] = lengths[i];
            n_[i] = modes[i];
        }
    }

    int dim() const { return dim_; }
    std::size_t modes(int axis) const { return n_[axis]; }
    double length(int axis) const { return length_[axis]; }

    std::size_t size() const { return n_[0] * n_[1]; }
    std::size_t spectral_size() const {
        return dim_ == 1 ? n_[0] / 2 + 1 : n_[0] * (n_[1] / 2 + 1);
    }
    /// Entries along the last (halved) spectral axis.
    std::size_t half_extent() const { return n_[dim_ - 1] / 2 + 1; }

    double volume() const { return length_[0] * length_[1]; }
    double cell_volume() const { return volume() / static_cast<double>(size()); }

    double wavenumber_unit(int axis) const { return 2.0 * std::numbers::pi / length_[axis]; }

    /// Lattice wavenumbers along one axis in FFT order.
    std::vector<double> axis_wavenumbers(int axis) const {
        std::vector<double> out(n_[axis]);
        const long n = static_cast<long>(n_[axis]);
        for (long i = 0; i < n; ++i) out[i] = wavenumber_unit(axis) * static_cast<double>(signed_index(i, n));
        return out;
    }

    /// Largest |xi| over the full lattice.
    double max_wavenumber() const {
        double s = 0.0;
        for (int i = 0; i < dim_; ++i) {
            const double k = wavenumber_unit(i) * static_cast<double>(n_[i] / 2);
            s += k * k;
        }
        return std::sqrt(s);
    }

    /// Smallest nonzero |xi|.
    double min_wavenumber() const {
        double m = wavenumber_unit(0);
        for (int i = 1; i < dim_; ++i) m = std::min(m, wavenumber_unit(i));
        return m;
    }

    /// Wavevector of half-spectrum entry `idx`.
    Wavevector wavevector(std::size_t idx) const {
        Wavevector w;
        const std::size_t h = half_extent();
        if (dim_ == 1) {
            w.k[0] = signed_index(static_cast<long>(idx), static_cast<long>(n_[0]));
        } else {
            w.k[0] = signed_index(static_cast<long>(idx / h), static_cast<long>(n_[0]));
            w.k[1] = signed_index(static_cast<long>(idx % h), static_cast<long>(n_[1]));
        }
        double s = 0.0;
        for (int i = 0; i < dim_; ++i) {
            w.xi[i] = wavenumber_unit(i) * static_cast<double>(w.k[i]);
            s += w.xi[i] * w.xi[i];
            if (w.k[i] == -static_cast<long>(n_[i] / 2)) w.nyquist = true;
        }
        w.norm = std::sqrt(s);
        w.zero = (w.k[0] == 0 && w.k[1] == 0);
        const std::size_t last = dim_ == 1 ? idx : idx % h;
        w.weight = (last == 0 || last == h - 1) ? 1.0 : 2.0;
        return w;
    }

    /// Visits every half-spectrum entry: f(idx, wavevector).
    template <class F>
    void for_each_mode(F&& f) const {
        const std::size_t m = spectral_size();
        for (std::size_t idx = 0; idx < m; ++idx) f(idx, wavevector(idx));
    }

    /// Physical coordinate of grid point `idx` along `axis`.
    double coordinate(std::size_t idx, int axis) const {
        const std::size_t i = dim_ == 1 ? idx : (axis == 0 ? idx / n_[1] : idx % n_[1]);
        return length_[axis] * static_cast<double>(i) / static_cast<double>(n_[axis]);
    }

    std::string describe() const {
        std::ostringstream os;
        os << "dim=" << dim_ << " N=" << n_[0];
        if (dim_ == 2) os << "x" << n_[1];
        os << " L=" << length_[0];
        if (dim_ == 2) os << "x" << length_[1];
        return os.str();
    }

    friend bool operator==(const SpectralGrid& a, const SpectralGrid& b) {
        return a.dim_ == b.dim_ && a.n_ == b.n_ && a.length_ == b.length_;
    }

private:
    static long signed_index(long i, long n) { return i < n / 2 ? i : i - n; }

    int dim_ = 1;
    std::array<std::size_t, 2> n_{8, 1};
    std::array<double, 2> length_{2.0 * std::numbers::pi, 1.0};
};

inline SpectralGrid make_grid(int dim, std::span<const double> lengths, std::span<const std::size_t> modes) {
    return SpectralGrid(dim, lengths, modes);
}

inline SpectralGrid make_grid_1d(double length, std::size_t modes) {
    const std::array<double, 1> l{length};
    const std::array<std::size_t, 1> n{modes};
    return SpectralGrid(1, l, n);
}

inline SpectralGrid make_grid_2d(double lx, double ly, std::size_t nx, std::size_t ny) {
    const std::array<double, 2> l{lx, ly};
    const std::array<std::size_t, 2> n{nx, ny};
    return SpectralGrid(2, l, n);
}

}  // namespace riesz
