// Eigenvalues, propagator and continuum decay quadrature of the linear system.

#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>
#include <array>
#include <boost/numeric/odeint.hpp>
#include <cmath>
#include <random>

#include "riesz/linear/decay_quadrature.hpp"
#include "riesz/linear/spectrum.hpp"
#include "riesz/stats.hpp"

using namespace riesz;
using namespace riesz::linear;

namespace {

Eigen::Matrix2d to_eigen(const Mat2& m) {
    Eigen::Matrix2d out;
    out << m[0], m[1], m[2], m[3];
    return out;
}

// Similarity by a power of two keeps the eigenvalue oracle well conditioned
// when the off-diagonal entries differ by many orders of magnitude.
Eigen::Vector2cd oracle_eigenvalues(const ModeSystem& m) {
    Eigen::Matrix2d a = to_eigen(m.matrix());
    if (m.xi_norm > 0.0) {
        const double beta = std::exp2(std::round(std::log2(std::pow(m.xi_norm, m.s_star - 1.0))));
        a(0, 1) *= beta;
        a(1, 0) /= beta;
    }
    return Eigen::EigenSolver<Eigen::Matrix2d>(a, false).eigenvalues();
}

Mat2 odeint_propagator(const ModeSystem& m, double t) {
    namespace ode = boost::numeric::odeint;
    using State = std::array<double, 2>;
    const Mat2 a = m.matrix();
    auto rhs = [&](const State& x, State& dx, double) {
        dx[0] = a[0] * x[0] + a[1] * x[1];
        dx[1] = a[2] * x[0] + a[3] * x[1];
    };
    Mat2 out{};
    for (int col = 0; col < 2; ++col) {
        State x{col == 0 ? 1.0 : 0.0, col == 1 ? 1.0 : 0.0};
        ode::integrate_adaptive(ode::make_controlled(1e-14, 1e-14, ode::runge_kutta_fehlberg78<State>()), rhs, x, 0.0,
                                t, 1e-3);
        out[0 + col] = x[0];
        out[2 + col] = x[1];
    }
    return out;
}

double degenerate_xi(double s_star) { return std::pow(0.25, 1.0 / (2.0 * s_star)); }

}  // namespace

TEST(Eigenvalues, ZeroMode) {
    for (double s : {0.1, 0.5, 0.9}) {
        const EigenPair e = eigenvalues(0.0, s);
        EXPECT_EQ(e.lambda1, complex(0.0, 0.0));
        EXPECT_EQ(e.lambda2, complex(-1.0, 0.0));
        EXPECT_FALSE(e.degenerate);
    }
}

TEST(Eigenvalues, DegenerateDoubleRoot) {
    for (double s : {0.25, 0.5, 0.75}) {
        const EigenPair e = eigenvalues(degenerate_xi(s), s);
        EXPECT_TRUE(e.degenerate);
        EXPECT_NEAR(e.lambda1.real(), -0.5, 1e-15);
        EXPECT_NEAR(e.lambda2.real(), -0.5, 1e-15);
        EXPECT_EQ(e.lambda1.imag(), 0.0);
    }
    EXPECT_FALSE(eigenvalues(degenerate_xi(0.5) * (1 + 1e-10), 0.5).degenerate);
}

TEST(Eigenvalues, UnitFrequency) {
    for (double s : {0.2, 0.5, 0.8}) {
        const EigenPair e = eigenvalues(1.0, s);
        EXPECT_NEAR(e.lambda1.real(), -0.5, 1e-15);
        EXPECT_NEAR(std::abs(e.lambda1.imag()), std::sqrt(3.0) / 2, 1e-15);
        EXPECT_NEAR(e.lambda2.imag(), -e.lambda1.imag(), 0.0);
    }
}

TEST(Eigenvalues, TraceDeterminantIdentities) {
    std::mt19937_64 rng(51);
    std::uniform_real_distribution<double> logxi(-7.0, 7.0), sdist(0.05, 0.95);
    for (int i = 0; i < 2000; ++i) {
        const double xi = std::pow(10.0, logxi(rng));
        const double s = sdist(rng);
        const EigenPair e = eigenvalues(xi, s);
        const double det = std::pow(xi, 2 * s);
        EXPECT_NEAR(std::abs(e.lambda1 + e.lambda2 + 1.0), 0.0, 1e-13);
        EXPECT_LE(std::abs(e.lambda1 * e.lambda2 - det), 1e-13 * std::max(1.0, det));
        EXPECT_LT(e.lambda1.real(), 0.0);
        EXPECT_LT(e.lambda2.real(), 0.0);
        EXPECT_EQ(e.lambda1.imag() == 0.0, 4 * det <= 1.0) << xi << ' ' << s;
    }
}

TEST(Eigenvalues, MatchBalancedEigenSolver) {
    std::mt19937_64 rng(52);
    std::uniform_real_distribution<double> logxi(-6.0, 6.0), sdist(0.05, 0.95);
    for (int i = 0; i < 500; ++i) {
        const ModeSystem m{std::pow(10.0, logxi(rng)), sdist(rng)};
        const EigenPair e = eigenvalues(m);
        Eigen::Vector2cd o = oracle_eigenvalues(m);
        // order oracle values as (slow, fast)
        if (std::abs(o[0]) > std::abs(o[1]) || (o[0].imag() < 0 && std::abs(o[0]) == std::abs(o[1]))) std::swap(o[0], o[1]);
        const double scale = std::max(1.0, std::abs(e.lambda2));
        const bool complex_pair = e.lambda1.imag() != 0.0;
        if (complex_pair) {
            EXPECT_NEAR(e.lambda1.real(), o[0].real(), 1e-12 * scale);
            EXPECT_NEAR(std::abs(e.lambda1.imag()), std::abs(o[0].imag()), 1e-12 * scale);
        } else {
            // the slow root is relatively accurate even when tiny
            EXPECT_NEAR(e.lambda1.real(), o[0].real(), 1e-9 * std::abs(e.lambda1.real()) + 1e-15);
            EXPECT_NEAR(e.lambda2.real(), o[1].real(), 1e-12 * scale);
        }
    }
}

TEST(Eigenvalues, GeneralCoefficients) {
    const ModeSystem m{0.3, 0.4, 2.5, 0.7};
    const EigenPair e = eigenvalues(m);
    EXPECT_NEAR(std::abs(e.lambda1 + e.lambda2 + 2.5), 0.0, 1e-14);
    EXPECT_NEAR(std::abs(e.lambda1 * e.lambda2 - m.det()), 0.0, 1e-14);
}

TEST(Asymptotics, LowRegime) {
    for (double s : {0.25, 0.5, 0.75}) {
        const auto rows = asymptotic_check(s, Regime::low);
        ASSERT_EQ(rows.size(), 6u);
        for (std::size_t i = 1; i < rows.size(); ++i) {
            EXPECT_LE(std::abs(rows[i].ratio1 - 1), std::abs(rows[i - 1].ratio1 - 1));
            EXPECT_LE(std::abs(rows[i].ratio2 - 1), std::abs(rows[i - 1].ratio2 - 1));
        }
    }
    const auto rows = asymptotic_check(0.5, Regime::low);
    EXPECT_NEAR(rows.back().xi, 1e-6, 1e-20);
    // lambda1 = -x (1 + x + O(x^2)) with x = 1e-6
    EXPECT_NEAR(rows.back().ratio1, 1.0, 1e-5);
    EXPECT_NEAR(rows.back().ratio1, 1.0 + 1e-6, 1e-11);
}

TEST(Asymptotics, HighRegime) {
    for (double s : {0.25, 0.5, 0.75}) {
        const auto rows = asymptotic_check(s, Regime::high);
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (std::pow(rows[i].xi, 2 * s) > 0.25) EXPECT_EQ(rows[i].ratio1, 1.0);
            if (i > 0) EXPECT_LE(std::abs(rows[i].ratio2 - 1), std::abs(rows[i - 1].ratio2 - 1));
        }
        // |Im| / |xi|^{s*} = sqrt(1 - 1/(4x))
        const double x = std::pow(1e6, 2 * s);
        EXPECT_NEAR(rows.back().ratio2, std::sqrt(1 - 0.25 / x), 1e-14);
    }
}

TEST(Asymptotics, DissipativeBound) {
    for (double s : {0.25, 0.5, 0.75}) {
        const auto xis = log_grid(1e-6, 1e6, 2001);
        const DissipativeScan scan = dissipative_scan(s, xis);
        EXPECT_GT(scan.constant, 0.0);
        for (double xi : xis) {
            const EigenPair e = eigenvalues(xi, s);
            const double x = std::pow(xi, 2 * s);
            EXPECT_LE(std::max(e.lambda1.real(), e.lambda2.real()), -scan.constant * x / (1 + x) + 1e-15);
        }
        // c(xi) = (1 + x)/(2x) above the degenerate point, minimal at the largest xi
        EXPECT_LE(scan.constant, 0.5 * (1 + std::pow(1e6, -2 * s)) + 1e-12);
    }
}

TEST(Propagator, IdentityAtZeroTime) {
    for (double xi : {0.0, 1e-5, 0.3, 1.0, 40.0}) EXPECT_EQ(max_abs_diff(propagator(xi, 0.5, 0.0), identity2()), 0.0);
}

TEST(Propagator, ZeroModeStructure) {
    for (double t : {0.1, 1.0, 10.0}) {
        const Mat2 p = propagator(0.0, 0.3, t);
        EXPECT_NEAR(p[0], 1.0, 1e-15);
        EXPECT_EQ(p[1], 0.0);
        EXPECT_EQ(p[2], 0.0);
        EXPECT_NEAR(p[3], std::exp(-t), 1e-15);
    }
}

TEST(Propagator, RejectsNegativeTime) { EXPECT_THROW(propagator(1.0, 0.5, -1e-3), Error); }

TEST(Propagator, SemigroupExample) {
    for (double s : {0.25, 0.5, 0.75}) {
        const ModeSystem m{0.7, s};
        EXPECT_LE(max_abs_diff(propagator(m, 1.2), propagator(m, 0.3) * propagator(m, 0.9)), 1e-12);
    }
}

TEST(Propagator, SemigroupRandom) {
    std::mt19937_64 rng(53);
    std::uniform_real_distribution<double> logxi(-5.0, 4.0), sdist(0.05, 0.95), tdist(0.0, 20.0);
    for (int i = 0; i < 1000; ++i) {
        const ModeSystem m{std::pow(10.0, logxi(rng)), sdist(rng)};
        const double t = tdist(rng), s = tdist(rng);
        const Mat2 lhs = propagator(m, t + s);
        EXPECT_LE(max_abs_diff(lhs, propagator(m, t) * propagator(m, s)), 1e-12 * std::max(1.0, operator_norm(lhs)));
    }
}

TEST(Propagator, MatchesMatrixExponential) {
    std::mt19937_64 rng(54);
    std::uniform_real_distribution<double> logxi(-3.0, 2.0), sdist(0.05, 0.95), tdist(0.0, 10.0);
    for (int i = 0; i < 300; ++i) {
        const ModeSystem m{std::pow(10.0, logxi(rng)), sdist(rng)};
        const double t = tdist(rng);
        const Eigen::Matrix2d ref = (t * to_eigen(m.matrix())).exp();
        const Mat2 p = propagator(m, t);
        for (int k = 0; k < 4; ++k) EXPECT_NEAR(p[k], ref(k / 2, k % 2), 1e-11 * std::max(1.0, std::abs(ref(k / 2, k % 2))));
    }
}

TEST(Propagator, MatchesAdaptiveOdeIntegration) {
    std::mt19937_64 rng(55);
    std::uniform_real_distribution<double> logxi(-3.0, 1.5), sdist(0.1, 0.9), tdist(0.0, 8.0);
    for (int i = 0; i < 60; ++i) {
        const ModeSystem m{std::pow(10.0, logxi(rng)), sdist(rng)};
        const double t = tdist(rng);
        EXPECT_LE(max_abs_diff(propagator(m, t), odeint_propagator(m, t)), 1e-10) << m.xi_norm << ' ' << m.s_star << ' ' << t;
    }
}

TEST(Propagator, DegenerateLimitFormula) {
    for (double s : {0.25, 0.5, 0.75}) {
        const ModeSystem m{degenerate_xi(s), s};
        ASSERT_TRUE(is_degenerate(m));
        for (double t : {0.5, 2.0, 7.0}) {
            const Mat2 a = m.matrix();
            const double e = std::exp(-0.5 * t);
            const Mat2 ref{e * (1 + t * (a[0] + 0.5)), e * t * a[1], e * t * a[2], e * (1 + t * (a[3] + 0.5))};
            EXPECT_LE(max_abs_diff(propagator(m, t), ref), 1e-13);
            // continuity across the degenerate point
            for (double eps : {1e-7, -1e-7}) {
                const ModeSystem near{m.xi_norm * (1 + eps), s};
                EXPECT_LE(max_abs_diff(propagator(near, t), ref), 1e-5);
            }
        }
    }
}

TEST(Propagator, GeneralCoefficientsMatchExponential) {
    const ModeSystem m{0.45, 0.35, 2.0, 3.0};
    const Eigen::Matrix2d ref = (1.7 * to_eigen(m.matrix())).exp();
    const Mat2 p = propagator(m, 1.7);
    for (int k = 0; k < 4; ++k) EXPECT_NEAR(p[k], ref(k / 2, k % 2), 1e-13);
}

TEST(Propagator, UniformlyBounded) {
    for (double s : {0.25, 0.5, 0.75}) {
        double bound = 0.0;
        for (double xi : log_grid(1e-4, 1e3, 300))
            for (double t : log_grid(1e-3, 1e3, 60)) bound = std::max(bound, operator_norm(propagator(xi, s, t)));
        EXPECT_TRUE(std::isfinite(bound));
        EXPECT_GE(bound, 1.0);
        RecordProperty("bound_s" + std::to_string(static_cast<int>(100 * s)), std::to_string(bound));
    }
}

TEST(Vorticity, Decay) {
    EXPECT_EQ(vorticity_decay(0.0), 1.0);
    EXPECT_DOUBLE_EQ(vorticity_decay(1.0), std::exp(-1.0));
    EXPECT_THROW(vorticity_decay(-1.0), Error);
}

TEST(DecayQuadrature, InitialNormMatchesClosedForm) {
    // int_0^1 xi^{2(sigma - sigma1) - 1} d xi = 1 / (2(sigma - sigma1))
    for (int d : {1, 2, 3}) {
        const PowerlawProfile prof{d, -0.5 * d, 1.3, 1.0};
        const double sigma = 0.25;
        const auto pts = linear_decay_quadrature(prof, ModeSystem{0.0, 0.5}, sigma, {0.0}, {1e-10});
        const double exact = 1.3 * std::sqrt(sphere_area(d) / (2 * (sigma - prof.sigma1)));
        EXPECT_NEAR(pts[0].norm, exact, 1e-8 * exact);
        EXPECT_NEAR(pts[0].reference, exact, 1e-8 * exact);
    }
}

TEST(DecayQuadrature, RejectsNonIntegrableProfile) {
    const PowerlawProfile prof{1, -0.5, 1.0, 1.0};
    EXPECT_THROW(linear_decay_quadrature(prof, ModeSystem{0.0, 0.5}, -0.5, {1.0}), Error);
    EXPECT_THROW(linear_decay_quadrature(prof, ModeSystem{0.0, 0.5}, -0.7, {1.0}), Error);
}

TEST(DecayQuadrature, HeatSlopeAndPropagatorSlope) {
    const auto times = log_grid(1e2, 1e4, 21);
    std::vector<double> logt;
    for (double t : times) logt.push_back(std::log(t));
    struct Case {
        int d;
        double sigma1, sigma;
    };
    for (double s : {0.25, 0.5, 0.75}) {
        for (const Case& c : {Case{1, -0.5, 0.0}, Case{1, -0.5, 0.5}, Case{2, -1.0, 0.0}, Case{2, -1.0, 1.0}}) {
            const PowerlawProfile prof{c.d, c.sigma1, 1.0, 1.0};
            const auto pts = linear_decay_quadrature(prof, ModeSystem{0.0, s}, c.sigma, times, {1e-6});
            std::vector<double> ln, lr;
            for (const auto& p : pts) {
                ln.push_back(std::log(p.norm));
                lr.push_back(std::log(p.reference));
            }
            const double theory = -(c.sigma - c.sigma1) / (2 * s);
            const double ref_slope = fit_line(logt, lr).slope;
            const double prop_slope = fit_line(logt, ln).slope;
            EXPECT_NEAR(ref_slope / theory, 1.0, 0.03) << "s*=" << s << " d=" << c.d << " sigma=" << c.sigma;
            EXPECT_NEAR(prop_slope / ref_slope, 1.0, 0.05) << "s*=" << s << " d=" << c.d << " sigma=" << c.sigma;
        }
    }
}

TEST(Csv, EigenRow) {
    const EigenPair e = eigenvalues(1.0, 0.5);
    EXPECT_EQ(eigen_csv_header(), "xi,re1,im1,re2,im2");
    EXPECT_EQ(eigen_csv_row(1.0, e).substr(0, 7), "1,-0.5,");
    EXPECT_EQ(decay_csv_header(), "t,norm,reference_norm");
}
