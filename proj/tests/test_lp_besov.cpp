// Littlewood-Paley partition, dyadic blocks and Besov norms.

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "riesz/lp/besov.hpp"
#include "riesz/lp/inequalities.hpp"
#include "riesz/random.hpp"

using namespace riesz;
using namespace riesz::lp;

namespace {
constexpr double kPi = std::numbers::pi;

// chi(1) evaluated from the closed form of the mollifier: s = (1 - 3/4)/(4/3 - 3/4) = 3/7.
double chi_at_one() {
    const double left = std::exp(-1.0 / (1.0 - 3.0 / 7.0));
    const double right = std::exp(-1.0 / (3.0 / 7.0));
    return left / (left + right);
}

Field sum_blocks(const LPDecomposition& d, const SpectralGrid& g) {
    Field acc(g);
    for (const auto& [j, blk] : d.blocks) acc += blk;
    return acc;
}
}  // namespace

TEST(Profile, ChiShape) {
    EXPECT_EQ(chi(0.0), 1.0);
    EXPECT_EQ(chi(0.75), 1.0);
    EXPECT_EQ(chi(4.0 / 3.0), 0.0);
    EXPECT_EQ(chi(2.0), 0.0);
    double prev = 1.0;
    for (double r = 0.0; r < 1.5; r += 1e-3) {
        EXPECT_LE(chi(r), prev + 1e-15);
        prev = chi(r);
    }
    EXPECT_NEAR(chi(1.0), chi_at_one(), 1e-15);
}

TEST(Profile, PhiSupport) {
    for (double r = 0.0; r < 0.75; r += 1e-3) EXPECT_EQ(phi(r), 0.0);
    for (double r = 8.0 / 3.0; r < 6.0; r += 1e-2) EXPECT_EQ(phi(r), 0.0);
    EXPECT_EQ(phi(1.4), 1.0);
}

TEST(Partition, UnityOnLattice) {
    for (const SpectralGrid& g : {make_grid_1d(2 * kPi, 64), make_grid_1d(200 * kPi, 4096), make_grid_2d(2 * kPi, 5.0, 64, 32),
                                  make_grid_2d(37.0, 37.0, 128, 128)}) {
        const LPPartition part = build_partition(g);
        EXPECT_GE(part.count(), 3);
        EXPECT_LE(partition_of_unity_residue(part, g), 1e-10) << g.describe();
    }
}

TEST(Partition, BlockWeightAtDyadicRadius) {
    const LPPartition part(-2, 5);
    for (int j = -2; j <= 5; ++j) EXPECT_NEAR(part.weight(j, std::exp2(j)), 1.0 - chi_at_one(), 1e-15);
}

TEST(Partition, BlockSupport) {
    const LPPartition part(-3, 6);
    for (int j = -3; j <= 6; ++j) {
        const double base = std::exp2(j);
        for (double r = 0.0; r < 0.75 * base; r += base / 97) EXPECT_EQ(part.weight(j, r), 0.0);
        for (double r = 8.0 / 3.0 * base; r < 5 * base; r += base / 97) EXPECT_EQ(part.weight(j, r), 0.0);
    }
}

TEST(Partition, RejectsTooFewShells) { EXPECT_THROW(LPPartition(0, 1), Error); }

TEST(DyadicBlock, CentredModeLivesInOneBlock) {
    const SpectralGrid g = make_grid_1d(2 * kPi, 64);
    const LPPartition part = build_partition(g);
    // |xi| = 11 = 1.375 * 2^3 sits where phi(2^{-3} .) = 1
    const Field u = Field::sample(g, [](double x) { return std::cos(11 * x); });
    EXPECT_LT(l2_norm(dyadic_block(u, 3, part) - u), 1e-14);
    EXPECT_LT(dyadic_block(u, 1, part).max_abs(), 1e-14);
    EXPECT_LT(dyadic_block(u, 5, part).max_abs(), 1e-14);
}

TEST(DyadicBlock, DyadicModeSplitsBetweenNeighbours) {
    const SpectralGrid g = make_grid_1d(2 * kPi, 64);
    const LPPartition part = build_partition(g);
    const Field u = Field::sample(g, [](double x) { return std::sin(8 * x); });
    const Field uj = dyadic_block(u, 3, part);
    EXPECT_LT(l2_norm(uj - (1.0 - chi_at_one()) * u), 1e-14);
    EXPECT_LT(l2_norm(uj + dyadic_block(u, 2, part) - u), 1e-14);
    EXPECT_LT(dyadic_block(u, 1, part).max_abs(), 1e-14);
    EXPECT_LT(dyadic_block(u, 5, part).max_abs(), 1e-14);
}

TEST(DyadicBlock, RejectsOutOfRangeIndex) {
    const SpectralGrid g = make_grid_1d(2 * kPi, 64);
    const LPPartition part = build_partition(g);
    const Field u(g);
    EXPECT_THROW(dyadic_block(u, part.j_max() + 1, part), Error);
    EXPECT_THROW(dyadic_block(u, part.j_min() - 1, part), Error);
}

TEST(DyadicBlock, ReconstructionWithinResidual) {
    Rng rng(31);
    const SpectralGrid g = make_grid_2d(2 * kPi, 2 * kPi, 64, 64);
    const LPPartition part = build_partition(g);
    Field u = random_smooth_field(g, rng, 12.0);
    for (double& v : u.values()) v += 2.0;
    const LPDecomposition d = decompose(u, part);
    Field centred = u;
    for (double& v : centred.values()) v -= u.mean();
    const double rel = l2_norm(sum_blocks(d, g) - centred) / l2_norm(centred);
    EXPECT_LE(rel * rel, std::max(d.residual, 1e-28) * 1.01 + 1e-28);
    EXPECT_LT(d.residual, 1e-20);
}

TEST(DyadicBlock, TruncatedRangeReportsResidual) {
    Rng rng(32);
    const SpectralGrid g = make_grid_1d(2 * kPi, 128);
    const LPPartition narrow(0, 3);  // misses |xi| > 12
    const Field u = random_bandlimited_field(g, rng, 40.0);
    const LPDecomposition d = decompose(u, narrow);
    const double rel = l2_norm(sum_blocks(d, g) - u) / l2_norm(u);
    EXPECT_GT(d.residual, 0.1);
    EXPECT_NEAR(rel * rel, d.residual, 1e-12);
}

TEST(DyadicBlock, QuasiOrthogonality) {
    Rng rng(33);
    const SpectralGrid g = make_grid_2d(2 * kPi, 2 * kPi, 64, 64);
    const LPPartition part = build_partition(g);
    const Field u = random_smooth_field(g, rng, 20.0);
    for (int j = part.j_min(); j <= part.j_max(); ++j) {
        for (int l = part.j_min(); l <= part.j_max(); ++l) {
            if (std::abs(j - l) < 2) continue;
            EXPECT_LE(l2_norm(dyadic_block(dyadic_block(u, l, part), j, part)), 1e-12 * l2_norm(u));
        }
    }
}

TEST(Besov, ZeroField) {
    const SpectralGrid g = make_grid_1d(2 * kPi, 64);
    const LPPartition part = build_partition(g);
    EXPECT_EQ(besov_norm(Field(g), BesovSpec{1.5, 3.0, 1.0}, part), 0.0);
}

TEST(Besov, SingleBlockDominance) {
    const SpectralGrid g = make_grid_1d(2 * kPi, 64);
    const LPPartition part = build_partition(g);
    for (double s : {-1.0, 0.0, 0.5, 2.0}) {
        // mode entirely inside block 3
        const Field u = Field::sample(g, [](double x) { return std::cos(11 * x); });
        const double exact = std::exp2(3 * s) * l2_norm(u);
        EXPECT_NEAR(besov_norm(u, BesovSpec{s, 2.0, 1.0}, part), exact, 1e-13 * exact);
        // mode at |xi| = 2^3 shared by blocks 2 and 3
        const Field v = Field::sample(g, [](double x) { return std::cos(8 * x); });
        const double direct = (std::exp2(3 * s) * (1 - chi_at_one()) + std::exp2(2 * s) * chi_at_one()) * l2_norm(v);
        EXPECT_NEAR(besov_norm(v, BesovSpec{s, 2.0, 1.0}, part), direct, 1e-13 * direct);
    }
}

TEST(Besov, Homogeneity) {
    Rng rng(34);
    const SpectralGrid g = make_grid_2d(2 * kPi, 2 * kPi, 32, 32);
    const LPPartition part = build_partition(g);
    const Field u = random_smooth_field(g, rng, 6.0);
    for (const BesovSpec& spec : {BesovSpec{0.5, 2, 1}, BesovSpec{-0.3, 4, 2}, BesovSpec{1.0, kInf, kInf, Flavor::low, 1},
                                  BesovSpec{2.0, 3, 1, Flavor::high, 0}}) {
        const double base = besov_norm(u, spec, part);
        EXPECT_NEAR(besov_norm(-3.5 * u, spec, part), 3.5 * base, 1e-12 * base);
    }
}

TEST(Besov, HybridSemiNormInequalities) {
    Rng rng(35);
    const SpectralGrid g = make_grid_1d(64.0, 512);
    const LPPartition part = build_partition(g);
    const double s_star = 0.35;
    for (int trial = 0; trial < 10; ++trial) {
        const Field u = random_smooth_field(g, rng, 10.0);
        for (int J1 : {-2, 0, 2}) {
            for (double sigma0 : {0.5, 1.0, 2 * s_star}) {
                for (double s1 : {-0.5, 0.0, 1.5}) {
                    const double low = besov_norm(u, {s1, 2, 1, Flavor::low, J1}, part);
                    const double low_shift = besov_norm(u, {s1 - sigma0, 2, 1, Flavor::low, J1}, part);
                    EXPECT_LE(low, std::exp2(sigma0 * J1) * low_shift * (1 + 1e-14));
                    const double high = besov_norm(u, {s1, 2, 1, Flavor::high, J1}, part);
                    const double high_shift = besov_norm(u, {s1 + sigma0, 2, 1, Flavor::high, J1}, part);
                    EXPECT_LE(high, std::exp2(-sigma0 * J1 + sigma0) * high_shift * (1 + 1e-14));
                    // l^1 low norm bounded by the l^inf one at a lower index
                    const double low_inf = besov_norm(u, {s1 - sigma0, 2, kInf, Flavor::low, J1}, part);
                    double geometric = 0.0;
                    for (int j = part.j_min(); j <= J1; ++j) geometric += std::exp2(j * sigma0);
                    EXPECT_LE(low, geometric * low_inf * (1 + 1e-14));
                }
            }
        }
    }
}

TEST(Besov, InterpolationBracket) {
    // sum_j 2^{j s_theta} b_j <= A^theta B^{1-theta} (1/(1-2^{-(1-theta)ds}) + 1/(1-2^{-theta ds}))
    // with A, B the l^inf norms at s and s~.
    Rng rng(36);
    const SpectralGrid g = make_grid_2d(20.0, 20.0, 64, 64);
    const LPPartition part = build_partition(g);
    double worst = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        const Field u = random_smooth_field(g, rng, 4.0);
        for (double theta : {0.25, 0.5, 0.75}) {
            const double s = -0.5, st = 1.5;
            const double mid = besov_norm(u, {theta * s + (1 - theta) * st, 2, 1}, part);
            const double a = besov_norm(u, {s, 2, kInf}, part);
            const double b = besov_norm(u, {st, 2, kInf}, part);
            const double c = mid / (std::pow(a, theta) * std::pow(b, 1 - theta));
            const double bound = 1.0 / (1 - std::exp2(-(1 - theta) * (st - s))) + 1.0 / (1 - std::exp2(-theta * (st - s)));
            EXPECT_LE(c, bound);
            worst = std::max(worst, c);
        }
    }
    EXPECT_GT(worst, 0.5);
}

TEST(CheminLerner, ConstantSnapshotMatchesBesov) {
    Rng rng(37);
    const SpectralGrid g = make_grid_1d(2 * kPi, 64);
    const LPPartition part = build_partition(g);
    const Field u = random_smooth_field(g, rng, 8.0);
    const std::vector<Timed<Field>> snaps{{0.0, u}, {1.0, u}, {2.5, u}};
    const BesovSpec spec{0.7, 2, 1};
    EXPECT_NEAR(chemin_lerner_norm<Field>(snaps, kInf, spec, part), besov_norm(u, spec, part), 1e-14);
}

TEST(CheminLerner, ExponentialDecayTimeIntegral) {
    Rng rng(38);
    const SpectralGrid g = make_grid_1d(2 * kPi, 64);
    const LPPartition part = build_partition(g);
    const Field u0 = random_smooth_field(g, rng, 8.0);
    std::vector<Timed<Field>> snaps;
    for (int i = 0; i <= 8000; ++i) {
        const double t = 0.005 * i;
        snaps.push_back({t, std::exp(-t) * u0});
    }
    const BesovSpec spec{0.5, 2, 1};
    // int_0^40 e^{-t} dt = 1 - e^{-40}; trapezoid error ~ dt^2/12
    EXPECT_NEAR(chemin_lerner_norm<Field>(snaps, 1.0, spec, part) / besov_norm(u0, spec, part), 1.0, 1e-5);
}

TEST(CheminLerner, MinkowskiOrdering) {
    Rng rng(39);
    const SpectralGrid g = make_grid_1d(2 * kPi, 64);
    const LPPartition part = build_partition(g);
    const Field u0 = random_smooth_field(g, rng, 8.0);
    const Field u1 = random_smooth_field(g, rng, 8.0);
    std::vector<Timed<Field>> snaps;
    double pointwise_max = 0.0;
    const BesovSpec spec{0.3, 2, 1};
    for (int i = 0; i <= 20; ++i) {
        const double t = 0.1 * i;
        Field f = std::cos(3 * t) * u0 + std::sin(2 * t) * u1;
        pointwise_max = std::max(pointwise_max, besov_norm(f, spec, part));
        snaps.push_back({t, std::move(f)});
    }
    EXPECT_GE(chemin_lerner_norm<Field>(snaps, kInf, spec, part), pointwise_max * (1 - 1e-14));
}

TEST(CheminLerner, RejectsUnorderedTimes) {
    const SpectralGrid g = make_grid_1d(2 * kPi, 64);
    const LPPartition part = build_partition(g);
    const std::vector<Timed<Field>> snaps{{1.0, Field(g)}, {0.5, Field(g)}};
    EXPECT_THROW(chemin_lerner_norm<Field>(snaps, 1.0, BesovSpec{}, part), Error);
    const std::vector<Timed<Field>> single{{1.0, Field(g)}};
    EXPECT_THROW(chemin_lerner_norm<Field>(single, 1.0, BesovSpec{}, part), Error);
}

TEST(Bernstein, SingleModeRatioIsOne) {
    const SpectralGrid g = make_grid_1d(2 * kPi, 64);
    const Field u = Field::sample(g, [](double x) { return std::cos(8 * x); });
    EXPECT_NEAR(verify_bernstein(u, 3, 1, 2, 2), 1.0, 1e-14);
    const SpectralGrid g2 = make_grid_2d(2 * kPi, 2 * kPi, 32, 32);
    const Field v = Field::sample(g2, [](double x, double y) { return std::sin(3 * x + 3 * y); });
    // |xi| = 3 sqrt 2, j = 2: ratio = (3 sqrt 2 / 4)^k
    EXPECT_NEAR(verify_bernstein(v, 2, 2, 2, 2), std::pow(3 * std::sqrt(2.0) / 4, 2), 1e-13);
}

TEST(Bernstein, RandomAnnulusBracket) {
    Rng rng(40);
    const SpectralGrid g = make_grid_2d(2 * kPi, 2 * kPi, 64, 64);
    for (int j : {2, 3}) {
        for (int trial = 0; trial < 20; ++trial) {
            const Field u = random_band_field(g, rng, 0.75 * std::exp2(j), 8.0 / 3.0 * std::exp2(j));
            const double r = verify_bernstein(u, j, 2, 2, 2);
            EXPECT_GE(r, 0.75 * 0.75);
            EXPECT_LE(r, (8.0 / 3.0) * (8.0 / 3.0));
        }
    }
}

TEST(Bernstein, UpperBracketUniformAcrossShells) {
    // Random-phase samples spread out in space as the shell grows, so for p < q
    // the lower end drifts down with j; the upper end must not grow.
    Rng rng(41);
    const SpectralGrid g = make_grid_2d(8 * kPi, 8 * kPi, 128, 128);
    std::vector<double> upper;
    for (int j : {0, 1, 2}) {
        double hi = 0.0;
        for (int trial = 0; trial < 100; ++trial) {
            const Field u = random_band_field(g, rng, 0.75 * std::exp2(j), 8.0 / 3.0 * std::exp2(j));
            const double r = verify_bernstein(u, j, 1, 2, 4);
            EXPECT_GT(r, 0.0);
            hi = std::max(hi, r);
        }
        upper.push_back(hi);
    }
    for (std::size_t i = 1; i < upper.size(); ++i) EXPECT_LE(upper[i], upper[0] * 1.1);
    EXPECT_LT(upper[0], 8.0 / 3.0);
}

TEST(Bernstein, RejectsSupportViolation) {
    const SpectralGrid g = make_grid_1d(2 * kPi, 64);
    const Field u = Field::sample(g, [](double x) { return std::cos(8 * x) + std::cos(x); });
    EXPECT_THROW(verify_bernstein(u, 3, 1, 2, 2), SupportError);
}

TEST(WuLowerBound, PlancherelBracketAtP2) {
    Rng rng(42);
    const SpectralGrid g = make_grid_2d(2 * kPi, 2 * kPi, 64, 64);
    for (double aw : {0.0, 0.3, 0.5, 1.0, 1.7}) {
        for (int trial = 0; trial < 10; ++trial) {
            const int j = 3;
            const Field f = random_band_field(g, rng, 6.0, 21.0);
            const double r = verify_wu_lower_bound(f, j, 2.0, aw);
            EXPECT_GE(r, std::pow(0.75, 2 * aw) * (1 - 1e-12));
            EXPECT_LE(r, std::pow(8.0 / 3.0, 2 * aw) * (1 + 1e-12));
        }
    }
}

TEST(WuLowerBound, SingleModeExact) {
    const SpectralGrid g = make_grid_1d(2 * kPi, 64);
    const Field f = Field::sample(g, [](double x) { return std::sin(10 * x); });
    for (double aw : {0.25, 0.8}) EXPECT_NEAR(verify_wu_lower_bound(f, 3, 2.0, aw), std::pow(10.0 / 8.0, 2 * aw), 1e-13);
}

TEST(WuLowerBound, PositiveAtP4) {
    Rng rng(43);
    const SpectralGrid g = make_grid_2d(2 * kPi, 2 * kPi, 64, 64);
    double lo = 1e300;
    for (int trial = 0; trial < 30; ++trial) {
        const Field f = random_band_field(g, rng, 6.0, 21.0);
        lo = std::min(lo, verify_wu_lower_bound(f, 3, 4.0, 0.5));
    }
    EXPECT_GT(lo, 0.0);
}

TEST(WuLowerBound, RejectsParameterRange) {
    const SpectralGrid g = make_grid_1d(2 * kPi, 64);
    const Field f = Field::sample(g, [](double x) { return std::sin(10 * x); });
    EXPECT_THROW(verify_wu_lower_bound(f, 3, 4.0, 1.5), Error);
    EXPECT_THROW(verify_wu_lower_bound(f, 3, 1.5, 0.5), Error);
    EXPECT_THROW(verify_wu_lower_bound(f, 3, 2.0, -0.1), Error);
    EXPECT_THROW(verify_wu_lower_bound(f, 3, kInf, 0.5), Error);
}

TEST(Besov, CsvRow) {
    const BesovSpec spec{0.5, 2, 1, Flavor::low, -1};
    EXPECT_EQ(besov_csv_row(1.5, spec, BesovReport{2.0, 0.0}), "1.5,0.5,2,1,low,-1,2,0");
}
