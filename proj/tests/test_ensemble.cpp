#include "zcorr/ensemble.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <random>

using namespace zcorr;
using C = std::complex<double>;

TEST(Ensemble, RootsOfKnownPolynomials) {
    // (z - 1)(z - 2)(z - 3) = -6 + 11 z - 6 z^2 + z^3
    const std::vector<C> cubic = {C(-6), C(11), C(-6), C(1)};
    RootSet rs = polynomial_roots(cubic);
    ASSERT_EQ(rs.roots.size(), 3u);
    EXPECT_EQ(rs.discarded, 0);
    std::vector<double> mods;
    for (const C& z : rs.roots) mods.push_back(std::abs(z));
    std::sort(mods.begin(), mods.end());
    EXPECT_NEAR(mods[0], 1.0, 1e-8);
    EXPECT_NEAR(mods[1], 2.0, 1e-8);
    EXPECT_NEAR(mods[2], 3.0, 1e-8);

    // z^8 - 1: roots on the unit circle.
    std::vector<C> unity(9, C(0));
    unity[0] = C(-1);
    unity[8] = C(1);
    rs = polynomial_roots(unity);
    ASSERT_EQ(rs.roots.size(), 8u);
    for (const C& z : rs.roots) EXPECT_NEAR(std::abs(z), 1.0, 1e-10);
}

// Degree counting is the fundamental-theorem-of-algebra check: every draw
// of the random ensemble must yield exactly N roots (kept + discarded).
TEST(Ensemble, RandomDrawKeepsDegreeRoots) {
    std::mt19937_64 rng(42);
    for (int trial = 0; trial < 5; ++trial) {
        const int degree = 60;
        const auto a = su2_coefficients(degree, rng);
        ASSERT_EQ(a.size(), static_cast<size_t>(degree) + 1);
        const RootSet rs = polynomial_roots(a);
        EXPECT_EQ(static_cast<int>(rs.roots.size()) + rs.discarded, degree);
        EXPECT_EQ(rs.discarded, 0);
        for (const C& z : rs.roots)
            EXPECT_LT(detail::root_residual(a, z), 1e-8);
    }
}

TEST(Ensemble, ResidualSeparatesRootsFromNonRoots) {
    const std::vector<C> cubic = {C(-6), C(11), C(-6), C(1)};
    EXPECT_LT(detail::root_residual(cubic, C(2.0)), 1e-15);
    EXPECT_GT(detail::root_residual(cubic, C(2.5)), 1e-3);
    // Reversed evaluation keeps large roots accurate.
    const std::vector<C> wide = {C(-1e8), C(0), C(0), C(1)};
    for (const C& z : polynomial_roots(wide).roots)
        EXPECT_NEAR(std::abs(z), std::pow(1e8, 1.0 / 3), 1e-4);
}

TEST(Ensemble, SphereGeometryIdentities) {
    // North pole, equator, antipodes.
    EXPECT_NEAR((detail::sphere_point(C(0)) - Eigen::Vector3d(0, 0, 1)).norm(),
                0.0, 1e-15);
    EXPECT_NEAR(detail::fs_distance(detail::sphere_point(C(0)),
                                    detail::sphere_point(C(1))),
                M_PI / 4, 1e-12); // |z| = 1 maps to the equator
    // z and -1/conj(z) are antipodal: maximal distance pi/2.
    const C z(0.7, -0.3);
    const C anti = -1.0 / std::conj(z);
    EXPECT_NEAR(detail::fs_distance(detail::sphere_point(z),
                                    detail::sphere_point(anti)),
                M_PI / 2, 1e-12);
    // Small chordal separations reduce to |dz| / (1 + |z|^2).
    const C dz(1e-6, 0);
    EXPECT_NEAR(detail::fs_distance(detail::sphere_point(z),
                                    detail::sphere_point(z + dz)) /
                    (std::abs(dz) / (1.0 + std::norm(z))),
                1.0, 1e-4);
}

TEST(Ensemble, CapAreaConventions) {
    const int degree = 200;
    // Flat-disk limit for small radii.
    EXPECT_NEAR(detail::scaled_cap_area(0.01, degree) / (M_PI * 1e-4), 1.0,
                1e-3);
    // The whole sphere has scaled area N pi, i.e. N roots at density 1/pi.
    EXPECT_NEAR(detail::scaled_cap_area(std::sqrt(double(degree)) * M_PI / 2,
                                        degree),
                degree * M_PI, 1e-9);
}

TEST(Ensemble, SmallRunIsDeterministicAndSane) {
    EnsembleConfig cfg;
    cfg.degree = 50;
    cfg.trials = 30;
    cfg.seed = 17;
    cfg.workers = 1;
    const EnsembleResult a = ensemble_su2(cfg);
    EXPECT_EQ(a.roots_total, 50u * 30u);
    EXPECT_EQ(a.roots_discarded, 0u);
    ASSERT_EQ(a.bins.size(), cfg.bin_edges.size() - 1);
    for (const auto& b : a.bins) {
        EXPECT_GT(b.pairs_counted, 0u);
        EXPECT_TRUE(std::isfinite(b.kappa_hat));
        EXPECT_GT(b.std_error, 0.0);
    }
    // Far bins sit near 1 even at this tiny scale; near bins show repulsion.
    EXPECT_LT(a.bins.front().kappa_hat, 0.6);
    EXPECT_NEAR(a.bins.back().kappa_hat, 1.0, 0.25);

    cfg.workers = 4;
    const EnsembleResult b = ensemble_su2(cfg);
    for (size_t i = 0; i < a.bins.size(); ++i) {
        EXPECT_EQ(a.bins[i].kappa_hat, b.bins[i].kappa_hat);
        EXPECT_EQ(a.bins[i].pairs_counted, b.bins[i].pairs_counted);
    }
}

TEST(Ensemble, ConfigValidation) {
    EnsembleConfig cfg;
    cfg.trials = 1;
    EXPECT_THROW(ensemble_su2(cfg), std::domain_error);
    cfg = EnsembleConfig{};
    cfg.bin_edges = {0.5};
    EXPECT_THROW(ensemble_su2(cfg), std::domain_error);
    cfg.bin_edges = {0.5, 0.5};
    EXPECT_THROW(ensemble_su2(cfg), std::domain_error);
    cfg.bin_edges = {0.05, 1.0}; // outside the supported window
    EXPECT_THROW(ensemble_su2(cfg), std::domain_error);
    cfg.bin_edges = {1.0, 5.0};
    EXPECT_THROW(ensemble_su2(cfg), std::domain_error);
    cfg = EnsembleConfig{};
    cfg.degree = 0;
    EXPECT_THROW(ensemble_su2(cfg), std::domain_error);
}

TEST(Ensemble, SeedMovesTheCounts) {
    EnsembleConfig cfg;
    cfg.degree = 40;
    cfg.trials = 10;
    cfg.seed = 1;
    const EnsembleResult a = ensemble_su2(cfg);
    cfg.seed = 2;
    const EnsembleResult b = ensemble_su2(cfg);
    bool any_diff = false;
    for (size_t i = 0; i < a.bins.size(); ++i)
        any_diff |= a.bins[i].pairs_counted != b.bins[i].pairs_counted;
    EXPECT_TRUE(any_diff);
}
