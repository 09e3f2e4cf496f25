#include "zcorr/series.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace zcorr;

TEST(Series, PairScalarExpansions) {
    const PQRSSeries s = pqrs_series(10);
    EXPECT_EQ(s.P.valuation(), 1);
    EXPECT_EQ(s.P.coeff(1), Rational(1, 2));
    EXPECT_EQ(s.P.coeff(2), Rational(-1, 12));
    EXPECT_EQ(s.det_a.valuation(), 1);
    EXPECT_EQ(s.det_a.coeff(1), Rational(1));
    EXPECT_EQ(s.det_a.coeff(2), Rational(-1, 2));
    EXPECT_EQ(s.det_a.coeff(3), Rational(1, 6));
    EXPECT_EQ(s.S.coeff(0), Rational(1));
    EXPECT_EQ(s.S.coeff(1), Rational(-1, 2));
    // Q vanishes at u = 0 and Q^2 has valuation >= 2.
    EXPECT_GE(s.Q.valuation(), 1);
    EXPECT_GE((s.Q * s.Q).valuation(), 2);
}

TEST(Series, PointPairLowestCoefficients) {
    const RationalLaurentSeries k11 = kappa_series(1, 1, 16);
    EXPECT_EQ(k11.valuation(), 1);
    EXPECT_EQ(k11.coeff(1), Rational(1, 2));
    EXPECT_EQ(k11.coeff(3), Rational(-1, 36));
    EXPECT_EQ(k11.coeff(5), Rational(1, 720));
    EXPECT_EQ(k11.coeff(11), Rational(-691, 8382528000LL));

    const RationalLaurentSeries k33 = kappa_series(3, 3, 12);
    EXPECT_EQ(k33.valuation(), -1);
    EXPECT_EQ(k33.coeff(-1), Rational(1));
    EXPECT_EQ(k33.coeff(1), Rational(1, 4));
    EXPECT_EQ(k33.coeff(3), Rational(-11, 2160));
}

TEST(Series, CodimTwoConstantAtMFour) {
    // (5m^2 - 7m + 12)/(12(m-1)m) at m = 4 is 4/9.
    const RationalLaurentSeries s = kappa_series(2, 4, 8);
    EXPECT_EQ(s.coeff(0), Rational(4, 9));
}

TEST(Series, LeadingPoleCoefficient) {
    // kappa_mm starts at u^(2-m) with coefficient (m+1)/4.
    for (int m = 1; m <= 6; ++m) {
        const RationalLaurentSeries s = kappa_series(m, m, 10);
        EXPECT_EQ(s.valuation(), 2 - m) << "m=" << m;
        EXPECT_EQ(s.coeff(2 - m), Rational(m + 1, 4)) << "m=" << m;
    }
}

TEST(Series, ParityLawHoldsExactly) {
    for (int m = 1; m <= 8; ++m) EXPECT_TRUE(parity_check(m)) << "m=" << m;
    // And is a real constraint: kappa_mm only carries powers of the same
    // parity as m.
    const RationalLaurentSeries k55 = kappa_series(5, 5, 9);
    EXPECT_EQ(k55.coeff(-2), Rational(0));
    EXPECT_EQ(k55.coeff(0), Rational(0));
    EXPECT_EQ(k55.coeff(-3), Rational(3, 2));
    EXPECT_EQ(k55.coeff(-1), Rational(4, 3));
}

// Truncated series vs the numeric evaluators inside the convergence window:
// the gap must be controlled by the first omitted term.
TEST(Series, TruncationErrorAgainstNumerics) {
    const double r = 0.3, u = r * r;
    struct Probe {
        int k, m;
    };
    for (const Probe p : {Probe{1, 1}, Probe{2, 2}, Probe{1, 3}, Probe{3, 4}}) {
        const int order = 10;
        const RationalLaurentSeries s = kappa_series(p.k, p.m, order);
        const double approx = s.evaluate(u);
        const double exact = p.k == p.m ? kappa_point_closed(r, p.m)
                                        : kappa_low_codim_closed(r, p.k, p.m);
        // Parity makes the first omitted coefficient sit at order+1 or
        // order+2; bound with the looser one.
        const RationalLaurentSeries deep = kappa_series(p.k, p.m, order + 2);
        double omitted = 0;
        for (int q = order + 1; q <= order + 2; ++q)
            omitted += std::abs(rational_to_double(deep.coeff(q))) *
                       std::pow(u, q);
        // Floor: plain double roundoff on values of size |exact|.
        const double floor = 1e-13 * std::max(1.0, std::abs(exact));
        EXPECT_LE(std::abs(approx - exact), std::max(omitted * 2, floor))
            << "k=" << p.k << " m=" << p.m;
    }
}

TEST(Series, CodimFormulasEvaluateAcrossM) {
    // Spot values from the closed coefficient formulas in m.
    for (int m = 1; m <= 8; ++m) {
        const RationalLaurentSeries s = kappa_series(1, m, 8);
        EXPECT_EQ(s.coeff(1), Rational((m + 2) * (m + 1), 12 * m * m));
        if (m > 1) {
            EXPECT_EQ(s.valuation(), -1);
            EXPECT_EQ(s.coeff(-1), Rational(m - 1, m));
        }
    }
    for (int m = 3; m <= 8; ++m) {
        const RationalLaurentSeries s = kappa_series(3, m, 8);
        EXPECT_EQ(s.coeff(0), Rational((m - 3) * (3 * m * m - m + 8),
                                       8 * m * (m - 1) * (m - 2)));
    }
}

TEST(Series, UnsupportedCodimensionPointsToNumerics) {
    try {
        kappa_series(4, 5, 8);
        FAIL() << "expected a domain error";
    } catch (const std::domain_error& e) {
        EXPECT_NE(std::string(e.what()).find("numeric"), std::string::npos);
    }
}

TEST(Series, OmittedPowersAreZero) {
    // The tabulated expansions skip powers whose coefficients vanish; the
    // computed series must actually vanish there, not merely be unprinted.
    const RationalLaurentSeries k1m = kappa_series(1, 4, 8);
    EXPECT_EQ(k1m.coeff(2), Rational(0));
    EXPECT_EQ(k1m.coeff(4), Rational(0));
    const RationalLaurentSeries k22 = kappa_series(2, 2, 9);
    EXPECT_EQ(k22.coeff(1), Rational(0));
    EXPECT_EQ(k22.coeff(3), Rational(0));
}
