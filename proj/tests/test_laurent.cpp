#include "zcorr/laurent.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace zcorr;
using L = RationalLaurentSeries;

TEST(Laurent, ExpNegLowOrder) {
    const L e = L::exp_neg(Rational(1), 3);
    EXPECT_EQ(e.valuation(), 0);
    EXPECT_EQ(e.coeff(0), Rational(1));
    EXPECT_EQ(e.coeff(1), Rational(-1));
    EXPECT_EQ(e.coeff(2), Rational(1, 2));
    EXPECT_EQ(e.coeff(3), Rational(-1, 6));
    EXPECT_EQ(e.first_unknown(), 4);
}

TEST(Laurent, OneMinusExpIsDetASeries) {
    const L det_a = L::monomial(0) - L::exp_neg(Rational(1), 6);
    EXPECT_EQ(det_a.valuation(), 1);
    EXPECT_EQ(det_a.coeff(1), Rational(1));
    EXPECT_EQ(det_a.coeff(2), Rational(-1, 2));
    EXPECT_EQ(det_a.coeff(3), Rational(1, 6));
}

TEST(Laurent, DivisionFactorsOutValuation) {
    const L det_a = L::monomial(0) - L::exp_neg(Rational(1), 8);
    const L q = L::monomial(2) / det_a; // u^2 / (u - u^2/2 + ...)
    EXPECT_EQ(q.valuation(), 1);
    EXPECT_EQ(q.coeff(1), Rational(1));
    EXPECT_EQ(q.coeff(2), Rational(1, 2));
    // u^2/(1 - e^-u) = u * u/(1-e^-u); second factor generates Bernoulli
    // numbers: u/(1-e^-u) = 1 + u/2 + u^2/12 - u^4/720 + ...
    EXPECT_EQ(q.coeff(3), Rational(1, 12));
    EXPECT_EQ(q.coeff(4), Rational(0));
    EXPECT_EQ(q.coeff(5), Rational(-1, 720));
}

TEST(Laurent, MulDivRoundTrip) {
    const L a(-1, {Rational(2), Rational(0), Rational(-1, 3), Rational(5)}, 8);
    const L b(1, {Rational(1), Rational(1, 7), Rational(-2)}, 9);
    const L back = (a * b) / b;
    for (int p = back.valuation(); p < back.first_unknown(); ++p)
        EXPECT_EQ(back.coeff(p), a.coeff(p)) << "power " << p;
}

TEST(Laurent, DivisionByZeroSeriesThrows) {
    EXPECT_THROW(L::monomial(1) / L::zero(), std::domain_error);
}

// Knowledge bounds must shrink under arithmetic, never grow: a product
// knows a coefficient only if every contributing pair is known.
TEST(Laurent, KnowledgeBoundPropagation) {
    const L a(0, {Rational(1), Rational(1)}, 2);  // 1 + u + O(u^2) unknown
    const L b(0, {Rational(1), Rational(-1)}, 2); // 1 - u + O(u^2)
    const L p = a * b;
    EXPECT_EQ(p.first_unknown(), 2);
    EXPECT_EQ(p.coeff(0), Rational(1));
    EXPECT_EQ(p.coeff(1), Rational(0));
    EXPECT_THROW(p.coeff(2), std::out_of_range);

    const L s = a + L(3, {Rational(1)}, 4);
    EXPECT_EQ(s.first_unknown(), 2);
    // Exact inputs stay exact.
    EXPECT_EQ((L::monomial(2) * L::monomial(-1)).first_unknown(), L::kExact);
}

// Regression: a product whose knowledge window is shorter than the left
// factor used to write past the result buffer.
TEST(Laurent, ClampedProductWindow) {
    const L long_factor(
        0, {Rational(1), Rational(2), Rational(3), Rational(4), Rational(5)},
        L::kExact);
    const L short_factor(0, {Rational(1)}, 1); // knows only the constant
    const L p = long_factor * short_factor;
    EXPECT_EQ(p.first_unknown(), 1);
    EXPECT_EQ(p.coeff(0), Rational(1));
}

TEST(Laurent, ComposeScaleAndPow) {
    const L f(1, {Rational(1), Rational(1)}, 6); // u + u^2
    const L g = f.compose_scale(Rational(1, 2)); // u/2 + u^2/4
    EXPECT_EQ(g.coeff(1), Rational(1, 2));
    EXPECT_EQ(g.coeff(2), Rational(1, 4));
    const L h = f.pow(3);
    EXPECT_EQ(h.valuation(), 3);
    EXPECT_EQ(h.coeff(3), Rational(1));
    EXPECT_EQ(h.coeff(4), Rational(3));
    const L inv2 = f.pow(-2);
    EXPECT_EQ(inv2.valuation(), -2);
    EXPECT_EQ(inv2.coeff(-2), Rational(1));
    EXPECT_EQ(inv2.coeff(-1), Rational(-2));
}

TEST(Laurent, EvaluateAgainstClosedForm) {
    // 1/(1-u) within the truncation window.
    std::vector<Rational> ones(20, Rational(1));
    const L geom(0, ones, 20);
    const double u = 0.3;
    EXPECT_NEAR(geom.evaluate(u), 1.0 / (1.0 - u), std::pow(u, 20) * 2);
    // Laurent part evaluates through negative powers.
    const L pole(-2, {Rational(3)}, L::kExact);
    EXPECT_NEAR(pole.evaluate(0.5), 12.0, 1e-12);
}

TEST(Laurent, JsonSerialization) {
    const L s(-1, {Rational(1), Rational(1, 4), Rational(-11, 2160)}, 4);
    EXPECT_EQ(s.json_string(),
              "{\"var\":\"u\",\"valuation\":-1,"
              "\"coeffs\":[\"1\",\"1/4\",\"-11/2160\"]}");
    EXPECT_EQ(L::zero().json_string(),
              "{\"var\":\"u\",\"valuation\":0,\"coeffs\":[]}");
}

TEST(Laurent, TruncatedDropsHighOrders) {
    const L a(0, {Rational(1), Rational(2), Rational(3), Rational(4)},
              L::kExact);
    const L t = a.truncated(2);
    EXPECT_EQ(t.first_unknown(), 3);
    EXPECT_EQ(t.coeff(2), Rational(3));
    EXPECT_THROW(t.coeff(3), std::out_of_range);
}
