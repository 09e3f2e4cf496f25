#pragma once

#include "zcorr/correlators.hpp"
#include "zcorr/laurent.hpp"

#include <stdexcept>

namespace zcorr {

/// Deep enough to cover every tabulated coefficient with margin.
inline constexpr int kDefaultSeriesOrder = 16;

/// Exact expansions of the pair-kernel scalars in u = r^2.  R is constantly
/// one and not stored.
struct PQRSSeries {
    RationalLaurentSeries P;     // u/2 - u^2/12 + ...
    RationalLaurentSeries Q;     // -u/2 + u^2/6 + ...
    RationalLaurentSeries S;     // e^{-u/2}
    RationalLaurentSeries det_a; // u - u^2/2 + ...
    int order = 0;
};

inline PQRSSeries pqrs_series(int order = kDefaultSeriesOrder) {
    using L = RationalLaurentSeries;
    if (order < 1) throw std::domain_error("series order must be >= 1");
    const int w = order + 2;
    const L u = L::monomial(1);
    const L expu = L::exp_neg(Rational(1), w);
    const L det_a = L::monomial(0) - expu;    // 1 - e^{-u}, valuation 1
    PQRSSeries s;
    s.P = ((det_a - u * expu) / det_a).truncated(order);
    s.S = L::exp_neg(Rational(1, 2), order);
    s.Q = ((L::exp_neg(Rational(1, 2), w) * (det_a - u)) / det_a).truncated(order);
    s.det_a = det_a.truncated(order);
    s.order = order;
    return s;
}

/// Exact expansion of the codimension-k pair correlator, k in {1,2,3}, by
/// substituting the scalar series into the closed numerator polynomials.
inline RationalLaurentSeries kappa_low_codim_series(int k, int m,
                                                    int order = kDefaultSeriesOrder) {
    using L = RationalLaurentSeries;
    if (k < 1 || k > 3) throw std::domain_error("series closed form needs k in {1,2,3}");
    if (m < k) throw std::domain_error("need k <= m");
    const PQRSSeries s = pqrs_series(order + 2 * k + 6);
    const L R = L::monomial(0);
    L num;
    switch (k) {
        case 1: num = closed_form::kappa1_numerator<L>(m, s.P, s.Q, R, s.S); break;
        case 2: num = closed_form::kappa2_numerator<L>(m, s.P, s.Q, R, s.S); break;
        case 3: num = closed_form::kappa3_numerator<L>(m, s.P, s.Q, R, s.S); break;
    }
    const L q = num / s.det_a.pow(k) / Rational(closed_form::denominator_scale(k, m));
    return q.truncated(order);
}

/// Exact expansion of the point correlator (k = m) through the f_m form.
inline RationalLaurentSeries kappa_point_series(int m, int order = kDefaultSeriesOrder) {
    using L = RationalLaurentSeries;
    if (m < 1) throw std::domain_error("need m >= 1");
    const PQRSSeries s = pqrs_series(order + 2 * m + 6);
    const L R2 = L::monomial(0);
    const L S2 = s.S * s.S;
    const L num = s.P * s.P * f_m_poly<L>(m, R2, S2) +
                  s.Q * s.Q * f_m_poly<L>(m, S2, R2);
    return (num / s.det_a.pow(m) / Rational(m)).truncated(order);
}

/// Dispatch: the point route when k = m, the closed codimension route when
/// k <= 3; nothing else has an exact expansion here.
inline RationalLaurentSeries kappa_series(int k, int m, int order = kDefaultSeriesOrder) {
    if (k < 1 || m < k) throw std::domain_error("need 1 <= k <= m");
    if (k == m) return kappa_point_series(m, order);
    if (k <= 3) return kappa_low_codim_series(k, m, order);
    throw std::domain_error(
        "exact series exist only for k <= 3 or k = m; evaluate 3 < k < m with "
        "a numeric route (eval/mc)");
}

/// The point correlator is an odd function of u for odd m and an even one
/// for even m; verifies every stored coefficient of the wrong parity
/// vanishes exactly.
inline bool parity_check(int m, int order = kDefaultSeriesOrder) {
    const RationalLaurentSeries s = kappa_point_series(m, order);
    if (s.is_zero()) return false;
    const int want = m & 1;
    for (int p = s.valuation(); p <= std::min(order, s.known_through()); ++p) {
        if ((p & 1) != want && !s.coeff(p).is_zero()) return false;
    }
    return true;
}

} // namespace zcorr
