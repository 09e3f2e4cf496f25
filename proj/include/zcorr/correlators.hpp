#pragma once

#include "zcorr/grassmann.hpp"
#include "zcorr/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <variant>
#include <vector>

namespace zcorr {

/// A correlator request: codimension, dimension, and either a separation r
/// (standard two-point layout) or an explicit point configuration.
struct CorrelationQuery {
    int k = 1;
    int m = 1;
    std::variant<double, PointConfig> geometry = 1.0;

    int n() const {
        if (std::holds_alternative<double>(geometry)) return 2;
        return std::get<PointConfig>(geometry).n();
    }
};

/// Imaginary parts of correlator values are pure roundoff; anything larger
/// means the algebra went wrong, not the input.
inline constexpr double kImagResidueTol = 1e-10;

template <class Real>
double real_checked(std::complex<Real> v, const char* what) {
    const Real scale = std::max(Real(1), std::abs(v.real()));
    if (!(std::abs(v.imag()) <= Real(kImagResidueTol) * scale))
        throw ConsistencyError(std::string(what) +
                               ": non-negligible imaginary residue");
    return static_cast<double>(v.real());
}

namespace detail {

inline double fact(int n) {
    double r = 1;
    for (int i = 2; i <= n; ++i) r *= i;
    return r;
}

/// C(m + t - 2, t) as a falling-factorial product.  At m = 1 this is the
/// generalized row C(t-1, t): 1 at t = 0 and 0 for t >= 1, which is exactly
/// the convention the t-expansion needs in dimension one.
inline double expansion_weight(int m, int t) {
    double w = 1;
    for (int i = 1; i <= t; ++i) w *= double(m - 2 + i) / i;
    return w;
}

} // namespace detail

/// Scaled n-point zero correlation via the Grassmann representation: builds
/// the conditioned covariance, forms det(I + Lambda Omega) over 2nk
/// generators, inverts, and Berezin-integrates.  Works for any geometry; the
/// closed forms below only cover two points.
inline double k_npoint_berezin(const PointConfig& cfg, int k,
                               double cond_limit = 1e12) {
    // Internals run at long double: the Schur complement loses digits when
    // points cluster, and the elimination compounds them.
    using Real = long double;
    const CovarianceBundleT<Real> cb = build_covariance_t<Real>(cfg, k, cond_limit);
    const int n = cb.n, m = cb.m;
    const int pairs = n * k;
    const int d = n * k * m;
    using CE = GrassmannEven<std::complex<Real>>;
    using CM = GrassmannMatrix<std::complex<Real>>;

    // Omega[(p,j,q)][(p',j',q')] = delta_pp' delta_qq' eta_{p,j'} etabar_{p,j}
    CM omega(d, pairs);
    for (int p = 0; p < n; ++p)
        for (int j = 0; j < k; ++j)
            for (int jp = 0; jp < k; ++jp)
                for (int q = 0; q < m; ++q)
                    omega.at((p * k + j) * m + q, (p * k + jp) * m + q) =
                        CE::eta_etabar(pairs, p * k + jp, p * k + j);

    CM mat = CM::identity(d, pairs) + lift_scalar_matrix(cb.lambda, pairs) * omega;
    const std::complex<Real> integral = berezin(g_inv(g_det(mat)));
    const double value = real_checked(integral, "k_npoint_berezin");

    Real pref = 1;
    for (int p = 0; p < n; ++p) pref *= Real(detail::fact(m - k) / detail::fact(m));
    for (int j = 0; j < k; ++j) pref /= cb.det_a;
    return value * static_cast<double>(pref);
}

namespace detail {

/// The two determinants whose product is det(I + Lambda Omega) for the
/// standard pair configuration: Phi carries the correlated first derivative
/// direction, Psi the m-1 transverse ones.
template <class Real = double>
struct PairDeterminantsT {
    int pairs = 0;
    GrassmannEven<Real> phi;
    GrassmannEven<Real> psi;

    PairDeterminantsT(const PairKernelT<Real>& pk, int k)
        : pairs(2 * k),
          phi(GrassmannEven<Real>::zero(2 * k)),
          psi(GrassmannEven<Real>::zero(2 * k)) {
        using GE = GrassmannEven<Real>;
        using GM = GrassmannMatrix<Real>;
        auto omega_at = [&](int p) {
            GM w(k, pairs);
            for (int j = 0; j < k; ++j)
                for (int jp = 0; jp < k; ++jp)
                    w.at(j, jp) = GE::eta_etabar(pairs, p * k + jp, p * k + j);
            return w;
        };
        const GM w1 = omega_at(0), w2 = omega_at(1);
        const GM w12 = w1 * w2;
        GM phi_m(k, pairs), psi_m(k, pairs);
        for (int i = 0; i < k; ++i)
            for (int j = 0; j < k; ++j) {
                GE sum = w1.at(i, j) + w2.at(i, j);
                GE kron = (i == j) ? GE::one(pairs) : GE::zero(pairs);
                phi_m.at(i, j) = kron + pk.P * sum + pk.T * w12.at(i, j);
                psi_m.at(i, j) = kron + sum + pk.det_a * w12.at(i, j);
            }
        phi = g_det(phi_m);
        psi = g_det(psi_m);
    }
};

using PairDeterminants = PairDeterminantsT<double>;

template <class Real>
Real pair_prefactor(const PairKernelT<Real>& pk, int k, int m) {
    Real pref = Real(fact(m - k) / fact(m));
    pref *= pref;
    for (int j = 0; j < k; ++j) pref /= pk.det_a;
    return pref;
}

inline void check_pair_args(double r, int k, int m) {
    if (!(r > 0)) throw std::domain_error("separation r must be > 0");
    if (k < 1 || k > m) throw std::domain_error("need 1 <= k <= m");
}

} // namespace detail

/// Two-point correlation from the reduced 2k-generator Berezin integral of
/// 1 / (Phi Psi^{m-1}).  Evaluated at extended precision: the algebra is
/// tiny but the blade coefficients cancel heavily at small r.
inline double kappa_pair_berezin(double r, int k, int m) {
    detail::check_pair_args(r, k, m);
    using Real = HighReal;
    const PairKernelT<Real> pk = pair_kernel_t<Real>(r);
    detail::PairDeterminantsT<Real> pd(pk, k);
    GrassmannEven<Real> den = pd.phi;
    for (int t = 1; t < m; ++t) den *= pd.psi;
    const Real integral = berezin(g_inv(den));
    return static_cast<double>(detail::pair_prefactor(pk, k, m) * integral);
}

/// The 2k+1 Berezin integrals of Phi^{-1} (1 - Psi)^t; the t-expansion of
/// the pair correlator weights these by C(m+t-2, t).
inline std::vector<double> kappa_pair_expansion_terms(double r, int k, int m) {
    detail::check_pair_args(r, k, m);
    using Real = HighReal;
    const PairKernelT<Real> pk = pair_kernel_t<Real>(r);
    detail::PairDeterminantsT<Real> pd(pk, k);
    using GE = GrassmannEven<Real>;
    const GE phinv = g_inv(pd.phi);
    const GE defect = GE::one(pd.pairs) - pd.psi; // nilpotent
    std::vector<double> terms;
    terms.reserve(static_cast<size_t>(2 * k + 1));
    GE power = GE::one(pd.pairs);
    for (int t = 0; t <= 2 * k; ++t) {
        terms.push_back(static_cast<double>(berezin(phinv * power)));
        power *= defect;
    }
    return terms;
}

/// Pair correlator through the binomial t-expansion of Psi^{-(m-1)}.  Same
/// prefactor as the direct route; the dependence on m moves entirely into
/// the scalar weights.
inline double kappa_pair_expansion(double r, int k, int m) {
    detail::check_pair_args(r, k, m);
    using Real = HighReal;
    const PairKernelT<Real> pk = pair_kernel_t<Real>(r);
    detail::PairDeterminantsT<Real> pd(pk, k);
    using GE = GrassmannEven<Real>;
    const GE phinv = g_inv(pd.phi);
    const GE defect = GE::one(pd.pairs) - pd.psi;
    Real sum = 0;
    GE power = GE::one(pd.pairs);
    for (int t = 0; t <= 2 * k; ++t) {
        sum += Real(detail::expansion_weight(m, t)) * berezin(phinv * power);
        power *= defect;
    }
    return static_cast<double>(detail::pair_prefactor(pk, k, m) * sum);
}

// --- closed two-point forms ------------------------------------------------

/// Multiplicative identity and integer scaling in the coefficient ring.
/// Overloads for the exact series ring live next to that type; argument-
/// dependent lookup picks them up at instantiation.
inline double ring_one(double) { return 1.0; }
inline double int_scale(long long c, double x) { return double(c) * x; }

/// Numerator polynomials of the closed pair-correlation forms in
/// codimension 1..3, shared between the numeric evaluators (T = double) and
/// the exact series route (T = Laurent series).
namespace closed_form {

template <class T>
T kappa1_numerator(long long m, const T& P, const T& Q, const T& R, const T& S) {
    return P * P + int_scale(2 * (m - 1), P * R) + Q * Q +
           int_scale((m - 1) * (m - 1), R * R) + int_scale(m - 1, S * S);
}

template <class T>
T kappa2_numerator(long long m, const T& P, const T& Q, const T& R, const T& S) {
    const T P2 = P * P, Q2 = Q * Q, R2 = R * R, S2 = S * S;
    return int_scale(4 * (m - 1), P2 * R2) + int_scale(2, P2 * S2) +
           int_scale(4 * (m - 1) * (m - 2), P * R * R2) +
           int_scale(4 * (m - 2), P * R * S2) + int_scale(2 * (m - 1), Q2 * R2) +
           int_scale(4, Q2 * S2) + int_scale((m - 1) * (m - 2) * (m - 2), R2 * R2) +
           int_scale(2 * (m - 2) * (m - 2), R2 * S2) + int_scale(2 * (m - 2), S2 * S2);
}

template <class T>
T kappa3_numerator(long long m, const T& P, const T& Q, const T& R, const T& S) {
    const T P2 = P * P, Q2 = Q * Q, R2 = R * R, S2 = S * S;
    const T R4 = R2 * R2, S4 = S2 * S2;
    return int_scale(9 * (m - 1) * (m - 2), P2 * R4) +
           int_scale(12 * (m - 2), P2 * R2 * S2) + int_scale(6, P2 * S4) +
           int_scale(6 * (m - 3) * (m - 1) * (m - 2), P * R * R4) +
           int_scale(12 * (m - 3) * (m - 2), P * R * R2 * S2) +
           int_scale(12 * (m - 3), P * R * S4) +
           int_scale(3 * (m - 1) * (m - 2), Q2 * R4) +
           int_scale(12 * (m - 2), Q2 * R2 * S2) + int_scale(18, Q2 * S4) +
           int_scale((m - 1) * (m - 2) * (m - 3) * (m - 3), R4 * R2) +
           int_scale(3 * (m - 2) * (m - 3) * (m - 3), R4 * S2) +
           int_scale(6 * (m - 3) * (m - 3), R2 * S4) + int_scale(6 * (m - 3), S4 * S2);
}

inline long long denominator_scale(int k, long long m) {
    switch (k) {
        case 1: return m * m;
        case 2: return m * m * (m - 1);
        case 3: return m * m * (m - 1) * (m - 2);
        default: throw std::domain_error("closed form available for k <= 3 only");
    }
}

} // namespace closed_form

/// Closed pair-correlation polynomial for codimension k in {1,2,3} in any
/// dimension m >= k.
inline double kappa_low_codim_closed(double r, int k, int m) {
    detail::check_pair_args(r, k, m);
    if (k > 3) throw std::domain_error("closed form available for k <= 3 only");
    const PairKernel pk = pair_kernel(r);
    double num = 0;
    switch (k) {
        case 1: num = closed_form::kappa1_numerator<double>(m, pk.P, pk.Q, pk.R, pk.S); break;
        case 2: num = closed_form::kappa2_numerator<double>(m, pk.P, pk.Q, pk.R, pk.S); break;
        case 3: num = closed_form::kappa3_numerator<double>(m, pk.P, pk.Q, pk.R, pk.S); break;
    }
    return num / (double(closed_form::denominator_scale(k, m)) *
                  std::pow(pk.det_a, k));
}

// --- point form (k = m) ----------------------------------------------------

/// f_m(x, y) = y^{m-1} + 2 x y^{m-2} + ... + m x^{m-1}, polynomial form.
/// All terms share a sign for x, y >= 0, so this is the stable evaluation
/// near x = y.
template <class T>
T f_m_poly(int m, const T& x, const T& y) {
    if (m < 1) throw std::domain_error("f_m needs m >= 1");
    std::vector<T> ypow{ring_one(y)};
    for (int j = 1; j < m; ++j) ypow.push_back(ypow.back() * y);
    T acc = int_scale(0, x);
    T xp = ring_one(x);
    for (int i = 1; i <= m; ++i) {
        acc = acc + int_scale(i, xp * ypow[static_cast<size_t>(m - i)]);
        if (i < m) xp = xp * x;
    }
    return acc;
}

/// g_l(x, y) = x^l + x^{l-1} y + ... + y^l.
template <class T>
T g_l_poly(int l, const T& x, const T& y) {
    if (l < 0) throw std::domain_error("g_l needs l >= 0");
    std::vector<T> ypow{ring_one(y)};
    for (int j = 1; j <= l; ++j) ypow.push_back(ypow.back() * y);
    T acc = int_scale(0, x);
    T xp = ring_one(x);
    for (int i = 0; i <= l; ++i) {
        acc = acc + xp * ypow[static_cast<size_t>(l - i)];
        if (i < l) xp = xp * x;
    }
    return acc;
}

inline double f_m_rational(int m, double x, double y) {
    const double d = x - y;
    return (m * std::pow(x, m + 1) + std::pow(y, m + 1) -
            (m + 1) * std::pow(x, m) * y) /
           (d * d);
}

inline double f_m_eval(int m, double x, double y) {
    // rational form loses digits as x -> y; the polynomial form never does
    if (std::abs(x - y) < 0.1 * std::max({1.0, std::abs(x), std::abs(y)}))
        return f_m_poly<double>(m, x, y);
    return f_m_rational(m, x, y);
}

inline double g_l_eval(int l, double x, double y) {
    if (std::abs(x - y) < 0.1 * std::max({1.0, std::abs(x), std::abs(y)}))
        return g_l_poly<double>(l, x, y);
    return (std::pow(x, l + 1) - std::pow(y, l + 1)) / (x - y);
}

/// Point correlation (k = m) via the f_m combination of the pair scalars.
/// Numerically benign at small r because f_m keeps one sign.
inline double kappa_point_fm(double r, int m) {
    detail::check_pair_args(r, m, m);
    const PairKernel pk = pair_kernel(r);
    const double num = pk.P * pk.P * f_m_poly<double>(m, pk.R * pk.R, pk.S * pk.S) +
                       pk.Q * pk.Q * f_m_poly<double>(m, pk.S * pk.S, pk.R * pk.R);
    return num / (m * std::pow(pk.det_a, m));
}

/// Point correlation (k = m) in the explicit v = e^{-r^2} form.  The
/// expression cancels through O(u^{m+2}) as r -> 0 (16 digits gone at m = 6,
/// r = 0.05), so it is evaluated in 128-bit floats to keep its 1e-12
/// agreement with the f_m route everywhere.
inline double kappa_point_closed(double r, int m) {
    detail::check_pair_args(r, m, m);
#ifdef ZCORR_HAVE_FLOAT128
    using F = __float128;
    const F u = F(r) * F(r);
    const F v = expq(-u);
    const F w = -expm1q(-u); // 1 - v
    F geo = 0, vp = 1;       // sum_{i=0}^{m-2} v^i
    for (int i = 0; i <= m - 2; ++i) {
        geo += vp;
        vp *= v;
    }
    F vm = 1; // v^m
    for (int i = 0; i < m; ++i) vm *= v;
    const F vm1 = vm * v;
    const F term1 = F(m) * (-expm1q(-(F(m) + 1) * u)) * w;
    const F term2 = u * F(2 * m + 2) * (v * expm1q(-F(m) * u));
    const F term3 = u * u * (vm1 + vm + ((F(m) + 1) * v + 1) * v * geo);
    F den = F(m);
    for (int i = 0; i < m + 2; ++i) den *= w;
    return static_cast<double>((term1 + term2 + term3) / den);
#else
    using F = long double;
    const F u = F(r) * r;
    const F v = expl(-u);
    const F w = -expm1l(-u);
    F geo = 0, vp = 1;
    for (int i = 0; i <= m - 2; ++i) {
        geo += vp;
        vp *= v;
    }
    F vm = 1;
    for (int i = 0; i < m; ++i) vm *= v;
    const F vm1 = vm * v;
    const F term1 = F(m) * (-expm1l(-(F(m) + 1) * u)) * w;
    const F term2 = u * F(2 * m + 2) * (v * expm1l(-F(m) * u));
    const F term3 = u * u * (vm1 + vm + ((F(m) + 1) * v + 1) * v * geo);
    F den = F(m);
    for (int i = 0; i < m + 2; ++i) den *= w;
    return static_cast<double>((term1 + term2 + term3) / den);
#endif
}

// --- permanent-style enumeration (k = m) -----------------------------------

/// One nonvanishing contraction pattern in the Gaussian moment expansion of
/// the point correlation: three permutations against the identity, and the
/// product of per-coordinate factors they select.
struct WickTerm {
    const std::vector<int>& beta;
    const std::vector<int>& mu;
    const std::vector<int>& nu;
    double value;
};

inline constexpr int kWickMaxM = 5;

namespace detail {

inline void all_permutations(int m, std::vector<std::vector<int>>& perms,
                             std::vector<int>& signs) {
    std::vector<int> p(static_cast<size_t>(m));
    for (int i = 0; i < m; ++i) p[static_cast<size_t>(i)] = i;
    do {
        int inv = 0;
        for (int i = 0; i < m; ++i)
            for (int j = i + 1; j < m; ++j)
                if (p[static_cast<size_t>(i)] > p[static_cast<size_t>(j)]) ++inv;
        perms.push_back(p);
        signs.push_back((inv & 1) ? -1 : 1);
    } while (std::next_permutation(p.begin(), p.end()));
}

} // namespace detail

/// Brute-force moment sum for the k = m pair correlation: enumerates the
/// permutation triple (beta, mu, nu) against a fixed identity alpha, which
/// the exchange symmetry of the Gaussian moments justifies at the cost of
/// one factor m!.  Every surviving term carries total sign +1; that is
/// asserted, not assumed.
template <class Observer>
double G_wick_enumerate(const PairKernel& pk, int m, Observer&& observe) {
    if (m < 1) throw std::domain_error("need m >= 1");
    if (m > kWickMaxM)
        throw CapacityError("permutation enumeration capped at m = " +
                            std::to_string(kWickMaxM));
    std::vector<std::vector<int>> perms;
    std::vector<int> signs;
    detail::all_permutations(m, perms, signs);
    const double X1 = pk.P * pk.P, Y1 = pk.Q * pk.Q;
    const double X = pk.R * pk.R, Y = pk.S * pk.S;

    double sum = 0;
    for (size_t b = 0; b < perms.size(); ++b)
        for (size_t s = 0; s < perms.size(); ++s)
            for (size_t t = 0; t < perms.size(); ++t) {
                const auto& beta = perms[b];
                const auto& mu = perms[s];
                const auto& nu = perms[t];
                double prod = 1;
                for (int q = 0; q < m && prod != 0; ++q) {
                    const double xq = (q == 0) ? X1 : X;
                    const double yq = (q == 0) ? Y1 : Y;
                    double f = 0;
                    if (mu[static_cast<size_t>(q)] == q &&
                        nu[static_cast<size_t>(q)] == beta[static_cast<size_t>(q)])
                        f += xq;
                    if (nu[static_cast<size_t>(q)] == q &&
                        mu[static_cast<size_t>(q)] == beta[static_cast<size_t>(q)])
                        f += yq;
                    prod *= f;
                }
                if (prod == 0) continue;
                if (signs[b] * signs[s] * signs[t] != 1)
                    throw ConsistencyError(
                        "negative-sign term survived the Wick enumeration");
                observe(WickTerm{beta, mu, nu, prod});
                sum += prod;
            }
    return detail::fact(m) * sum;
}

inline double G_wick_enumerate(const PairKernel& pk, int m) {
    return G_wick_enumerate(pk, m, [](const WickTerm&) {});
}

/// Point correlation recovered from the enumeration; the independent check
/// against both closed k = m forms.
inline double kappa_point_wick(double r, int m) {
    detail::check_pair_args(r, m, m);
    const PairKernel pk = pair_kernel(r);
    const double g = G_wick_enumerate(pk, m);
    const double mf = detail::fact(m);
    return g / (mf * mf * std::pow(pk.det_a, m));
}

} // namespace zcorr
