#pragma once

#include "zcorr/errors.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>
#include <vector>

#if defined(__GNUC__) && defined(__SIZEOF_FLOAT128__)
#include <quadmath.h>
#define ZCORR_HAVE_FLOAT128 1
#endif

namespace zcorr {

namespace detail {

// exp / expm1 resolved per precision, so kernel formulas can be instantiated
// wider than double where route tolerances demand it.
inline double exp_r(double x) { return std::exp(x); }
inline double expm1_r(double x) { return std::expm1(x); }
inline long double exp_r(long double x) { return std::exp(x); }
inline long double expm1_r(long double x) { return std::expm1(x); }
#ifdef ZCORR_HAVE_FLOAT128
inline __float128 exp_r(__float128 x) { return expq(x); }
inline __float128 expm1_r(__float128 x) { return expm1q(x); }
#endif

} // namespace detail

/// Widest convenient real type for internal evaluation of cancellation-prone
/// closed forms; results are returned as double.
#ifdef ZCORR_HAVE_FLOAT128
using HighReal = __float128;
#else
using HighReal = long double;
#endif

/// n marked points in C^m on the hyperplane-bundle slice theta = 0.
struct PointConfig {
    int m = 1;
    std::vector<Eigen::VectorXcd> points;

    int n() const { return static_cast<int>(points.size()); }

    void validate() const {
        if (m < 1) throw std::domain_error("dimension m must be >= 1");
        if (points.empty()) throw std::domain_error("need at least one point");
        for (const auto& z : points)
            if (static_cast<int>(z.size()) != m)
                throw std::domain_error("point has wrong dimension");
    }

    /// The standard two-point layout: (r, 0, ..., 0) and the origin.
    static PointConfig pair_at_distance(double r, int m) {
        if (!(r > 0)) throw std::domain_error("separation r must be > 0");
        PointConfig cfg;
        cfg.m = m;
        Eigen::VectorXcd z1 = Eigen::VectorXcd::Zero(m);
        z1(0) = r;
        cfg.points.push_back(z1);
        cfg.points.push_back(Eigen::VectorXcd::Zero(m));
        cfg.validate();
        return cfg;
    }
};

/// Reproducing kernel of the reduced Heisenberg group at height one,
/// restricted to the theta = 0 slice:
///   pi^-m exp(z.conj(w) - (|z|^2 + |w|^2)/2).
inline std::complex<double> szego_heisenberg(const Eigen::VectorXcd& z,
                                             const Eigen::VectorXcd& w, int m) {
    if (static_cast<int>(z.size()) != m || static_cast<int>(w.size()) != m)
        throw std::domain_error("kernel arguments have wrong dimension");
    std::complex<double> e = z.dot(w); // Eigen's dot conjugates the first arg
    e = std::conj(e);                  // we want z . conj(w)
    e -= 0.5 * (z.squaredNorm() + w.squaredNorm());
    return std::exp(e) * std::pow(M_PI, -m);
}

/// Joint covariance data of the field and its derivatives at the marked
/// points, after the scaling limit.  Stored with the kernel's pi^-m and the
/// m!-normalization divided out, so A has unit diagonal.
///
/// Index flattening: field block (p,q) -> p*m + q, derivative direction q;
/// inflated block (p,j,q) -> (p*k + j)*m + q, all zero-based.
template <class Real = double>
struct CovarianceBundleT {
    using Mat = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;

    int n = 0;
    int m = 0;
    int k = 0;
    Mat A;              // n x n          field-field
    Mat B;              // n x nm         field-derivative
    Mat C;              // nm x nm        derivative-derivative
    Mat lambda_inf;     // nm x nm        C - B* A^-1 B
    Mat lambda;         // nkm x nkm      lambda_inf inflated over j
    Real det_a = 0;     // det A, real part (A is Hermitian PD)
    Real cond_a = 0;    // condition estimate used by the guard
};

using CovarianceBundle = CovarianceBundleT<double>;

/// Scale-free pair data for the standard two-point configuration at
/// separation r.  These are the only numbers the two-point correlators need.
template <class Real = double>
struct PairKernelT {
    Real r = 0;
    Real P = 0;
    Real Q = 0;
    Real R = 1;
    Real S = 0;
    Real T = 0;     // det of the [[P,Q],[Q,P]] block, equals P^2 - Q^2
    Real det_a = 0; // 1 - e^{-r^2}
};

using PairKernel = PairKernelT<double>;

template <class Real = double>
PairKernelT<Real> pair_kernel_t(double r) {
    if (!(r > 0)) throw std::domain_error("separation r must be > 0");
    PairKernelT<Real> pk;
    pk.r = Real(r);
    const Real u = pk.r * pk.r;
    const Real v = detail::exp_r(-u);
    const Real w = -detail::expm1_r(-u); // 1 - e^{-u} without cancellation
    pk.det_a = w;
    pk.P = Real(1) - u * v / w;
    pk.Q = detail::exp_r(-u / 2) * (w - u) / w;
    pk.R = Real(1);
    pk.S = detail::exp_r(-u / 2);
    pk.T = w - u * u * v / w;
    return pk;
}

inline PairKernel pair_kernel(double r) { return pair_kernel_t<double>(r); }

namespace detail {

/// exp(z.conj(w) - (|z|^2+|w|^2)/2): the kernel with pi^-m stripped.
template <class Real>
std::complex<Real> kernel_unit(const Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, 1>& z,
                               const Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, 1>& w) {
    std::complex<Real> e = std::conj(std::complex<Real>(z.dot(w)));
    e -= Real(0.5) * (z.squaredNorm() + w.squaredNorm());
    return std::exp(e);
}

} // namespace detail

/// Covariance of the scaled section ensemble and codimension-k jet at the
/// marked points.  The Schur complement lambda_inf = C - B* A^-1 B is the
/// derivative covariance conditioned on vanishing field values; lambda
/// copies it across the k jet slots.
///
/// The A-inversion is guarded: if A is numerically singular or its
/// condition number exceeds `cond_limit`, the configuration is rejected
/// (nearly coincident points make the conditioning meaningless).
template <class Real = double>
CovarianceBundleT<Real> build_covariance_t(const PointConfig& cfg, int k,
                                           double cond_limit = 1e12) {
    cfg.validate();
    const int n = cfg.n();
    const int m = cfg.m;
    if (k < 1 || k > m) throw std::domain_error("codimension k must satisfy 1 <= k <= m");

    using Cx = std::complex<Real>;
    using Vec = Eigen::Matrix<Cx, Eigen::Dynamic, 1>;

    std::vector<Vec> pts;
    pts.reserve(static_cast<size_t>(n));
    for (const auto& z : cfg.points) pts.push_back(z.template cast<Cx>());

    CovarianceBundleT<Real> cb;
    cb.n = n;
    cb.m = m;
    cb.k = k;
    cb.A.resize(n, n);
    cb.B.resize(n, n * m);
    cb.C.resize(n * m, n * m);

    for (int p = 0; p < n; ++p)
        for (int pp = 0; pp < n; ++pp) {
            const Vec& zp = pts[static_cast<size_t>(p)];
            const Vec& zpp = pts[static_cast<size_t>(pp)];
            const Cx base = detail::kernel_unit<Real>(zp, zpp);
            cb.A(p, pp) = base;
            for (int q = 0; q < m; ++q)
                cb.B(p, pp * m + q) = (zp(q) - zpp(q)) * base;
            for (int q = 0; q < m; ++q)
                for (int qq = 0; qq < m; ++qq) {
                    Cx c = (q == qq) ? Cx(1) : Cx(0);
                    c += std::conj(zpp(q) - zp(q)) * (zp(qq) - zpp(qq));
                    cb.C(p * m + q, pp * m + qq) = c * base;
                }
        }

    Eigen::SelfAdjointEigenSolver<typename CovarianceBundleT<Real>::Mat> es(cb.A);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("eigen decomposition of A failed");
    const Real lo = es.eigenvalues().minCoeff();
    const Real hi = es.eigenvalues().maxCoeff();
    cb.cond_a = (lo > 0) ? hi / lo : std::numeric_limits<Real>::infinity();
    if (!(lo > 0) || !(cb.cond_a <= Real(cond_limit)))
        throw IllConditionedError("field covariance is ill conditioned "
                                  "(nearly coincident points?)",
                                  static_cast<double>(cb.cond_a));

    cb.det_a = cb.A.determinant().real();

    typename CovarianceBundleT<Real>::Mat ainv_b = cb.A.llt().solve(cb.B);
    cb.lambda_inf = cb.C - cb.B.adjoint() * ainv_b;

    cb.lambda.setZero(n * k * m, n * k * m);
    for (int p = 0; p < n; ++p)
        for (int pp = 0; pp < n; ++pp)
            for (int j = 0; j < k; ++j)
                for (int q = 0; q < m; ++q)
                    for (int qq = 0; qq < m; ++qq)
                        cb.lambda((p * k + j) * m + q, (pp * k + j) * m + qq) =
                            cb.lambda_inf(p * m + q, pp * m + qq);
    return cb;
}

inline CovarianceBundle build_covariance(const PointConfig& cfg, int k,
                                         double cond_limit = 1e12) {
    return build_covariance_t<double>(cfg, k, cond_limit);
}

} // namespace zcorr
