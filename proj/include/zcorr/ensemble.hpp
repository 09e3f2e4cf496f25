#pragma once

#include "zcorr/errors.hpp"
#include "zcorr/montecarlo.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <random>
#include <thread>
#include <vector>

namespace zcorr {

/// Empirical pair statistics of roots of degree-N binomial-weight random
/// polynomials (the SU(2) ensemble), measured in rescaled Fubini-Study
/// geodesic distance around the north pole.
struct EnsembleConfig {
    int degree = 200;
    int trials = 2000;
    std::uint64_t seed = 1;
    int workers = 0;
    double rho_max = 5.0;       // scaled radius of the counting disk
    double residual_tol = 1e-8; // relative backward error accepted per root
    double max_discard_fraction = 0.01;
    std::vector<double> bin_edges = default_bin_edges();

    static std::vector<double> default_bin_edges() {
        std::vector<double> e;
        for (int i = 0; i <= 7; ++i) e.push_back(0.25 + 0.5 * i);
        return e;
    }
};

struct EnsembleBin {
    double r_lo = 0.0;
    double r_hi = 0.0;
    double bin_center = 0.0;
    double kappa_hat = 0.0;
    double std_error = 0.0;
    std::uint64_t pairs_counted = 0;
};

struct EnsembleResult {
    std::vector<EnsembleBin> bins;
    std::uint64_t roots_total = 0;
    std::uint64_t roots_discarded = 0;
    int trials = 0;
    int degree = 0;
};

struct RootSet {
    std::vector<std::complex<double>> roots;
    int discarded = 0;
};

namespace detail {

/// Diagonal power-of-two similarity scaling (Parlett-Reinsch).  The raw
/// companion matrix of a binomial-weight polynomial has entries spanning
/// ~60 orders of magnitude; without this the eigensolve loses every digit.
inline void balance_in_place(Eigen::MatrixXcd& a) {
    const int n = static_cast<int>(a.rows());
    bool converged = false;
    while (!converged) {
        converged = true;
        for (int i = 0; i < n; ++i) {
            double c = 0.0, r = 0.0;
            for (int j = 0; j < n; ++j)
                if (j != i) {
                    c += std::abs(a(j, i));
                    r += std::abs(a(i, j));
                }
            if (c == 0.0 || r == 0.0) continue;
            const double s = c + r;
            double f = 1.0;
            while (c < r / 2.0) {
                c *= 2.0;
                r /= 2.0;
                f *= 2.0;
            }
            while (c >= r * 2.0) {
                c /= 2.0;
                r *= 2.0;
                f /= 2.0;
            }
            if (c + r < 0.95 * s) {
                converged = false;
                a.col(i) *= f;
                a.row(i) /= f;
            }
        }
    }
}

/// |p(z)| relative to sum_j |a_j||z|^j.  Thanks to the reversed-coefficient
/// evaluation for |z| > 1 neither numerator nor denominator overflows, so
/// far-out roots are judged as fairly as central ones.
inline double root_residual(const std::vector<std::complex<double>>& a,
                            std::complex<double> z) {
    const int n = static_cast<int>(a.size()) - 1;
    std::complex<double> p = 0.0;
    double scale = 0.0;
    if (std::abs(z) <= 1.0) {
        for (int j = n; j >= 0; --j) p = p * z + a[static_cast<size_t>(j)];
        const double az = std::abs(z);
        double zp = 1.0;
        for (int j = 0; j <= n; ++j) {
            scale += std::abs(a[static_cast<size_t>(j)]) * zp;
            zp *= az;
        }
    } else {
        const std::complex<double> w = 1.0 / z;
        for (int j = 0; j <= n; ++j) p = p * w + a[static_cast<size_t>(j)];
        const double aw = std::abs(w);
        double wp = 1.0;
        for (int j = n; j >= 0; --j) {
            scale += std::abs(a[static_cast<size_t>(j)]) * wp;
            wp *= aw;
        }
    }
    if (!(scale > 0.0)) return std::numeric_limits<double>::infinity();
    return std::abs(p) / scale;
}

/// Stereographic image of a root on the unit sphere; the north pole is the
/// base point z = 0.
inline Eigen::Vector3d sphere_point(std::complex<double> z) {
    const double d = 1.0 + std::norm(z);
    return Eigen::Vector3d(2.0 * z.real() / d, 2.0 * z.imag() / d,
                           (2.0 - d) / d);
}

/// Fubini-Study geodesic distance (diameter pi/2): half the angle between
/// the sphere images.  atan2 keeps small separations at full precision.
inline double fs_distance(const Eigen::Vector3d& v, const Eigen::Vector3d& w) {
    return 0.5 * std::atan2(v.cross(w).norm(), v.dot(w));
}

/// Spherical cap of FS-geodesic radius rho has area pi sin^2(rho); after
/// sqrt(N) rescaling both lengths and areas, this is the disk area entering
/// the estimator normalization.
inline double scaled_cap_area(double scaled_rho, int degree) {
    return degree * M_PI * std::pow(std::sin(scaled_rho / std::sqrt(double(degree))), 2);
}

} // namespace detail

/// Binomial-weight Gaussian coefficients a_j = C_j sqrt(binom(N, j)) with
/// C_j standard complex Gaussian.
template <class Engine>
std::vector<std::complex<double>> su2_coefficients(int degree, Engine& rng) {
    if (degree < 1) throw std::domain_error("degree must be >= 1");
    std::normal_distribution<double> n01(0.0, std::sqrt(0.5));
    std::vector<std::complex<double>> a(static_cast<size_t>(degree) + 1);
    double log_binom = 0.0;
    for (int j = 0; j <= degree; ++j) {
        if (j > 0)
            log_binom += std::log(double(degree - j + 1)) - std::log(double(j));
        const double w = std::exp(0.5 * log_binom);
        a[static_cast<size_t>(j)] = w * std::complex<double>(n01(rng), n01(rng));
    }
    return a;
}

/// All roots of sum_j a_j z^j via the balanced companion matrix, keeping
/// only eigenvalues whose relative backward error clears `residual_tol`.
inline RootSet polynomial_roots(const std::vector<std::complex<double>>& a,
                                double residual_tol = 1e-8) {
    const int n = static_cast<int>(a.size()) - 1;
    if (n < 1) throw std::domain_error("need a polynomial of degree >= 1");
    Eigen::MatrixXcd c = Eigen::MatrixXcd::Zero(n, n);
    for (int i = 1; i < n; ++i) c(i, i - 1) = 1.0;
    for (int i = 0; i < n; ++i)
        c(i, n - 1) = -a[static_cast<size_t>(i)] / a[static_cast<size_t>(n)];
    detail::balance_in_place(c);
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(c, false);
    RootSet out;
    if (es.info() != Eigen::Success) {
        out.discarded = n;
        return out;
    }
    out.roots.reserve(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
        const std::complex<double> z = es.eigenvalues()(i);
        if (detail::root_residual(a, z) <= residual_tol)
            out.roots.push_back(z);
        else
            ++out.discarded;
    }
    return out;
}

/// Pair-correlation estimate around the base point from seeded ensemble
/// runs.  Distances are exact scaled FS geodesics; a pair contributes when
/// its geodesic midpoint lies in the disk of scaled radius rho_max.  With
/// areas measured as true spherical caps the Poisson normalization
///   E[pairs in bin] = (1/2) lambda^2 A_disk A_annulus,   lambda = 1/pi,
/// is exact on the sphere at every N, so the estimator has no geometric
/// bias; what remains is the finite-N distance of the root process from its
/// scaling limit, which is precisely what the estimate measures.
inline EnsembleResult ensemble_su2(const EnsembleConfig& cfg) {
    if (cfg.degree < 20)
        throw std::domain_error("ensemble needs degree >= 20; the scaled "
                                "disk does not fit on a smaller sphere");
    if (cfg.trials < 2) throw std::domain_error("need at least two trials");
    if (!(cfg.rho_max > 0)) throw std::domain_error("rho_max must be > 0");
    if (cfg.bin_edges.size() < 2)
        throw std::domain_error("need at least one bin");
    if (std::adjacent_find(cfg.bin_edges.begin(), cfg.bin_edges.end(),
                           [](double a, double b) { return !(a < b); }) !=
            cfg.bin_edges.end() ||
        !(cfg.bin_edges.front() > 0))
        throw std::domain_error("bin edges must be positive and strictly increasing");
    if (cfg.bin_edges.front() < 0.1 || cfg.bin_edges.back() > 4.0)
        throw std::domain_error("bin edges must lie within [0.1, 4]");

    const int nbins = static_cast<int>(cfg.bin_edges.size()) - 1;
    const double sqrt_n = std::sqrt(double(cfg.degree));
    const double r_max = cfg.bin_edges.back();
    // A pair with midpoint inside the disk has both ends within this radius.
    const double keep_radius = cfg.rho_max + 0.5 * r_max + 1e-9;

    std::vector<std::vector<std::uint32_t>> counts(
        static_cast<size_t>(cfg.trials),
        std::vector<std::uint32_t>(static_cast<size_t>(nbins), 0));
    std::vector<std::uint32_t> trial_roots(static_cast<size_t>(cfg.trials), 0);
    std::vector<std::uint32_t> trial_discards(static_cast<size_t>(cfg.trials), 0);

    std::atomic<int> next{0};
    auto run = [&]() {
        const Eigen::Vector3d pole(0.0, 0.0, 1.0);
        for (int t = next.fetch_add(1); t < cfg.trials; t = next.fetch_add(1)) {
            std::mt19937_64 rng(
                detail::substream_seed(cfg.seed, static_cast<std::uint64_t>(t)));
            const auto coeffs = su2_coefficients(cfg.degree, rng);
            const RootSet rs = polynomial_roots(coeffs, cfg.residual_tol);
            trial_roots[static_cast<size_t>(t)] =
                static_cast<std::uint32_t>(rs.roots.size()) +
                static_cast<std::uint32_t>(rs.discarded);
            trial_discards[static_cast<size_t>(t)] =
                static_cast<std::uint32_t>(rs.discarded);

            std::vector<Eigen::Vector3d> near;
            for (const auto& z : rs.roots) {
                const Eigen::Vector3d v = detail::sphere_point(z);
                if (sqrt_n * detail::fs_distance(v, pole) <= keep_radius)
                    near.push_back(v);
            }
            auto& bins = counts[static_cast<size_t>(t)];
            for (size_t i = 0; i < near.size(); ++i)
                for (size_t j = i + 1; j < near.size(); ++j) {
                    const double r = sqrt_n * detail::fs_distance(near[i], near[j]);
                    if (r < cfg.bin_edges.front() || r >= r_max) continue;
                    Eigen::Vector3d mid = near[i] + near[j];
                    const double norm = mid.norm();
                    if (norm == 0.0) continue; // antipodal: no midpoint
                    mid /= norm;
                    if (sqrt_n * detail::fs_distance(mid, pole) > cfg.rho_max)
                        continue;
                    const auto it = std::upper_bound(cfg.bin_edges.begin(),
                                                     cfg.bin_edges.end(), r);
                    const int b = static_cast<int>(it - cfg.bin_edges.begin()) - 1;
                    if (b >= 0 && b < nbins) ++bins[static_cast<size_t>(b)];
                }
        }
    };

    const int nw = std::max(1, std::min(resolve_worker_count(cfg.workers), cfg.trials));
    if (nw == 1) {
        run();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<size_t>(nw));
        for (int t = 0; t < nw; ++t) pool.emplace_back(run);
        for (auto& th : pool) th.join();
    }

    EnsembleResult res;
    res.trials = cfg.trials;
    res.degree = cfg.degree;
    for (int t = 0; t < cfg.trials; ++t) {
        res.roots_total += trial_roots[static_cast<size_t>(t)];
        res.roots_discarded += trial_discards[static_cast<size_t>(t)];
    }
    if (res.roots_discarded >
        cfg.max_discard_fraction * static_cast<double>(res.roots_total))
        throw ConsistencyError("root finder discarded more than the allowed "
                               "fraction; ensemble run rejected");

    const double disk_area = detail::scaled_cap_area(cfg.rho_max, cfg.degree);
    const double lambda = 1.0 / M_PI; // exact mean intensity in scaled units
    for (int b = 0; b < nbins; ++b) {
        EnsembleBin bin;
        bin.r_lo = cfg.bin_edges[static_cast<size_t>(b)];
        bin.r_hi = cfg.bin_edges[static_cast<size_t>(b) + 1];
        bin.bin_center = 0.5 * (bin.r_lo + bin.r_hi);
        const double ann_area = detail::scaled_cap_area(bin.r_hi, cfg.degree) -
                                detail::scaled_cap_area(bin.r_lo, cfg.degree);
        const double denom = 0.5 * lambda * lambda * disk_area * ann_area;
        long double sum = 0.0L, sumsq = 0.0L;
        for (int t = 0; t < cfg.trials; ++t) {
            const double c = counts[static_cast<size_t>(t)][static_cast<size_t>(b)];
            bin.pairs_counted += counts[static_cast<size_t>(t)][static_cast<size_t>(b)];
            sum += c;
            sumsq += static_cast<long double>(c) * c;
        }
        const long double tt = cfg.trials;
        const long double mean = sum / tt;
        const long double var =
            std::max(0.0L, (sumsq - tt * mean * mean) / (tt - 1.0L));
        bin.kappa_hat = static_cast<double>(mean) / denom;
        bin.std_error =
            static_cast<double>(std::sqrt(var / tt)) / denom;
        res.bins.push_back(bin);
    }
    return res;
}

} // namespace zcorr
