#pragma once

#include "zcorr/correlators.hpp"
#include "zcorr/kernel.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdlib>
#include <random>
#include <string>
#include <thread>
#include <vector>

namespace zcorr {

struct MCConfig {
    std::uint64_t samples = 1'000'000;
    std::uint64_t seed = 1;
    int workers = 0; // 0: ZCORR_THREADS if set, else hardware concurrency
};

struct MCEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::uint64_t samples = 0;
};

/// Worker-count resolution shared by every parallel entry point.  The
/// ZCORR_THREADS environment variable overrides whatever the caller asked
/// for; 0 means "pick for me".
inline int resolve_worker_count(int requested) {
    if (const char* env = std::getenv("ZCORR_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v > 0) return static_cast<int>(v);
    }
    if (requested > 0) return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw ? static_cast<int>(hw) : 1;
}

namespace detail {

/// splitmix64 step; decorrelates per-sample substreams from (seed, index).
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t index) {
    return mix64(mix64(seed) ^ mix64(index + 0x632be59bd9b4e019ULL));
}

} // namespace detail

/// Draws complex Gaussian vectors with second moments E[xi_i conj(xi_j)]
/// equal to the given covariance (no factor of 2; real and imaginary parts
/// each carry variance lambda_ii / 2 on the diagonal).
class GaussianSampler {
public:
    explicit GaussianSampler(const Eigen::MatrixXcd& lambda) {
        if (lambda.rows() != lambda.cols())
            throw std::invalid_argument("covariance must be square");
        Eigen::LLT<Eigen::MatrixXcd> llt(lambda);
        if (llt.info() == Eigen::Success) {
            root_ = llt.matrixL();
        } else {
            // Positive semi-definite fallback: spectral square root with
            // negative roundoff eigenvalues clamped.
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(lambda);
            if (es.info() != Eigen::Success)
                throw std::runtime_error("covariance factorization failed");
            Eigen::VectorXd ev = es.eigenvalues().cwiseMax(0.0);
            root_ = es.eigenvectors() * ev.cwiseSqrt().asDiagonal();
        }
    }

    int dim() const { return static_cast<int>(root_.rows()); }

    template <class Engine>
    Eigen::VectorXcd sample(Engine& rng) const {
        std::normal_distribution<double> n01(0.0, std::sqrt(0.5));
        Eigen::VectorXcd w(dim());
        for (int i = 0; i < dim(); ++i) {
            const double re = n01(rng);
            const double im = n01(rng);
            w(i) = std::complex<double>(re, im);
        }
        return root_ * w;
    }

private:
    Eigen::MatrixXcd root_;
};

namespace detail {

/// One sample of prod_p det(xi^p xi^p*), slicing the flattened jet vector
/// into the n blocks of k x m derivative matrices.
inline double sample_det_product(const Eigen::VectorXcd& xi, int n, int k, int m) {
    double prod = 1.0;
    Eigen::MatrixXcd block(k, m);
    for (int p = 0; p < n; ++p) {
        for (int j = 0; j < k; ++j)
            for (int q = 0; q < m; ++q)
                block(j, q) = xi((p * k + j) * m + q);
        const Eigen::MatrixXcd gram = block * block.adjoint();
        prod *= gram.determinant().real(); // Gram matrices have real dets
    }
    return prod;
}

/// Deterministic chunked reduction: samples are split into fixed-size
/// chunks, each chunk's partial sums are produced by whichever worker picks
/// it up, and the partials are combined in chunk order.  The result is
/// bit-identical for any worker count.
inline constexpr std::uint64_t kMCChunk = 4096;

template <class PerSample>
std::pair<long double, long double> chunked_mean_sq(std::uint64_t samples,
                                                    std::uint64_t seed,
                                                    int workers,
                                                    const PerSample& value_at) {
    const std::uint64_t chunks = (samples + kMCChunk - 1) / kMCChunk;
    std::vector<long double> sum(chunks, 0.0L), sumsq(chunks, 0.0L);
    std::atomic<std::uint64_t> next{0};
    auto run = [&]() {
        for (std::uint64_t c = next.fetch_add(1); c < chunks; c = next.fetch_add(1)) {
            const std::uint64_t lo = c * kMCChunk;
            const std::uint64_t hi = std::min(samples, lo + kMCChunk);
            long double s = 0.0L, s2 = 0.0L;
            for (std::uint64_t i = lo; i < hi; ++i) {
                std::mt19937_64 rng(substream_seed(seed, i));
                const double v = value_at(rng);
                s += v;
                s2 += static_cast<long double>(v) * v;
            }
            sum[c] = s;
            sumsq[c] = s2;
        }
    };
    const int nw = std::max(1, std::min<int>(workers, static_cast<int>(chunks)));
    if (nw == 1) {
        run();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<size_t>(nw));
        for (int t = 0; t < nw; ++t) pool.emplace_back(run);
        for (auto& th : pool) th.join();
    }
    long double total = 0.0L, total_sq = 0.0L;
    for (std::uint64_t c = 0; c < chunks; ++c) {
        total += sum[c];
        total_sq += sumsq[c];
    }
    return {total, total_sq};
}

} // namespace detail

/// Monte-Carlo mean of prod_p det(xi^p xi^p*) under the given jet
/// covariance.  This is the Gaussian integral the deterministic routes
/// evaluate in closed form, so it serves as their independent oracle.
inline MCEstimate estimate_G(const Eigen::MatrixXcd& lambda, int n, int k, int m,
                             const MCConfig& cfg) {
    if (cfg.samples == 0) throw std::domain_error("need at least one sample");
    if (lambda.rows() != n * k * m)
        throw std::invalid_argument("covariance size does not match (n,k,m)");
    const GaussianSampler sampler(lambda);
    const int workers = resolve_worker_count(cfg.workers);
    auto value_at = [&](std::mt19937_64& rng) {
        return detail::sample_det_product(sampler.sample(rng), n, k, m);
    };
    auto [total, total_sq] =
        detail::chunked_mean_sq(cfg.samples, cfg.seed, workers, value_at);
    const long double nn = static_cast<long double>(cfg.samples);
    const long double mean = total / nn;
    // Sample (Bessel-corrected) variance; zero when a single draw gives no
    // scatter information.
    const long double var =
        cfg.samples < 2
            ? 0.0L
            : std::max(0.0L, (total_sq - nn * mean * mean) / (nn - 1.0L));
    MCEstimate est;
    est.mean = static_cast<double>(mean);
    est.std_error = static_cast<double>(std::sqrt(var / nn));
    est.samples = cfg.samples;
    return est;
}

/// Monte-Carlo estimate of the correlator itself: estimate_G under the
/// conditioned covariance times the same normalization as the deterministic
/// routes.
inline MCEstimate estimate_kappa_mc(const CorrelationQuery& query, const MCConfig& cfg) {
    PointConfig pts;
    if (std::holds_alternative<double>(query.geometry))
        pts = PointConfig::pair_at_distance(std::get<double>(query.geometry), query.m);
    else
        pts = std::get<PointConfig>(query.geometry);
    const CovarianceBundle cb = build_covariance(pts, query.k);
    const int n = cb.n, m = cb.m, k = cb.k;
    MCEstimate est = estimate_G(cb.lambda, n, k, m, cfg);
    const double pref = std::pow(detail::fact(m - k) / detail::fact(m), n) /
                        std::pow(cb.det_a, k);
    est.mean *= pref;
    est.std_error *= std::abs(pref);
    return est;
}

} // namespace zcorr
