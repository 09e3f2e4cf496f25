#pragma once

#include "zcorr/correlators.hpp"
#include "zcorr/ensemble.hpp"
#include "zcorr/montecarlo.hpp"
#include "zcorr/series.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace zcorr::validate {

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

// ---------------------------------------------------------------------------
// Frozen reference data.  These are transcriptions of independently published
// series values; the library must reproduce every entry as an exact rational.
// Tables are returned by value so tests can perturb a copy and watch the
// checks catch it.
// ---------------------------------------------------------------------------

struct SeriesCoefficient {
    int power = 0; // power of u = r^2
    Rational value;
};

struct PointSeriesTable {
    int m = 0;
    std::vector<SeriesCoefficient> coeffs;
};

/// kappa_mm expansions for m = 1..6, coefficients of u^p.
inline std::vector<PointSeriesTable> printed_point_series() {
    auto r = [](long long n, long long d) { return Rational(n) / d; };
    return {
        {1, {{1, r(1, 2)}, {3, r(-1, 36)}, {5, r(1, 720)},
             {7, r(-1, 16800)}, {9, r(1, 435456)}, {11, r(-691, 8382528000)}}},
        {2, {{0, r(3, 4)}, {2, r(1, 24)}, {4, r(-1, 288)},
             {6, r(1, 4800)}, {8, r(-1, 96768)}, {10, r(691, 1524096000)}}},
        {3, {{-1, r(1, 1)}, {1, r(1, 4)}, {3, r(-11, 2160)},
             {5, r(-1, 50400)}, {7, r(1, 80640)}, {9, r(-4871, 5029516800)}}},
        {4, {{-2, r(5, 4)}, {0, r(95, 144)}, {2, r(19, 576)},
             {4, r(-79, 40320)}, {6, r(7, 82944)}, {8, r(-6049, 2235340800)}}},
        {5, {{-3, r(3, 2)}, {-1, r(4, 3)}, {1, r(55, 288)},
             {3, r(-19, 16800)}, {5, r(-257, 1451520)}, {7, r(21337, 1397088000)}}},
        {6, {{-4, r(7, 4)}, {-2, r(7, 3)}, {0, r(5257, 8640)},
             {2, r(407, 14400)}, {4, r(-103, 82944)}, {6, r(38177, 1197504000)}}},
    };
}

/// kappa_km coefficient formulas for codimension k = 1..3, evaluated at
/// integer m.  Each entry is the printed coefficient of u^p.
inline std::vector<SeriesCoefficient> printed_codim_coeffs(int k, int m) {
    const long long mm = m;
    auto r = [](long long n, long long d) { return Rational(n) / d; };
    switch (k) {
        case 1:
            return {{-1, r(mm - 1, mm)},
                    {0, r(mm - 1, 2 * mm)},
                    {1, r((mm + 2) * (mm + 1), 12 * mm * mm)},
                    {3, r(-(mm + 4) * (mm + 3), 720 * mm * mm)},
                    {5, r((mm + 6) * (mm + 5), 30240 * mm * mm)},
                    {7, r(-(mm + 8) * (mm + 7), 1209600 * mm * mm)}};
        case 2:
            if (m < 2) throw std::domain_error("codimension 2 needs m >= 2");
            return {{-2, r(mm - 2, mm)},
                    {-1, r(mm - 2, mm)},
                    {0, r(5 * mm * mm - 7 * mm + 12, 12 * (mm - 1) * mm)},
                    {1, r((mm - 2) * (mm + 2) * (mm + 1), 12 * (mm - 1) * mm * mm)},
                    {2, r((mm + 3) * (mm + 2), 240 * (mm - 1) * mm)},
                    {3, r(-(mm - 2) * (mm + 4) * (mm + 3), 720 * (mm - 1) * mm * mm)}};
        case 3:
            if (m < 3) throw std::domain_error("codimension 3 needs m >= 3");
            return {{-3, r(mm - 3, mm)},
                    {-2, r(3 * (mm - 3), 2 * mm)},
                    {-1, r(mm * mm - 4 * mm + 6, (mm - 2) * mm)},
                    {0, r((mm - 3) * (3 * mm * mm - mm + 8),
                          8 * mm * (mm - 1) * (mm - 2))},
                    {1, r((mm + 2) * (mm + 1) * (19 * mm * mm - 79 * mm + 120),
                          240 * mm * mm * (mm - 1) * (mm - 2))},
                    {2, r((mm - 3) * (mm + 3) * (mm + 2),
                          160 * mm * (mm - 1) * (mm - 2))}};
        default:
            throw std::domain_error("printed tables cover codimensions 1..3");
    }
}

namespace detail {

inline std::string fmt(double v) {
    std::ostringstream os;
    os.precision(15);
    os << v;
    return os.str();
}

inline double rel_dev(double a, double b) {
    return std::abs(a - b) / std::max({1e-300, std::abs(a), std::abs(b)});
}

/// Area-weighted average of closed-form kappa_11 over a scaled spherical
/// annulus bin: the quantity an unbiased bin estimator converges to.
inline double bin_average_kappa11(double lo, double hi, int degree) {
    const double s = std::sqrt(double(degree));
    const int steps = 2000;
    double num = 0.0, den = 0.0;
    for (int i = 0; i < steps; ++i) {
        const double r = lo + (hi - lo) * (i + 0.5) / steps;
        const double w = std::sin(2.0 * r / s); // d(area)/dr on the FS sphere
        num += w * kappa_low_codim_closed(r, 1, 1);
        den += w;
    }
    return num / den;
}

} // namespace detail

// ---------------------------------------------------------------------------
// Named checks.  Each returns pass/fail plus a one-line account naming the
// first offending quantity, so a red result localizes itself.
// ---------------------------------------------------------------------------

/// Every frozen kappa_mm coefficient must match the exact series route.
inline CheckResult check_printed_point_series(
    const std::vector<PointSeriesTable>& tables = printed_point_series()) {
    CheckResult res{"printed point series (k = m = 1..6)", true, ""};
    for (const auto& tab : tables) {
        int max_power = 0;
        for (const auto& c : tab.coeffs) max_power = std::max(max_power, c.power);
        const RationalLaurentSeries s =
            kappa_series(tab.m, tab.m, max_power + 2);
        for (const auto& c : tab.coeffs) {
            const Rational got = s.coeff(c.power);
            if (got != c.value) {
                res.pass = false;
                res.detail = "kappa(k=" + std::to_string(tab.m) +
                             ",m=" + std::to_string(tab.m) + ") at u^" +
                             std::to_string(c.power) + ": computed " +
                             rational_to_string(got) + ", table has " +
                             rational_to_string(c.value);
                return res;
            }
        }
    }
    res.detail = "36 coefficients match exactly";
    return res;
}

/// The codimension 1..3 coefficient formulas at every admissible m <= 8.
inline CheckResult check_printed_codim_series() {
    CheckResult res{"printed codimension formulas (k = 1..3, m <= 8)", true, ""};
    int checked = 0;
    for (int k = 1; k <= 3; ++k)
        for (int m = k; m <= 8; ++m) {
            const auto rows = printed_codim_coeffs(k, m);
            int max_power = 0;
            for (const auto& c : rows) max_power = std::max(max_power, c.power);
            const RationalLaurentSeries s = kappa_low_codim_series(k, m, max_power + 2);
            for (const auto& c : rows) {
                const Rational got = s.coeff(c.power);
                if (got != c.value) {
                    res.pass = false;
                    res.detail = "kappa(k=" + std::to_string(k) +
                                 ",m=" + std::to_string(m) + ") at u^" +
                                 std::to_string(c.power) + ": computed " +
                                 rational_to_string(got) + ", formula gives " +
                                 rational_to_string(c.value);
                    return res;
                }
                ++checked;
            }
        }
    res.detail = std::to_string(checked) + " coefficients match exactly";
    return res;
}

/// All deterministic routes agree pairwise to 1e-10 over the standard grid.
inline CheckResult check_cross_route_agreement() {
    CheckResult res{"cross-route agreement (k <= m <= 4)", true, ""};
    const double tol = 1e-10;
    double worst = 0.0;
    for (int m = 1; m <= 4; ++m)
        for (int k = 1; k <= m; ++k)
            for (double r : {0.1, 0.25, 0.5, 1.0, 2.0, 4.0}) {
                std::vector<std::pair<const char*, double>> vals;
                vals.emplace_back("berezin", kappa_pair_berezin(r, k, m));
                vals.emplace_back("expansion", kappa_pair_expansion(r, k, m));
                vals.emplace_back(
                    "npoint",
                    k_npoint_berezin(PointConfig::pair_at_distance(r, m), k));
                if (k <= 3)
                    vals.emplace_back("closed", kappa_low_codim_closed(r, k, m));
                if (k == m) vals.emplace_back("point", kappa_point_closed(r, m));
                for (size_t i = 0; i < vals.size(); ++i)
                    for (size_t j = i + 1; j < vals.size(); ++j) {
                        const double dev =
                            detail::rel_dev(vals[i].second, vals[j].second);
                        worst = std::max(worst, dev);
                        if (dev > tol && res.pass) {
                            res.pass = false;
                            res.detail = std::string(vals[i].first) + " vs " +
                                         vals[j].first + " at k=" +
                                         std::to_string(k) + " m=" +
                                         std::to_string(m) + " r=" +
                                         detail::fmt(r) + ": rel dev " +
                                         detail::fmt(dev);
                        }
                    }
            }
    if (res.pass)
        res.detail = "worst pairwise relative deviation " + detail::fmt(worst);
    return res;
}

/// Permutation-sum oracle against the closed forms, including the term-sign
/// property the closed derivation relies on.
inline CheckResult check_wick_oracle() {
    CheckResult res{"Wick permutation oracle (m <= 4)", true, ""};
    const double tol = 1e-12;
    double worst = 0.0;
    for (int m = 1; m <= 4; ++m)
        for (double r : {0.5, 1.0, 2.0}) {
            const PairKernel pk = pair_kernel(r);
            std::uint64_t nonzero = 0, negative = 0;
            const double g = G_wick_enumerate(pk, m, [&](const WickTerm& t) {
                nonzero += t.value != 0.0;
                negative += t.value < 0.0;
            });
            const double fm = f_m_eval(m, pk.R * pk.R, pk.S * pk.S);
            const double fm_swap = f_m_eval(m, pk.S * pk.S, pk.R * pk.R);
            const double closed_sum =
                zcorr::detail::fact(m) * zcorr::detail::fact(m - 1) *
                (pk.P * pk.P * fm + pk.Q * pk.Q * fm_swap);
            const double dev_g = detail::rel_dev(g, closed_sum);
            const double dev_k = detail::rel_dev(kappa_point_wick(r, m),
                                                 kappa_point_closed(r, m));
            worst = std::max({worst, dev_g, dev_k});
            if ((dev_g > tol || dev_k > tol) && res.pass) {
                res.pass = false;
                res.detail = "m=" + std::to_string(m) + " r=" + detail::fmt(r) +
                             ": enumeration dev " + detail::fmt(dev_g) +
                             ", closed-form dev " + detail::fmt(dev_k);
            }
            if ((nonzero == 0 || negative != 0) && res.pass) {
                res.pass = false;
                res.detail = negative
                                 ? std::to_string(negative) +
                                       " negative Wick terms at m=" + std::to_string(m)
                                 : "no nonzero Wick terms at m=" + std::to_string(m);
            }
        }
    if (res.pass) res.detail = "worst relative deviation " + detail::fmt(worst);
    return res;
}

namespace detail {

/// A well-separated random 3-point configuration in C^2; resampling keeps
/// the covariance guard quiet.
template <class Engine>
PointConfig random_triple(Engine& rng) {
    std::uniform_real_distribution<double> u(-1.6, 1.6);
    for (;;) {
        PointConfig cfg;
        cfg.m = 2;
        for (int p = 0; p < 3; ++p) {
            Eigen::VectorXcd z(2);
            z(0) = std::complex<double>(u(rng), u(rng));
            z(1) = std::complex<double>(u(rng), u(rng));
            cfg.points.push_back(z);
        }
        double dmin = 1e9;
        for (int p = 0; p < 3; ++p)
            for (int q = p + 1; q < 3; ++q)
                dmin = std::min(dmin, (cfg.points[size_t(p)] - cfg.points[size_t(q)]).norm());
        if (dmin > 0.4) return cfg;
    }
}

/// Haar-ish random unitary from the QR factorization of a Gaussian matrix.
template <class Engine>
Eigen::MatrixXcd random_unitary(int d, Engine& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    Eigen::MatrixXcd a(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) a(i, j) = std::complex<double>(g(rng), g(rng));
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(a);
    Eigen::MatrixXcd q = qr.householderQ();
    // Fix the phase ambiguity so Q is uniquely determined.
    Eigen::MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int i = 0; i < d; ++i) {
        const std::complex<double> rd = r(i, i);
        if (rd != 0.0) q.col(i) *= rd / std::abs(rd);
    }
    return q;
}

} // namespace detail

/// One-point normalization plus the qualitative 3-point properties:
/// symmetry under relabeling, invariance under rigid motions, and
/// factorization to 1 at large mutual distance.
inline CheckResult check_normalization_properties(std::uint64_t seed = 1) {
    CheckResult res{"normalization and 3-point properties", true, ""};
    auto fail = [&](const std::string& msg) {
        if (res.pass) {
            res.pass = false;
            res.detail = msg;
        }
    };

    // n = 1 must evaluate to exactly 1 (up to roundoff) for every (k, m).
    double worst_norm = 0.0;
    for (int m = 1; m <= 4; ++m)
        for (int k = 1; k <= m; ++k) {
            PointConfig one;
            one.m = m;
            Eigen::VectorXcd z = Eigen::VectorXcd::Constant(
                m, std::complex<double>(0.3, -0.7));
            one.points.push_back(z);
            const double v = k_npoint_berezin(one, k);
            worst_norm = std::max(worst_norm, std::abs(v - 1.0));
            if (std::abs(v - 1.0) > 1e-12)
                fail("n=1 normalization off at k=" + std::to_string(k) +
                     " m=" + std::to_string(m) + ": " + detail::fmt(v));
        }

    std::mt19937_64 rng(zcorr::detail::substream_seed(seed, 0x3f0a));
    double worst_perm = 0.0, worst_rigid = 0.0, worst_far = 0.0;
    for (int trial = 0; trial < 10; ++trial) {
        const PointConfig cfg = detail::random_triple(rng);
        for (int k = 1; k <= 2; ++k) {
            const double base = k_npoint_berezin(cfg, k);

            // Relabeling the points must not change anything.
            static const int perms[5][3] = {
                {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
            for (const auto& p : perms) {
                PointConfig shuffled;
                shuffled.m = cfg.m;
                for (int i = 0; i < 3; ++i)
                    shuffled.points.push_back(cfg.points[size_t(p[i])]);
                const double v = k_npoint_berezin(shuffled, k);
                worst_perm = std::max(worst_perm, detail::rel_dev(v, base));
                if (detail::rel_dev(v, base) > 1e-12)
                    fail("permutation asymmetry at trial " +
                         std::to_string(trial) + " k=" + std::to_string(k) +
                         ": rel dev " + detail::fmt(detail::rel_dev(v, base)));
            }

            // Unitary rotation plus translation of C^2.
            const Eigen::MatrixXcd uu = detail::random_unitary(2, rng);
            Eigen::VectorXcd shift(2);
            shift(0) = std::complex<double>(0.4, -1.1);
            shift(1) = std::complex<double>(-0.9, 0.2);
            PointConfig moved;
            moved.m = cfg.m;
            for (const auto& z : cfg.points) moved.points.push_back(uu * z + shift);
            const double v = k_npoint_berezin(moved, k);
            worst_rigid = std::max(worst_rigid, detail::rel_dev(v, base));
            if (detail::rel_dev(v, base) > 1e-9)
                fail("rigid-motion variance at trial " + std::to_string(trial) +
                     " k=" + std::to_string(k) + ": rel dev " +
                     detail::fmt(detail::rel_dev(v, base)));

            // Spreading the same shape far apart factorizes the correlator.
            PointConfig spread;
            spread.m = cfg.m;
            for (const auto& z : cfg.points) spread.points.push_back(20.0 * z);
            double dmin = 1e9;
            for (int p = 0; p < 3; ++p)
                for (int q = p + 1; q < 3; ++q)
                    dmin = std::min(dmin, (spread.points[size_t(p)] -
                                           spread.points[size_t(q)]).norm());
            if (dmin >= 8.0) {
                const double far = k_npoint_berezin(spread, k);
                worst_far = std::max(worst_far, std::abs(far - 1.0));
                if (std::abs(far - 1.0) > 1e-8)
                    fail("no factorization at distance " + detail::fmt(dmin) +
                         ", value " + detail::fmt(far));
            }
        }
    }
    if (res.pass)
        res.detail = "norm " + detail::fmt(worst_norm) + ", perm " +
                     detail::fmt(worst_perm) + ", rigid " +
                     detail::fmt(worst_rigid) + ", far " + detail::fmt(worst_far);
    return res;
}

/// Short-distance laws: the r^(4-2m) blowup coefficient, the m = 2
/// constant, and the parity of the stored expansions.
inline CheckResult check_short_distance_laws() {
    CheckResult res{"short-distance laws and parity", true, ""};
    auto fail = [&](const std::string& msg) {
        if (res.pass) {
            res.pass = false;
            res.detail = msg;
        }
    };
    double worst = 0.0;
    for (int m = 1; m <= 6; ++m) {
        const double r = 0.05;
        const double lead = kappa_point_closed(r, m) * std::pow(r, 2 * m - 4);
        const double want = 0.25 * (m + 1);
        const double dev = std::abs(lead / want - 1.0);
        worst = std::max(worst, dev);
        if (dev > 0.02)
            fail("leading coefficient at m=" + std::to_string(m) + ": " +
                 detail::fmt(lead) + " vs " + detail::fmt(want));
    }
    const double v22 = kappa_point_closed(0.01, 2);
    if (std::abs(v22 - 0.75) > 1e-3)
        fail("kappa(k=m=2) near zero: " + detail::fmt(v22));
    for (int m = 1; m <= 8; ++m)
        if (!parity_check(m, 2 * m + 8)) fail("parity violated at m=" + std::to_string(m));
    if (res.pass)
        res.detail = "worst leading-coefficient deviation " + detail::fmt(worst);
    return res;
}

/// Seeded sampling oracle: the Gaussian-moment estimate must land within
/// 4 sigma of the deterministic value and be tight enough to mean something.
inline CheckResult check_mc_oracle(std::uint64_t seed = 1, int workers = 0,
                                   std::uint64_t samples = 1'000'000) {
    CheckResult res{"Monte-Carlo oracle (4 configurations)", true, ""};
    struct Case {
        int k, m;
        double r;
    };
    const Case cases[] = {{1, 1, 1.0}, {2, 2, 1.0}, {1, 3, 0.5}, {3, 3, 2.0}};
    double worst_z = 0.0, worst_rel = 0.0;
    for (const Case& c : cases) {
        CorrelationQuery q;
        q.k = c.k;
        q.m = c.m;
        q.geometry = c.r;
        MCConfig cfg;
        cfg.samples = samples;
        cfg.seed = seed;
        cfg.workers = workers;
        const MCEstimate est = estimate_kappa_mc(q, cfg);
        const double ref = (c.k == c.m) ? kappa_point_closed(c.r, c.m)
                                        : kappa_low_codim_closed(c.r, c.k, c.m);
        const double z = std::abs(est.mean - ref) / est.std_error;
        const double rel = est.std_error / std::abs(est.mean);
        worst_z = std::max(worst_z, z);
        worst_rel = std::max(worst_rel, rel);
        if ((z > 4.0 || rel > 0.01) && res.pass) {
            res.pass = false;
            res.detail = "k=" + std::to_string(c.k) + " m=" + std::to_string(c.m) +
                         " r=" + detail::fmt(c.r) + ": estimate " +
                         detail::fmt(est.mean) + " vs " + detail::fmt(ref) +
                         " (" + detail::fmt(z) + " sigma, rel sigma " +
                         detail::fmt(rel) + ")";
        }
    }
    if (res.pass)
        res.detail = "worst deviation " + detail::fmt(worst_z) +
                     " sigma, worst rel sigma " + detail::fmt(worst_rel);
    return res;
}

/// Empirical ensemble against the exact limit, bin by bin.  The estimator
/// measures the area-weighted average of the pair correlation over each
/// bin, so that is the reference; at the smallest bin the midpoint value
/// differs from the average by ~19% of itself, which is bin geometry, not
/// ensemble error.
inline CheckResult check_ensemble_bins(const EnsembleResult& res_ens,
                                       double tolerance = 0.10) {
    CheckResult res{"ensemble vs limit pair correlation (10% bins)", true, ""};
    const double targets[] = {0.5, 1.0, 1.5, 2.0};
    double worst = 0.0;
    std::string summary;
    for (double target : targets) {
        const EnsembleBin* hit = nullptr;
        for (const auto& b : res_ens.bins)
            if (std::abs(b.bin_center - target) < 1e-9) hit = &b;
        if (!hit) {
            res.pass = false;
            res.detail = "no bin centered at " + detail::fmt(target);
            return res;
        }
        const double ref =
            detail::bin_average_kappa11(hit->r_lo, hit->r_hi, res_ens.degree);
        const double dev = std::abs(hit->kappa_hat / ref - 1.0);
        worst = std::max(worst, dev);
        if (!summary.empty()) summary += ", ";
        summary += "r=" + detail::fmt(target) + ": " + detail::fmt(hit->kappa_hat) +
                   " vs " + detail::fmt(ref);
        if (dev > tolerance && res.pass) {
            res.pass = false;
            res.detail = "bin at r=" + detail::fmt(target) + " off by " +
                         detail::fmt(100 * dev) + "%: " + summary;
        }
    }
    if (res.pass)
        res.detail = "worst deviation " + detail::fmt(100 * worst) + "% (" +
                     summary + ")";
    return res;
}

/// The literal tail requirement: the bin centered at r = 3 within one
/// standard error of 1.  The exact limit value there is 1.00578, several
/// standard errors above 1 at reference statistics, so an unbiased
/// estimator is expected to fail this as stated; see the analysis notes.
inline CheckResult check_ensemble_tail(const EnsembleResult& res_ens) {
    CheckResult res{"ensemble tail within stderr of 1 at r = 3", true, ""};
    const EnsembleBin* hit = nullptr;
    for (const auto& b : res_ens.bins)
        if (std::abs(b.bin_center - 3.0) < 1e-9) hit = &b;
    if (!hit) {
        res.pass = false;
        res.detail = "no bin centered at 3";
        return res;
    }
    const double dev = std::abs(hit->kappa_hat - 1.0);
    res.pass = dev <= hit->std_error;
    res.detail = "estimate " + detail::fmt(hit->kappa_hat) + " +- " +
                 detail::fmt(hit->std_error) + "; exact limit value there is " +
                 detail::fmt(kappa_low_codim_closed(3.0, 1, 1));
    return res;
}

/// The reference curve for the discrete-zero case in dimension 3: finite,
/// positive, r^-2 blowup with unit coefficient at the left end, and the
/// literal 1e-6 flatness demand at r = 4 (the exact value sits 5.25e-6
/// above 1, so that clause fails by mathematics; see the analysis notes).
inline CheckResult check_figure_curve() {
    CheckResult res{"dimension-3 point-pair curve on [0.2, 4]", true, ""};
    const int steps = 200;
    const double rmin = 0.2, rmax = 4.0;
    for (int i = 0; i < steps; ++i) {
        const double r = rmin + (rmax - rmin) * i / (steps - 1);
        const double v = kappa_low_codim_closed(r, 3, 3);
        if (!std::isfinite(v) || v <= 0.0) {
            res.pass = false;
            res.detail = "curve not finite/positive at r=" + detail::fmt(r);
            return res;
        }
    }
    const double left = kappa_low_codim_closed(rmin, 3, 3);
    if (!(left > 20.0) || std::abs(left / 25.0 - 1.0) > 0.20) {
        res.pass = false;
        res.detail = "left end " + detail::fmt(left) +
                     " outside 25 +- 20% blowup window";
        return res;
    }
    const double right = kappa_low_codim_closed(rmax, 3, 3);
    const double dev = std::abs(right - 1.0);
    res.pass = dev <= 1e-6;
    res.detail = "value at r=4 is 1 + " + detail::fmt(right - 1.0) +
                 " (clause demands within 1e-6 of 1)";
    if (res.pass) res.detail = "left end " + detail::fmt(left) + "; " + res.detail;
    return res;
}

// ---------------------------------------------------------------------------
// Suites
// ---------------------------------------------------------------------------

enum class Level { fast, full };

/// The health-check suite behind `validate`: exact series identities,
/// cross-route equalities, enumeration oracles, and (full level) the
/// statistical oracles.  Deterministic for a fixed seed.
inline std::vector<CheckResult> run_validation(Level level,
                                               std::uint64_t seed = 1,
                                               int workers = 0) {
    std::vector<CheckResult> out;
    out.push_back(check_printed_point_series());
    out.push_back(check_printed_codim_series());
    out.push_back(check_cross_route_agreement());
    out.push_back(check_wick_oracle());
    out.push_back(check_normalization_properties(seed));
    out.push_back(check_short_distance_laws());
    if (level == Level::full) {
        out.push_back(check_mc_oracle(seed, workers));
        EnsembleConfig cfg;
        cfg.seed = seed;
        cfg.workers = workers;
        out.push_back(check_ensemble_bins(ensemble_su2(cfg)));
    }
    return out;
}

} // namespace zcorr::validate
