// Command-line front end for the limit-correlation library: evaluate single
// values, tabulate curves, expand series, run the sampling and ensemble
// oracles, and run the self-check suite.
//
// Exit codes: 0 ok, 1 failed validation, 2 domain error, 3 I/O error.
// The resolved configuration is always printed to stderr before results, so
// stdout stays machine-readable.

#include "zcorr/validate.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <complex>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace {

using nlohmann::ordered_json;

std::string fmt15(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.15g", v);
    return buf;
}

std::string rational_str(const zcorr::Rational& q) {
    std::ostringstream os;
    os << q;
    return os.str();
}

std::uint64_t parse_seed(const std::string& text) {
    std::size_t used = 0;
    std::uint64_t value = 0;
    if (!text.empty() && text[0] != '-') {
        try {
            value = std::stoull(text, &used, 0);
        } catch (const std::exception&) {
            used = 0;
        }
    }
    if (used != text.size() || text.empty())
        throw std::domain_error(
            "seed '" + text + "' is not a decimal or 0x-prefixed hex integer");
    return value;
}

// The resolved configuration, echoed identically to stderr and into the
// JSON envelope.
class ConfigEcho {
public:
    void add(const std::string& key, const std::string& value) {
        entries_.emplace_back(key, value);
    }
    void add(const std::string& key, const char* value) {
        entries_.emplace_back(key, value);
    }
    void add(const std::string& key, double value) { add(key, fmt15(value)); }
    void add(const std::string& key, int value) { add(key, std::to_string(value)); }
    void add(const std::string& key, std::uint64_t value) {
        add(key, std::to_string(value));
    }

    void print(const std::string& subcommand) const {
        std::ostringstream os;
        os << "config: " << subcommand;
        for (const auto& [k, v] : entries_) os << ' ' << k << '=' << v;
        std::cerr << os.str() << '\n';
    }

    ordered_json json() const {
        ordered_json j = ordered_json::object();
        for (const auto& [k, v] : entries_) j[k] = v;
        return j;
    }

private:
    std::vector<std::pair<std::string, std::string>> entries_;
};

zcorr::PointConfig read_points_file(const std::string& path, int m) {
    std::ifstream in(path);
    if (!in)
        throw std::ios_base::failure("cannot open points file: " + path);
    ordered_json doc;
    try {
        doc = ordered_json::parse(in);
    } catch (const std::exception& e) {
        throw std::domain_error("points file is not valid JSON: " +
                                std::string(e.what()));
    }
    if (!doc.is_array() || doc.empty())
        throw std::domain_error(
            "points file must be a nonempty JSON array of points");
    zcorr::PointConfig cfg;
    cfg.m = m;
    for (const auto& pt : doc) {
        if (!pt.is_array() || static_cast<int>(pt.size()) != m)
            throw std::domain_error("each point must be an array of m = " +
                                    std::to_string(m) + " coordinates");
        Eigen::VectorXcd z(m);
        for (int j = 0; j < m; ++j) {
            const auto& c = pt[static_cast<std::size_t>(j)];
            if (!c.is_array() || c.size() != 2 || !c[0].is_number() ||
                !c[1].is_number())
                throw std::domain_error(
                    "each coordinate must be a [re, im] number pair");
            z(j) = std::complex<double>(c[0].get<double>(), c[1].get<double>());
        }
        cfg.points.push_back(std::move(z));
    }
    cfg.validate();
    return cfg;
}

void write_payload(const std::string& out_path, const std::string& payload) {
    if (out_path.empty()) {
        std::cout << payload;
        return;
    }
    std::ofstream f(out_path, std::ios::binary);
    if (!f)
        throw std::ios_base::failure("cannot open output file: " + out_path);
    f << payload;
    f.flush();
    if (!f.good())
        throw std::ios_base::failure("failed writing output file: " + out_path);
}

// ---------------------------------------------------------------------------
// eval
// ---------------------------------------------------------------------------

struct EvalArgs {
    int k = 1;
    int m = 1;
    double r = 0;
    std::string points_file;
    std::string method = "closed";
    std::uint64_t samples = 1'000'000;
    std::string seed = "1";
    int workers = 0;
    bool json = false;
};

int run_eval(const EvalArgs& a, bool has_r) {
    const bool has_pts = !a.points_file.empty();
    if (has_r == has_pts)
        throw std::domain_error("eval needs exactly one of --r or --points-file");

    ConfigEcho cfg;
    cfg.add("method", a.method);
    cfg.add("k", a.k);
    cfg.add("m", a.m);

    zcorr::CorrelationQuery query;
    query.k = a.k;
    query.m = a.m;
    if (has_pts) {
        const zcorr::PointConfig pts = read_points_file(a.points_file, a.m);
        cfg.add("points_file", a.points_file);
        cfg.add("n", pts.n());
        query.geometry = pts;
    } else {
        cfg.add("r", a.r);
        query.geometry = a.r;
    }

    double value = 0;
    zcorr::MCEstimate est;
    const bool is_mc = a.method == "mc";
    if (is_mc) {
        if (a.samples < 1) throw std::domain_error("samples must be >= 1");
        zcorr::MCConfig mc;
        mc.samples = a.samples;
        mc.seed = parse_seed(a.seed);
        mc.workers = a.workers;
        cfg.add("samples", mc.samples);
        cfg.add("seed", mc.seed);
        cfg.add("workers", zcorr::resolve_worker_count(mc.workers));
        est = zcorr::estimate_kappa_mc(query, mc);
        value = est.mean;
    } else if (has_pts) {
        if (a.method != "berezin")
            throw std::domain_error("method '" + a.method +
                                    "' needs --r; only berezin and mc accept "
                                    "a points file");
        value = zcorr::k_npoint_berezin(std::get<zcorr::PointConfig>(query.geometry),
                                        a.k);
    } else if (a.method == "berezin") {
        value = zcorr::kappa_pair_berezin(a.r, a.k, a.m);
    } else if (a.method == "expansion") {
        value = zcorr::kappa_pair_expansion(a.r, a.k, a.m);
    } else if (a.method == "wick") {
        if (a.k != a.m)
            throw std::domain_error("wick enumeration needs k = m");
        value = zcorr::kappa_point_wick(a.r, a.m);
    } else { // closed
        value = a.k == a.m ? zcorr::kappa_point_closed(a.r, a.m)
                           : zcorr::kappa_low_codim_closed(a.r, a.k, a.m);
    }

    cfg.print("eval");
    if (a.json) {
        ordered_json env;
        env["command"] = "eval";
        env["config"] = cfg.json();
        env["value"] = value;
        if (is_mc) {
            env["stderr"] = est.std_error;
            env["samples"] = est.samples;
        }
        std::cout << env.dump() << '\n';
    } else {
        std::cout << fmt15(value) << '\n';
        if (is_mc)
            std::cerr << "note: std error " << fmt15(est.std_error) << " from "
                      << est.samples << " samples\n";
    }
    return 0;
}

// ---------------------------------------------------------------------------
// curve
// ---------------------------------------------------------------------------

struct CurveArgs {
    int k = 1;
    int m = 1;
    double rmin = 0.2;
    double rmax = 4.0;
    int steps = 200;
    std::string out;
    bool json = false;
};

int run_curve(const CurveArgs& a) {
    if (!(a.rmin > 0) || !(a.rmin < a.rmax))
        throw std::domain_error("need 0 < rmin < rmax");
    if (a.steps < 2) throw std::domain_error("need steps >= 2");

    ConfigEcho cfg;
    cfg.add("k", a.k);
    cfg.add("m", a.m);
    cfg.add("rmin", a.rmin);
    cfg.add("rmax", a.rmax);
    cfg.add("steps", a.steps);
    cfg.add("out", a.out.empty() ? "-" : a.out);

    std::vector<std::pair<double, double>> rows;
    rows.reserve(static_cast<std::size_t>(a.steps));
    for (int i = 0; i < a.steps; ++i) {
        const double r = a.rmin + (a.rmax - a.rmin) * i / (a.steps - 1);
        const double v = a.k == a.m
                             ? zcorr::kappa_point_closed(r, a.m)
                             : zcorr::kappa_low_codim_closed(r, a.k, a.m);
        rows.emplace_back(r, v);
    }

    cfg.print("curve");
    std::string payload;
    if (a.json) {
        ordered_json env;
        env["command"] = "curve";
        env["config"] = cfg.json();
        ordered_json pts = ordered_json::array();
        for (const auto& [r, v] : rows) {
            ordered_json p;
            p["r"] = r;
            p["kappa"] = v;
            pts.push_back(std::move(p));
        }
        env["points"] = std::move(pts);
        payload = env.dump();
        payload += '\n';
    } else {
        payload = "r,kappa\n";
        for (const auto& [r, v] : rows)
            payload += fmt15(r) + "," + fmt15(v) + "\n";
    }
    write_payload(a.out, payload);
    return 0;
}

// ---------------------------------------------------------------------------
// series
// ---------------------------------------------------------------------------

struct SeriesArgs {
    int k = 1;
    int m = 1;
    int order = zcorr::kDefaultSeriesOrder;
    bool json = false;
};

int run_series(const SeriesArgs& a) {
    const zcorr::RationalLaurentSeries s = zcorr::kappa_series(a.k, a.m, a.order);

    ConfigEcho cfg;
    cfg.add("k", a.k);
    cfg.add("m", a.m);
    cfg.add("order", a.order);
    cfg.add("valuation", s.valuation());
    cfg.add("known_below_power", s.first_unknown());
    cfg.print("series");

    if (a.json) {
        ordered_json env;
        env["command"] = "series";
        env["config"] = cfg.json();
        env["series"] = ordered_json::parse(s.json_string());
        std::cout << env.dump() << '\n';
        return 0;
    }
    bool any = false;
    for (int p = s.valuation(); p < s.first_unknown(); ++p) {
        const zcorr::Rational c = s.coeff(p);
        if (c == 0) continue;
        std::cout << "u^" << p << ": " << rational_str(c) << '\n';
        any = true;
    }
    if (!any) std::cout << "0\n";
    return 0;
}

// ---------------------------------------------------------------------------
// mc
// ---------------------------------------------------------------------------

struct McArgs {
    int k = 1;
    int m = 1;
    double r = 0;
    std::string points_file;
    std::uint64_t samples = 1'000'000;
    std::string seed = "1";
    int workers = 0;
    bool json = false;
};

int run_mc(const McArgs& a, bool has_r) {
    const bool has_pts = !a.points_file.empty();
    if (has_r == has_pts)
        throw std::domain_error("mc needs exactly one of --r or --points-file");
    if (a.samples < 1) throw std::domain_error("samples must be >= 1");

    zcorr::CorrelationQuery query;
    query.k = a.k;
    query.m = a.m;

    ConfigEcho cfg;
    cfg.add("k", a.k);
    cfg.add("m", a.m);
    if (has_pts) {
        const zcorr::PointConfig pts = read_points_file(a.points_file, a.m);
        cfg.add("points_file", a.points_file);
        cfg.add("n", pts.n());
        query.geometry = pts;
    } else {
        cfg.add("r", a.r);
        query.geometry = a.r;
    }

    zcorr::MCConfig mc;
    mc.samples = a.samples;
    mc.seed = parse_seed(a.seed);
    mc.workers = a.workers;
    cfg.add("samples", mc.samples);
    cfg.add("seed", mc.seed);
    cfg.add("workers", zcorr::resolve_worker_count(mc.workers));

    const zcorr::MCEstimate est = zcorr::estimate_kappa_mc(query, mc);

    cfg.print("mc");
    if (a.json) {
        ordered_json env;
        env["command"] = "mc";
        env["config"] = cfg.json();
        env["mean"] = est.mean;
        env["stderr"] = est.std_error;
        env["samples"] = est.samples;
        std::cout << env.dump() << '\n';
    } else {
        std::cout << "mean " << fmt15(est.mean) << '\n'
                  << "stderr " << fmt15(est.std_error) << '\n'
                  << "samples " << est.samples << '\n';
    }
    return 0;
}

// ---------------------------------------------------------------------------
// ensemble
// ---------------------------------------------------------------------------

struct EnsembleArgs {
    int degree = 200;
    int trials = 2000;
    std::string seed = "1";
    int workers = 0;
    double rho_max = 5.0;
    bool json = false;
};

ordered_json bin_record(const zcorr::EnsembleBin& b) {
    ordered_json j;
    j["bin_center"] = b.bin_center;
    j["kappa_hat"] = b.kappa_hat;
    j["stderr"] = b.std_error;
    j["pairs_counted"] = b.pairs_counted;
    return j;
}

int run_ensemble(const EnsembleArgs& a) {
    zcorr::EnsembleConfig ec;
    ec.degree = a.degree;
    ec.trials = a.trials;
    ec.seed = parse_seed(a.seed);
    ec.workers = a.workers;
    ec.rho_max = a.rho_max;

    ConfigEcho cfg;
    cfg.add("degree", ec.degree);
    cfg.add("trials", ec.trials);
    cfg.add("seed", ec.seed);
    cfg.add("workers", zcorr::resolve_worker_count(ec.workers));
    cfg.add("rho_max", ec.rho_max);
    cfg.print("ensemble");

    const zcorr::EnsembleResult res = zcorr::ensemble_su2(ec);

    if (a.json) {
        ordered_json env;
        env["command"] = "ensemble";
        env["config"] = cfg.json();
        ordered_json bins = ordered_json::array();
        for (const auto& b : res.bins) bins.push_back(bin_record(b));
        env["bins"] = std::move(bins);
        env["roots_total"] = res.roots_total;
        env["roots_discarded"] = res.roots_discarded;
        std::cout << env.dump() << '\n';
    } else {
        for (const auto& b : res.bins) std::cout << bin_record(b).dump() << '\n';
        std::cerr << "note: " << res.roots_discarded << " of " << res.roots_total
                  << " roots discarded\n";
    }
    return 0;
}

// ---------------------------------------------------------------------------
// validate
// ---------------------------------------------------------------------------

struct ValidateArgs {
    std::string level = "fast";
    std::string seed = "1";
    int workers = 0;
    bool json = false;
};

int run_validate(const ValidateArgs& a) {
    const auto level = a.level == "full" ? zcorr::validate::Level::full
                                         : zcorr::validate::Level::fast;
    const std::uint64_t seed = parse_seed(a.seed);

    ConfigEcho cfg;
    cfg.add("level", a.level);
    cfg.add("seed", seed);
    cfg.add("workers", zcorr::resolve_worker_count(a.workers));
    cfg.print("validate");

    const std::vector<zcorr::validate::CheckResult> checks =
        zcorr::validate::run_validation(level, seed, a.workers);
    int failed = 0;
    for (const auto& c : checks) failed += c.pass ? 0 : 1;

    if (a.json) {
        ordered_json env;
        env["command"] = "validate";
        env["config"] = cfg.json();
        ordered_json arr = ordered_json::array();
        for (const auto& c : checks) {
            ordered_json j;
            j["name"] = c.name;
            j["pass"] = c.pass;
            j["detail"] = c.detail;
            arr.push_back(std::move(j));
        }
        env["checks"] = std::move(arr);
        env["passed"] = static_cast<int>(checks.size()) - failed;
        env["failed"] = failed;
        std::cout << env.dump() << '\n';
    } else {
        for (const auto& c : checks)
            std::cout << (c.pass ? "PASS  " : "FAIL  ") << c.name << ": "
                      << c.detail << '\n';
        std::cout << (checks.size() - static_cast<std::size_t>(failed)) << " of "
                  << checks.size() << " checks passed\n";
    }
    return failed == 0 ? 0 : 1;
}

int run_guarded(const std::function<int()>& body) {
    try {
        return body();
    } catch (const std::ios_base::failure& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    } catch (const zcorr::ConsistencyError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::length_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"limit correlation functions of zeros of Gaussian random "
                 "polynomial systems"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "zcorr 1.0.0");

    EvalArgs ev;
    auto* eval = app.add_subcommand("eval", "evaluate one correlation value");
    eval->add_option("--k", ev.k, "codimension of the zero set")->required();
    eval->add_option("--m", ev.m, "complex dimension")->required();
    auto* eval_r = eval->add_option("--r", ev.r, "pair separation");
    eval->add_option("--points-file", ev.points_file,
                     "JSON array of points, each an array of [re, im] pairs "
                     "of length m");
    eval->add_option("--method", ev.method,
                     "berezin | expansion | closed | wick | mc")
        ->check(CLI::IsMember({"berezin", "expansion", "closed", "wick", "mc"}));
    eval->add_option("--samples", ev.samples, "sample count for --method mc");
    eval->add_option("--seed", ev.seed, "RNG seed, decimal or hex");
    eval->add_option("--workers", ev.workers,
                     "worker threads, 0 = auto; env ZCORR_THREADS overrides");
    eval->add_flag("--json", ev.json, "emit a JSON envelope");

    CurveArgs cv;
    auto* curve = app.add_subcommand("curve", "tabulate a correlation curve");
    curve->add_option("--k", cv.k, "codimension of the zero set")->required();
    curve->add_option("--m", cv.m, "complex dimension")->required();
    curve->add_option("--rmin", cv.rmin, "left end of the r grid");
    curve->add_option("--rmax", cv.rmax, "right end of the r grid");
    curve->add_option("--steps", cv.steps, "number of grid points");
    curve->add_option("--out", cv.out, "output path (default stdout)");
    curve->add_flag("--json", cv.json, "emit a JSON envelope instead of CSV");

    SeriesArgs se;
    auto* series = app.add_subcommand("series",
                                      "exact rational series in u = r^2");
    series->add_option("--k", se.k, "codimension of the zero set")->required();
    series->add_option("--m", se.m, "complex dimension")->required();
    series->add_option("--order", se.order, "truncation order in u");
    series->add_flag("--json", se.json, "emit a JSON envelope");

    McArgs mc;
    auto* mcc = app.add_subcommand("mc", "Monte-Carlo correlation estimate");
    mcc->add_option("--k", mc.k, "codimension of the zero set")->required();
    mcc->add_option("--m", mc.m, "complex dimension")->required();
    auto* mc_r = mcc->add_option("--r", mc.r, "pair separation");
    mcc->add_option("--points-file", mc.points_file,
                    "JSON array of points, each an array of [re, im] pairs "
                    "of length m");
    mcc->add_option("--samples", mc.samples, "sample count");
    mcc->add_option("--seed", mc.seed, "RNG seed, decimal or hex");
    mcc->add_option("--workers", mc.workers,
                    "worker threads, 0 = auto; env ZCORR_THREADS overrides");
    mcc->add_flag("--json", mc.json, "emit a JSON envelope");

    EnsembleArgs en;
    auto* ens = app.add_subcommand(
        "ensemble", "empirical pair correlation of SU(2) polynomial roots");
    ens->add_option("--degree", en.degree, "polynomial degree N");
    ens->add_option("--trials", en.trials, "independent polynomials to draw");
    ens->add_option("--seed", en.seed, "RNG seed, decimal or hex");
    ens->add_option("--workers", en.workers,
                    "worker threads, 0 = auto; env ZCORR_THREADS overrides");
    ens->add_option("--rho-max", en.rho_max,
                    "radius of the scaled observation disk");
    ens->add_flag("--json", en.json, "emit a JSON envelope");

    ValidateArgs va;
    auto* val = app.add_subcommand("validate", "run the self-check suite");
    val->add_option("--level", va.level, "fast | full")
        ->check(CLI::IsMember({"fast", "full"}));
    val->add_option("--seed", va.seed, "RNG seed, decimal or hex");
    val->add_option("--workers", va.workers,
                    "worker threads, 0 = auto; env ZCORR_THREADS overrides");
    val->add_flag("--json", va.json, "emit a JSON envelope");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    if (eval->parsed())
        return run_guarded([&] { return run_eval(ev, eval->count("--r") > 0); });
    if (curve->parsed()) return run_guarded([&] { return run_curve(cv); });
    if (series->parsed()) return run_guarded([&] { return run_series(se); });
    if (mcc->parsed())
        return run_guarded([&] { return run_mc(mc, mcc->count("--r") > 0); });
    if (ens->parsed()) return run_guarded([&] { return run_ensemble(en); });
    if (val->parsed()) return run_guarded([&] { return run_validate(va); });
    return 2;
}
