// Acceptance suite: one pass/fail line per criterion, exit code = number of
// failures. Regression values were pinned from seed-0 runs and are exact
// under the determinism contract.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <heckelab/json_io.hpp>
#include <heckelab/rng.hpp>
#include <heckelab/svg.hpp>
#include <string>
#include <vector>

using namespace heckelab;
using cplx = std::complex<double>;

namespace {

int g_failures = 0;

void criterion(int id, const std::string& label, double time_budget_s,
               const std::function<bool(std::string&)>& body) {
    std::string detail;
    bool ok = false;
    const auto t0 = std::chrono::steady_clock::now();
    try {
        ok = body(detail);
    } catch (const std::exception& e) {
        detail = std::string("exception: ") + e.what();
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (time_budget_s > 0 && secs > time_budget_s) {
        ok = false;
        detail += " [exceeded time budget " + std::to_string(time_budget_s) + "s]";
    }
    std::printf("%s criterion %d (%s): %s [%.1fs]\n", ok ? "PASS" : "FAIL", id, label.c_str(),
                detail.c_str(), secs);
    std::fflush(stdout);
    if (!ok) ++g_failures;
}

SpectralParam random_tempered(CounterRng& rng, int n) {
    SpectralParam mu;
    double mean = 0.0;
    std::vector<double> ts(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
        ts[static_cast<size_t>(i)] = rng.next_in(-3.0, 3.0);
        mean += ts[static_cast<size_t>(i)] / n;
    }
    for (int i = 0; i < n; ++i) mu.mu.push_back(cplx(0.0, ts[static_cast<size_t>(i)] - mean));
    return mu;
}

SpectralParam random_boxed(CounterRng& rng, int n) {
    SpectralParam mu;
    for (int i = 0; i < n; ++i)
        mu.mu.push_back(cplx(rng.next_in(-1.0, 1.0), rng.next_in(-3.0, 3.0)));
    return mu;
}

double binom(int a, int b) {
    double r = 1.0;
    for (int i = 1; i <= b; ++i) r = r * (a - b + i) / i;
    return r;
}

Eigen::MatrixXd random_sl(CounterRng& rng, int n) {
    Eigen::MatrixXd g(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) g(i, j) = rng.next_normal();
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
    Eigen::MatrixXd q = qr.householderQ();
    if (q.determinant() < 0) q.col(0) *= -1.0;
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
    double mean = 0.0;
    std::vector<double> t(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
        t[static_cast<size_t>(i)] = rng.next_in(-0.8, 0.8);
        mean += t[static_cast<size_t>(i)] / n;
    }
    for (int i = 0; i < n; ++i) a(i, i) = std::exp(t[static_cast<size_t>(i)] - mean);
    return q * a;
}

// --- pinned regression values (seed 0, defaults as shipped) ---
constexpr double kFigure1PinnedFraction = 0.900075;  // 36003 / 40000
constexpr int64_t kFigure1PinnedCovered = 36003;
constexpr int64_t kFigure1Samples = 40000;

RunConfig figure1_config(uint64_t seed, int threads) {
    RunConfig config;
    config.n = 2;
    config.p = 3;
    config.k = 3;
    config.epsilons = {std::pow(3.0, -3.0)};
    config.region = Region::halfplane(2.0);
    config.samples = kFigure1Samples;
    config.seed = seed;
    config.threads = threads;
    return config;
}

CoverageReport run_figure1(const RunConfig& config, std::string* svg_out) {
    SymPoint x0 = default_basepoint(2);
    SamplerConfig scfg;
    scfg.region = config.region;
    scfg.samples = config.samples;
    scfg.seed = config.seed;
    scfg.threads = config.threads;
    OrbitCloud cloud = orbit_points(x0, 2, 3, 3, config.cap, config.threads);
    auto xs = sample_region(2, config.region, config.samples, config.seed, config.threads);
    if (svg_out) *svg_out = halfplane_figure_svg(cloud, config.epsilons[0], config.region);
    return coverage_on_samples(cloud, xs, config.epsilons[0], scfg);
}

ExponentFit run_kappa_preset(int n, long p, uint64_t seed, int threads, std::string* json_out) {
    RunConfig config;
    config.n = n;
    config.p = p;
    config.seed = seed;
    config.threads = threads;
    if (n == 2) {
        config.epsilons = {std::pow(3.0, -2.0), std::pow(3.0, -3.0), std::pow(3.0, -4.0)};
        config.samples = 3000;
        config.region = Region::halfplane(2.0);
    } else {
        config.epsilons = {std::pow(2.0, -1.0), std::pow(2.0, -1.5), std::pow(2.0, -2.0)};
        config.samples = 500;
        config.region = Region::box(n, 0.3, 0.5);
    }
    SamplerConfig scfg;
    scfg.region = config.region;
    scfg.samples = config.samples;
    scfg.seed = config.seed;
    scfg.threads = config.threads;

    SymPoint x0 = default_basepoint(n);
    std::vector<GridPointResult> grid;
    for (double eps : config.epsilons) {
        GridPointResult g;
        g.epsilon = eps;
        g.coverage_target = 0.9;
        g.result = min_k_for_coverage(x0, n, p, eps, 0.9, scfg);
        grid.push_back(g);
    }
    ExponentFit fit = fit_kappa(n, p, grid);
    if (json_out) *json_out = exponent_fit_to_json(fit, config).dump(2);
    return fit;
}

}  // namespace

int main() {
    criterion(1, "exact coset combinatorics", 30.0, [](std::string& detail) {
        for (long p : {2L, 3L, 5L}) {
            mpz_class expect = 0, power = 1;
            for (int l = 0; l <= 4; ++l) {
                expect += power;
                if (coset_count(2, p, l) != expect) {
                    detail = "closed form failed at p=" + std::to_string(p);
                    return false;
                }
                power *= p;
            }
        }
        int checked = 0;
        for (long p : {2L, 3L})
            for (int n = 2; n <= 4; ++n)
                for (int l = 0; l <= 3; ++l) {
                    mpz_class total = 0;
                    for (const auto& [part, size] : partition_buckets(n, p, l)) total += size;
                    if (total != coset_count(n, p, l)) {
                        detail = "refinement failed at n=" + std::to_string(n);
                        return false;
                    }
                    ++checked;
                }
        detail = "closed form p in {2,3,5} l<=4; refinement on " + std::to_string(checked) +
                 " (n,p,l) cells";
        return true;
    });

    criterion(2, "growth exponents", 0.0, [](std::string& detail) {
        double worst = 0.0;
        for (int n : {2, 3})
            for (long p : {2L, 3L}) {
                double lo = 1e300, hi = 0.0;
                for (int l = 1; l <= 4; ++l) {
                    const double ratio =
                        coset_count(n, p, l).get_d() /
                        std::pow(static_cast<double>(p), static_cast<double>(l) * (n - 1));
                    lo = std::min(lo, ratio);
                    hi = std::max(hi, ratio);
                }
                worst = std::max(worst, hi / lo);
                if (hi / lo > 4.0) {
                    detail = "spread " + std::to_string(hi / lo) + " at n=" + std::to_string(n) +
                             ", p=" + std::to_string(p);
                    return false;
                }
            }
        detail = "count/p^{l(n-1)} spread <= " + std::to_string(worst) + " (bound 4)";
        return true;
    });

    criterion(3, "spectral identities", 60.0, [](std::string& detail) {
        for (long p : {2L, 3L, 5L})
            for (int n = 2; n <= 4; ++n)
                for (int l = 0; l <= 4; ++l) {
                    SpectralParam neg_rho;
                    for (double r : rho(n)) neg_rho.mu.push_back(cplx(-r, 0.0));
                    if (std::abs(spherical_transform_h(n, p, l, neg_rho) - 1.0) > 1e-12) {
                        detail = "transform at -rho drifted";
                        return false;
                    }
                }
        CounterRng rng(1001, 0);
        for (int t = 0; t < 200; ++t) {
            const int n = 2 + t % 3;
            const long p = (t % 2 == 0) ? 2 : 3;
            const int l = 1 + t % 4;
            if (std::abs(spherical_transform_h(n, p, l, random_tempered(rng, n))) > 1.0 + 1e-12) {
                detail = "tempered contraction violated";
                return false;
            }
        }
        double worst = 0.0;
        for (int n = 2; n <= 4; ++n)
            for (long p : {2L, 3L})
                for (int l = 0; l <= 3; ++l)
                    for (int t = 0; t < 25; ++t) {
                        SpectralParam mu =
                            (t % 2 == 0) ? random_tempered(rng, n) : random_boxed(rng, n);
                        const cplx lam = hecke_eigenvalue_lambda(n, p, l, mu);
                        const cplx orc = symmetric_oracle(n, p, l, mu);
                        const double rel = std::abs(lam - orc) / std::max(1.0, std::abs(orc));
                        worst = std::max(worst, rel);
                        if (rel > 1e-9) {
                            detail = "oracle disagreement " + std::to_string(rel);
                            return false;
                        }
                    }
        char buf[96];
        std::snprintf(buf, sizeof(buf), "-rho identity, contraction, oracle rel err <= %.1e",
                      worst);
        detail = buf;
        return true;
    });

    criterion(4, "eigenvalue bound", 0.0, [](std::string& detail) {
        CounterRng rng(2002, 0);
        int violations = 0;
        for (int t = 0; t < 500; ++t) {
            const int n = (t % 2 == 0) ? 2 : 3;
            const long p = (t % 3 == 0) ? 3 : 2;
            const int l = 1 + t % 4;
            SpectralParam mu = random_boxed(rng, n);
            const double bound =
                binom(l + n - 1, n - 1) * std::pow(static_cast<double>(p), l * theta(mu));
            if (std::abs(hecke_eigenvalue_lambda(n, p, l, mu)) > bound * (1 + 1e-9)) ++violations;
        }
        detail = std::to_string(violations) + " violations in 500 draws";
        return violations == 0;
    });

    criterion(5, "geometry", 300.0, [](std::string& detail) {
        CounterRng rng(3003, 0);
        for (int n : {2, 3})
            for (int t = 0; t < 100; ++t) {
                SymPoint X = from_group(random_sl(rng, n));
                SymPoint Y = from_group(random_sl(rng, n));
                Eigen::MatrixXd g = random_sl(rng, n);
                const double before = distance(X, Y);
                const double after = distance(act(g, X), act(g, Y));
                if (std::abs(before - after) > 1e-8 * std::max(1.0, before)) {
                    detail = "invariance violated at n=" + std::to_string(n);
                    return false;
                }
            }
        std::string slopes;
        for (int n : {2, 3}) {
            const double d_expect = (n + 2) * (n - 1) / 2.0;
            std::vector<double> le, lv;
            for (double e : {0.4, 0.2, 0.1}) {
                auto est = ball_volume_estimate(n, e, 100000, 0);
                le.push_back(std::log(e));
                lv.push_back(std::log(est.volume));
            }
            double xm = (le[0] + le[1] + le[2]) / 3.0, ym = (lv[0] + lv[1] + lv[2]) / 3.0;
            double sxx = 0, sxy = 0;
            for (int i = 0; i < 3; ++i) {
                sxx += (le[i] - xm) * (le[i] - xm);
                sxy += (le[i] - xm) * (lv[i] - ym);
            }
            const double slope = sxy / sxx;
            char buf[64];
            std::snprintf(buf, sizeof(buf), " n=%d slope %.3f (dim %.0f)", n, slope, d_expect);
            slopes += buf;
            if (std::abs(slope - d_expect) > 0.1 * d_expect) {
                detail = "slope off:" + slopes;
                return false;
            }
        }
        detail = "invariance to 1e-8;" + slopes + "; 1e5 samples each";
        return true;
    });

    criterion(6, "figure1 reproduction", 120.0, [](std::string& detail) {
        std::string svg;
        CoverageReport pinned = run_figure1(figure1_config(0, 0), &svg);
        if (svg.find("<svg") == std::string::npos || svg.find("</svg>") == std::string::npos) {
            detail = "SVG missing or malformed";
            return false;
        }
        if (pinned.covered != kFigure1PinnedCovered ||
            std::abs(pinned.fraction - kFigure1PinnedFraction) > 1e-12) {
            detail = "seed-0 fraction " + std::to_string(pinned.fraction) + " != pinned " +
                     std::to_string(kFigure1PinnedFraction);
            return false;
        }
        for (uint64_t seed : {2ULL, 4ULL, 5ULL}) {
            CoverageReport rerun = run_figure1(figure1_config(seed, 0), nullptr);
            if (std::abs(rerun.fraction - kFigure1PinnedFraction) > 2.0 * rerun.std_error) {
                detail = "seed " + std::to_string(seed) + " fraction " +
                         std::to_string(rerun.fraction) + " outside 2 stderr of pinned";
                return false;
            }
        }
        char buf[96];
        std::snprintf(buf, sizeof(buf), "fraction %.6f pinned; reruns within 2 stderr; SVG %zuB",
                      kFigure1PinnedFraction, svg.size());
        detail = buf;
        return true;
    });

    criterion(7, "exponent estimation", 900.0, [](std::string& detail) {
        ExponentFit f2 = run_kappa_preset(2, 3, 0, 0, nullptr);
        if (!(f2.kappa_hat >= 0.75 && f2.kappa_hat <= 1.3)) {
            detail = "n=2 kappa_hat " + std::to_string(f2.kappa_hat) + " outside [0.75, 1.3]";
            return false;
        }
        ExponentFit f3 = run_kappa_preset(3, 2, 0, 0, nullptr);
        if (!(f3.kappa_hat >= 0.7 && f3.kappa_hat <= 1.5)) {
            detail = "n=3 kappa_hat " + std::to_string(f3.kappa_hat) + " outside [0.7, 1.5]";
            return false;
        }
        for (const ExponentFit* fit : {&f2, &f3})
            for (const auto& g : fit->grid) {
                if (!g.result.determined) {
                    detail = "undetermined grid point";
                    return false;
                }
                if (g.result.k < g.result.heuristic_k - 1) {
                    detail = "heuristic lower bound violated";
                    return false;
                }
            }
        char buf[96];
        std::snprintf(buf, sizeof(buf), "kappa_hat n2p3 %.4f, n3p2 %.4f; lower bounds hold",
                      f2.kappa_hat, f3.kappa_hat);
        detail = buf;
        return true;
    });

    criterion(8, "determinism across worker counts", 0.0, [](std::string& detail) {
        std::string svg1, svg4;
        CoverageReport r1 = run_figure1(figure1_config(0, 1), &svg1);
        CoverageReport r4 = run_figure1(figure1_config(0, 4), &svg4);
        const std::string j1 = coverage_report_to_json(r1, figure1_config(0, 1)).dump();
        const std::string j4 = coverage_report_to_json(r4, figure1_config(0, 4)).dump();
        if (j1 != j4 || svg1 != svg4) {
            detail = "figure1 outputs differ between 1 and 4 workers";
            return false;
        }
        std::string k1, k4;
        run_kappa_preset(2, 3, 0, 1, &k1);
        run_kappa_preset(2, 3, 0, 4, &k4);
        if (k1 != k4) {
            detail = "kappa-n2-p3 JSON differs between 1 and 4 workers";
            return false;
        }
        detail = "figure1 JSON+SVG and kappa JSON byte-identical for 1 vs 4 workers";
        return true;
    });

    std::printf("%s: %d of 8 criteria passed\n", g_failures == 0 ? "ACCEPTANCE PASS" : "ACCEPTANCE FAIL",
                8 - g_failures);
    return g_failures;
}
