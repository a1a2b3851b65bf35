#include "heckelab/exponent.hpp"

#include <cmath>
#include <stdexcept>

namespace heckelab {

namespace {

int heuristic_start(int n, long p, double epsilon) {
    const double d = (n + 2) * (n - 1) / 2.0;
    const double bound = d / (n * (n - 1)) * std::log(1.0 / epsilon) / std::log(static_cast<double>(p));
    return static_cast<int>(std::ceil(bound - 1e-9));
}

}  // namespace

MinKResult min_k_for_coverage(const SymPoint& x0, int n, long p, double epsilon,
                              double target_fraction, const SamplerConfig& config,
                              int k_scan_limit) {
    if (!(target_fraction > 0.0 && target_fraction < 1.0))
        throw std::invalid_argument("min_k_for_coverage: target must lie in (0,1)");
    if (!(epsilon > 0.0)) throw std::invalid_argument("min_k_for_coverage: epsilon must be positive");

    MinKResult res;
    res.heuristic_k = heuristic_start(n, p, epsilon);
    const int k_start = std::max(0, res.heuristic_k - 1);

    const std::vector<ReducedPoint> xs =
        sample_region(n, config.region, config.samples, config.seed, config.threads);

    for (int k = k_start; k <= k_start + k_scan_limit; ++k) {
        if (coset_count(n, p, n * k) > config.cap) break;  // undetermined
        OrbitCloud cloud = orbit_points(x0, n, p, k, config.cap, config.threads);
        CoverageReport rep = coverage_on_samples(cloud, xs, epsilon, config);
        res.k_last = k;
        res.achieved_fraction = rep.fraction;
        if (rep.fraction >= target_fraction) {
            res.k = k;
            res.determined = true;
            return res;
        }
    }
    return res;
}

ExponentFit fit_kappa(int n, long p, const std::vector<GridPointResult>& grid,
                      const std::vector<double>& x0_descriptor) {
    ExponentFit fit;
    fit.n = n;
    fit.p = p;
    fit.x0_descriptor = x0_descriptor;
    fit.grid = grid;
    fit.normalization = (n + 2) / (2.0 * n);

    std::vector<double> t, k;
    for (const auto& g : grid) {
        if (!g.result.determined) continue;
        t.push_back(fit.normalization * std::log(1.0 / g.epsilon) / std::log(static_cast<double>(p)));
        k.push_back(static_cast<double>(g.result.k));
    }
    const size_t m = t.size();
    if (m < 3) throw std::invalid_argument("fit_kappa: need at least 3 determined grid points");

    double tbar = 0.0, kbar = 0.0;
    for (size_t i = 0; i < m; ++i) {
        tbar += t[i];
        kbar += k[i];
    }
    tbar /= static_cast<double>(m);
    kbar /= static_cast<double>(m);
    double stt = 0.0, stk = 0.0;
    for (size_t i = 0; i < m; ++i) {
        stt += (t[i] - tbar) * (t[i] - tbar);
        stk += (t[i] - tbar) * (k[i] - kbar);
    }
    if (stt < 1e-12) throw std::invalid_argument("fit_kappa: degenerate grid (epsilons too close)");
    fit.kappa_hat = stk / stt;
    fit.intercept = kbar - fit.kappa_hat * tbar;
    double rss = 0.0;
    for (size_t i = 0; i < m; ++i) {
        const double r = k[i] - (fit.intercept + fit.kappa_hat * t[i]);
        rss += r * r;
    }
    fit.slope_stderr = (m > 2) ? std::sqrt(rss / static_cast<double>(m - 2) / stt) : 0.0;
    return fit;
}

std::vector<GridPointResult> synthetic_grid(double c, int n, long p,
                                            const std::vector<double>& epsilons) {
    const double norm = (n + 2) / (2.0 * n);
    std::vector<GridPointResult> grid;
    for (double eps : epsilons) {
        GridPointResult g;
        g.epsilon = eps;
        g.coverage_target = 0.9;
        const double t = norm * std::log(1.0 / eps) / std::log(static_cast<double>(p));
        g.result.k = static_cast<int>(std::lround(c * t));
        g.result.determined = true;
        g.result.achieved_fraction = 1.0;
        g.result.k_last = g.result.k;
        g.result.heuristic_k = g.result.k;
        grid.push_back(g);
    }
    return grid;
}

}  // namespace heckelab
