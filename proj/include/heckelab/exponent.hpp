#pragma once

#include <cstdint>
#include <vector>

#include "heckelab/covering.hpp"

namespace heckelab {

struct MinKResult {
    int k = -1;                      // smallest k reaching the target (when determined)
    bool determined = false;
    double achieved_fraction = 0.0;  // fraction at k, or at the last k tried
    int k_last = -1;                 // last k evaluated
    int heuristic_k = 0;             // dimension-count lower bound for this epsilon
};

// Scans k upward from the dimension-count heuristic (minus one) until the
// coverage target is reached; an exceeded cap yields an undetermined result
// carrying the last fraction.
MinKResult min_k_for_coverage(const SymPoint& x0, int n, long p, double epsilon,
                              double target_fraction, const SamplerConfig& config,
                              int k_scan_limit = 24);

struct GridPointResult {
    double epsilon = 0.0;
    double coverage_target = 0.0;
    MinKResult result;
};

struct ExponentFit {
    int n = 0;
    long p = 0;
    std::vector<double> x0_descriptor;  // row-major basepoint Gram entries
    std::vector<GridPointResult> grid;
    double kappa_hat = 0.0;
    double slope_stderr = 0.0;
    double intercept = 0.0;
    double normalization = 0.0;  // (n+2)/(2n)
};

// Least-squares slope of k_min against (n+2)/(2n) * log_p(1/epsilon), with a
// free intercept absorbing the unquantified additive terms. Requires at least
// three determined grid points and a non-degenerate epsilon grid.
ExponentFit fit_kappa(int n, long p, const std::vector<GridPointResult>& grid,
                      const std::vector<double>& x0_descriptor = {});

// Synthetic grid with k_min = round(c * (n+2)/(2n) * log_p(1/epsilon)); a fit
// on it recovers kappa_hat ~ c.
std::vector<GridPointResult> synthetic_grid(double c, int n, long p,
                                            const std::vector<double>& epsilons);

}  // namespace heckelab
