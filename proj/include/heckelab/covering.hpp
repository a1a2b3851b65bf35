#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "heckelab/hecke_enum.hpp"
#include "heckelab/symspace.hpp"

namespace heckelab {

// Sampling region in Iwasawa coordinates. For n = 2 this is the standard
// modular fundamental domain truncated at y <= y_max; for n >= 3 a box in the
// free diagonal coordinates h_1..h_{n-1} and the unipotent coordinates.
struct Region {
    int n = 2;
    double y_max = 2.0;                                  // n = 2
    std::vector<std::pair<double, double>> h_bounds;     // n >= 3, size n-1
    std::vector<std::pair<double, double>> x_bounds;     // n >= 3, size n(n-1)/2

    static Region halfplane(double y_max);
    static Region box(int n, double h_half_width, double x_half_width);
};

struct SamplerConfig {
    Region region;
    int64_t samples = 1000;
    uint64_t seed = 0;
    int threads = 0;          // 0: HECKE_LAB_THREADS or hardware
    double metric_scale = 1.0;
    uint64_t cap = kDefaultRepCap;
};

// Hecke orbit of the basepoint at height k, reduced and deduplicated.
struct OrbitCloud {
    int n = 0;
    long p = 0;
    int k = 0;
    SymPoint basepoint;
    std::vector<ReducedPoint> points;
    std::vector<Eigen::VectorXd> keys;  // log-coordinates, sorted order
    double dedupe_tolerance = 1e-8;
};

OrbitCloud orbit_points(const SymPoint& x0, int n, long p, int k, uint64_t cap = kDefaultRepCap,
                        int threads = 0);

// Fixed generic basepoint: unit-determinant Gram built from an Iwasawa frame
// with irrational-looking coordinates, so Hecke images stay pairwise distinct.
SymPoint default_basepoint(int n);

// Uniform-grid hash over log-coordinates; the Euclidean key distance
// lower-bounds the geodesic distance, so a box query at radius eps cannot
// miss an admissible point.
class PointIndex {
public:
    PointIndex(const OrbitCloud& cloud, double eps);

    // True when some cloud point satisfies dist_in_X(x, point) <= eps, with x
    // already reduced.
    bool any_within(const SymPoint& x_reduced, double eps) const;

    // Exact minimum over the cloud (same search set as dist_in_X); mostly for
    // tests and diagnostics.
    double min_dist(const SymPoint& x_reduced) const;

private:
    const OrbitCloud& cloud_;
    const std::vector<Eigen::MatrixXd>& neighbors_;
    double cell_;
    int dim_;
    std::unordered_map<uint64_t, std::vector<int32_t>> grid_;

    uint64_t cell_hash(const Eigen::VectorXd& key, const std::vector<int64_t>& shift) const;
    void collect(const Eigen::VectorXd& key, double radius, std::vector<int32_t>& out) const;
};

bool is_admissible(const SymPoint& x, const OrbitCloud& cloud, const PointIndex& index,
                   double epsilon, double metric_scale = 1.0);

// Convenience form matching the operation contract; builds the orbit cloud
// internally (expensive — prefer the overload above in loops).
bool is_admissible(const SymPoint& x, const SymPoint& x0, double epsilon, int k, int n, long p,
                   uint64_t cap = kDefaultRepCap);

// Draws points from the invariant measure restricted to the region, reduced.
std::vector<ReducedPoint> sample_region(int n, const Region& region, int64_t count, uint64_t seed,
                                        int threads = 0);

struct CoverageReport {
    int n = 0;
    long p = 0;
    int k = 0;
    double epsilon = 0.0;
    Region region;
    int64_t samples = 0;
    int64_t covered = 0;
    double fraction = 0.0;
    double std_error = 0.0;
    uint64_t seed = 0;
};

CoverageReport coverage(const SymPoint& x0, int n, long p, int k, double epsilon,
                        const SamplerConfig& config);

// Same, over a fixed sample set (shared across a k-scan so that coverage is
// exactly monotone in k).
CoverageReport coverage_on_samples(const OrbitCloud& cloud, const std::vector<ReducedPoint>& xs,
                                   double epsilon, const SamplerConfig& config);

}  // namespace heckelab
