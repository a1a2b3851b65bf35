#include "heckelab/covering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "heckelab/parallel.hpp"
#include "heckelab/rng.hpp"

namespace heckelab {

Region Region::halfplane(double y_max) {
    if (!(y_max > 1.0)) throw std::invalid_argument("Region: y_max must exceed 1");
    Region r;
    r.n = 2;
    r.y_max = y_max;
    return r;
}

Region Region::box(int n, double h_half_width, double x_half_width) {
    if (n < 3) throw std::invalid_argument("Region::box: n >= 3");
    if (!(h_half_width > 0.0) || !(x_half_width > 0.0))
        throw std::invalid_argument("Region::box: empty region");
    Region r;
    r.n = n;
    r.h_bounds.assign(static_cast<size_t>(n - 1), {-h_half_width, h_half_width});
    r.x_bounds.assign(static_cast<size_t>(n * (n - 1) / 2), {-x_half_width, x_half_width});
    return r;
}

namespace {

struct RawRepBuffer {
    int n = 0;
    int noff = 0;
    std::vector<int8_t> vals;
    std::vector<int64_t> offs;

    int64_t size() const { return n == 0 ? 0 : static_cast<int64_t>(vals.size()) / n; }
};

RawRepBuffer collect_raw_reps(int n, long p, int l, uint64_t cap) {
    RawRepBuffer buf;
    buf.n = n;
    buf.noff = n * (n - 1) / 2;
    for_each_coset_raw(
        n, p, l,
        [&](const int* v, const int64_t* off) {
            for (int i = 0; i < n; ++i) buf.vals.push_back(static_cast<int8_t>(v[i]));
            for (int s = 0; s < buf.noff; ++s) buf.offs.push_back(off[s]);
        },
        cap);
    return buf;
}

// Hermite representative H (row-major doubles) from the compact record; the
// orbit representative is its transpose, so the action is H^T X H -> handled
// by the caller.
void hermite_as_double(const RawRepBuffer& buf, int64_t idx, long p, Eigen::MatrixXd& H) {
    const int n = buf.n;
    H.setZero();
    const int8_t* v = &buf.vals[static_cast<size_t>(idx) * n];
    const int64_t* off = &buf.offs[static_cast<size_t>(idx) * buf.noff];
    int s = 0;
    for (int i = 0; i < n; ++i) {
        H(i, i) = std::pow(static_cast<double>(p), static_cast<double>(v[i]));
        for (int j = i + 1; j < n; ++j) H(i, j) = static_cast<double>(off[s++]);
    }
}

bool key_less(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    for (int i = 0; i < a.size(); ++i) {
        if (a(i) < b(i)) return true;
        if (a(i) > b(i)) return false;
    }
    return false;
}

bool key_close(const Eigen::VectorXd& a, const Eigen::VectorXd& b, double tol) {
    return (a - b).cwiseAbs().maxCoeff() <= tol;
}

}  // namespace

SymPoint default_basepoint(int n) {
    if (n == 2) return from_halfplane(0.2718281828, 1.3141592653);
    Eigen::MatrixXd N = Eigen::MatrixXd::Identity(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) N(i, j) = 0.2718281828 + 0.0314159265 * (i + 2 * j);
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
    double mean = 0.0;
    std::vector<double> h(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
        h[static_cast<size_t>(i)] = 0.1 * std::sin(1.0 + i);
        mean += h[static_cast<size_t>(i)] / n;
    }
    for (int i = 0; i < n; ++i) A(i, i) = std::exp(h[static_cast<size_t>(i)] - mean);
    const Eigen::MatrixXd M = N * A;
    return make_sym_point(M * M.transpose());
}

OrbitCloud orbit_points(const SymPoint& x0, int n, long p, int k, uint64_t cap, int threads) {
    if (x0.dim() != n) throw std::invalid_argument("orbit_points: basepoint dimension mismatch");
    if (k < 0) throw std::invalid_argument("orbit_points: k >= 0");
    OrbitCloud cloud;
    cloud.n = n;
    cloud.p = p;
    cloud.k = k;
    cloud.basepoint = x0;

    const int l = n * k;
    RawRepBuffer buf = collect_raw_reps(n, p, l, cap);
    const int64_t count = buf.size();

    std::vector<ReducedPoint> reduced(static_cast<size_t>(count));
    std::vector<Eigen::VectorXd> keys(static_cast<size_t>(count));
    parallel_chunks(count, threads, [&](int64_t, int64_t b, int64_t e) {
        Eigen::MatrixXd H(n, n);
        for (int64_t i = b; i < e; ++i) {
            hermite_as_double(buf, i, p, H);
            // gamma = H^T: gamma X gamma^T = H^T X H
            SymPoint img = make_sym_point(H.transpose() * x0.Y * H);
            ReducedPoint rp = reduce(img);
            keys[static_cast<size_t>(i)] = log_coords(rp.point);
            reduced[static_cast<size_t>(i)] = std::move(rp);
        }
    });

    std::vector<int64_t> order(static_cast<size_t>(count));
    for (int64_t i = 0; i < count; ++i) order[static_cast<size_t>(i)] = i;
    std::sort(order.begin(), order.end(), [&](int64_t a, int64_t b) {
        return key_less(keys[static_cast<size_t>(a)], keys[static_cast<size_t>(b)]);
    });

    // Window dedupe on the sorted keys: genuine collisions agree to float
    // noise, distinct orbit points are far apart.
    const double tol = cloud.dedupe_tolerance;
    for (int64_t idx : order) {
        const Eigen::VectorXd& key = keys[static_cast<size_t>(idx)];
        bool dup = false;
        for (int64_t j = static_cast<int64_t>(cloud.points.size()) - 1; j >= 0; --j) {
            if (cloud.keys[static_cast<size_t>(j)](0) < key(0) - tol) break;
            if (key_close(cloud.keys[static_cast<size_t>(j)], key, tol)) {
                dup = true;
                break;
            }
        }
        if (!dup) {
            cloud.points.push_back(reduced[static_cast<size_t>(idx)]);
            cloud.keys.push_back(key);
        }
    }
    return cloud;
}

PointIndex::PointIndex(const OrbitCloud& cloud, double eps)
    : cloud_(cloud), neighbors_(unimodular_neighbors(cloud.n)) {
    if (!(eps > 0.0)) throw std::invalid_argument("PointIndex: eps must be positive");
    cell_ = eps;
    dim_ = cloud.n * (cloud.n + 1) / 2;
    grid_.reserve(cloud.points.size() * 2 + 1);
    std::vector<int64_t> shift(static_cast<size_t>(dim_), 0);
    for (size_t i = 0; i < cloud.keys.size(); ++i)
        grid_[cell_hash(cloud.keys[i], shift)].push_back(static_cast<int32_t>(i));
}

uint64_t PointIndex::cell_hash(const Eigen::VectorXd& key, const std::vector<int64_t>& shift) const {
    uint64_t h = 0xcbf29ce484222325ULL;
    for (int i = 0; i < dim_; ++i) {
        const int64_t cell = static_cast<int64_t>(std::floor(key(i) / cell_)) + shift[static_cast<size_t>(i)];
        h ^= static_cast<uint64_t>(cell) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        h *= 0x100000001b3ULL;
    }
    return h;
}

void PointIndex::collect(const Eigen::VectorXd& key, double radius, std::vector<int32_t>& out) const {
    // Cells whose box could contain a key within `radius` in every
    // coordinate: floor((q +- r)/c) stays within ceil(r/c) cells of floor(q/c).
    const int span = static_cast<int>(std::ceil(radius / cell_));
    std::vector<int64_t> shift(static_cast<size_t>(dim_), -span);
    for (;;) {
        auto it = grid_.find(cell_hash(key, shift));
        if (it != grid_.end())
            for (int32_t id : it->second) out.push_back(id);
        int d = dim_ - 1;
        while (d >= 0) {
            if (++shift[static_cast<size_t>(d)] <= span) break;
            shift[static_cast<size_t>(d)] = -span;
            --d;
        }
        if (d < 0) break;
    }
}

bool PointIndex::any_within(const SymPoint& x_reduced, double eps) const {
    std::vector<int32_t> candidates;
    for (const auto& V : neighbors_) {
        const SymPoint xv{V * x_reduced.Y * V.transpose()};
        const Eigen::VectorXd key = log_coords(xv);
        candidates.clear();
        collect(key, eps, candidates);
        for (int32_t id : candidates) {
            if (distance(xv, cloud_.points[static_cast<size_t>(id)].point) <= eps) return true;
        }
    }
    return false;
}

double PointIndex::min_dist(const SymPoint& x_reduced) const {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& V : neighbors_) {
        const SymPoint xv{V * x_reduced.Y * V.transpose()};
        for (const auto& pt : cloud_.points) best = std::min(best, distance(xv, pt.point));
    }
    return best;
}

bool is_admissible(const SymPoint& x, const OrbitCloud& cloud, const PointIndex& index,
                   double epsilon, double metric_scale) {
    if (!(epsilon > 0.0)) throw std::invalid_argument("is_admissible: epsilon must be positive");
    const SymPoint xr = reduce(x).point;
    return index.any_within(xr, epsilon / metric_scale);
}

bool is_admissible(const SymPoint& x, const SymPoint& x0, double epsilon, int k, int n, long p,
                   uint64_t cap) {
    OrbitCloud cloud = orbit_points(x0, n, p, k, cap);
    PointIndex index(cloud, epsilon);
    return is_admissible(x, cloud, index, epsilon);
}

namespace {

ReducedPoint sample_halfplane(const Region& region, CounterRng& rng) {
    const double x = rng.next_in(-0.5, 0.5);
    const double a = std::sqrt(1.0 - x * x);
    // Inverse CDF of density 1/y^2 on [a, y_max].
    const double u = rng.next_double();
    const double y = 1.0 / (1.0 / a - u * (1.0 / a - 1.0 / region.y_max));
    return reduce(from_halfplane(x, y));
}

ReducedPoint sample_box(int n, const Region& region, CounterRng& rng) {
    // Diagonal part: independent truncated exponentials with rate 2(n-1-i)
    // (0-indexed), the Iwasawa density; the last coordinate balances the sum.
    std::vector<double> h(static_cast<size_t>(n), 0.0);
    double hsum = 0.0;
    for (int i = 0; i + 1 < n; ++i) {
        const auto [lo, hi] = region.h_bounds[static_cast<size_t>(i)];
        const double rate = 2.0 * (n - 1 - i);
        const double elo = std::exp(-rate * lo), ehi = std::exp(-rate * hi);
        const double u = rng.next_double();
        h[static_cast<size_t>(i)] = -std::log(elo - u * (elo - ehi)) / rate;
        hsum += h[static_cast<size_t>(i)];
    }
    h[static_cast<size_t>(n - 1)] = -hsum;

    Eigen::MatrixXd N = Eigen::MatrixXd::Identity(n, n);
    int s = 0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            const auto [lo, hi] = region.x_bounds[static_cast<size_t>(s++)];
            N(i, j) = rng.next_in(lo, hi);
        }
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) A(i, i) = std::exp(h[static_cast<size_t>(i)]);
    const Eigen::MatrixXd M = N * A;
    return reduce(make_sym_point(M * M.transpose()));
}

}  // namespace

std::vector<ReducedPoint> sample_region(int n, const Region& region, int64_t count, uint64_t seed,
                                        int threads) {
    if (count < 0) throw std::invalid_argument("sample_region: count >= 0");
    if (n != region.n) throw std::invalid_argument("sample_region: region dimension mismatch");
    if (n >= 3) {
        if (region.h_bounds.size() != static_cast<size_t>(n - 1) ||
            region.x_bounds.size() != static_cast<size_t>(n * (n - 1) / 2))
            throw std::invalid_argument("sample_region: malformed region bounds");
        for (const auto& [lo, hi] : region.h_bounds)
            if (!(lo < hi)) throw std::invalid_argument("sample_region: empty region");
        for (const auto& [lo, hi] : region.x_bounds)
            if (!(lo < hi)) throw std::invalid_argument("sample_region: empty region");
    }
    std::vector<ReducedPoint> out(static_cast<size_t>(count));
    parallel_chunks(count, threads, [&](int64_t, int64_t b, int64_t e) {
        for (int64_t i = b; i < e; ++i) {
            CounterRng rng(seed, static_cast<uint64_t>(i));
            out[static_cast<size_t>(i)] = (n == 2) ? sample_halfplane(region, rng)
                                                   : sample_box(n, region, rng);
        }
    });
    return out;
}

CoverageReport coverage_on_samples(const OrbitCloud& cloud, const std::vector<ReducedPoint>& xs,
                                   double epsilon, const SamplerConfig& config) {
    if (!(epsilon > 0.0)) throw std::invalid_argument("coverage: epsilon must be positive");
    PointIndex index(cloud, epsilon / config.metric_scale);
    std::vector<uint8_t> hit(xs.size(), 0);
    parallel_chunks(static_cast<int64_t>(xs.size()), config.threads, [&](int64_t, int64_t b, int64_t e) {
        for (int64_t i = b; i < e; ++i)
            hit[static_cast<size_t>(i)] =
                index.any_within(xs[static_cast<size_t>(i)].point, epsilon / config.metric_scale) ? 1 : 0;
    });
    CoverageReport rep;
    rep.n = cloud.n;
    rep.p = cloud.p;
    rep.k = cloud.k;
    rep.epsilon = epsilon;
    rep.region = config.region;
    rep.samples = static_cast<int64_t>(xs.size());
    rep.covered = 0;
    for (uint8_t h : hit) rep.covered += h;
    rep.fraction = xs.empty() ? 0.0 : static_cast<double>(rep.covered) / static_cast<double>(rep.samples);
    rep.std_error = xs.empty() ? 0.0
                               : std::sqrt(rep.fraction * (1.0 - rep.fraction) /
                                           static_cast<double>(rep.samples));
    rep.seed = config.seed;
    return rep;
}

CoverageReport coverage(const SymPoint& x0, int n, long p, int k, double epsilon,
                        const SamplerConfig& config) {
    OrbitCloud cloud = orbit_points(x0, n, p, k, config.cap, config.threads);
    const std::vector<ReducedPoint> xs =
        sample_region(n, config.region, config.samples, config.seed, config.threads);
    return coverage_on_samples(cloud, xs, epsilon, config);
}

}  // namespace heckelab
