#include "heckelab/symspace.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

#include "heckelab/parallel.hpp"
#include "heckelab/rng.hpp"

namespace heckelab {

namespace {

constexpr int kReduceIterationCap = 10'000;

double sinhc_half(double delta) {
    // sinh(delta/2) / (delta/2), stable near zero
    const double u = 0.5 * delta;
    if (std::abs(u) < 1e-6) return 1.0 + u * u / 6.0;
    return std::sinh(u) / u;
}

}  // namespace

SymPoint make_sym_point(Eigen::MatrixXd Y) {
    if (Y.rows() != Y.cols() || Y.rows() < 2)
        throw std::invalid_argument("make_sym_point: need a square matrix, n >= 2");
    Y = ((Y + Y.transpose()) * 0.5).eval();
    const int n = static_cast<int>(Y.rows());
    const double d = Y.determinant();
    if (!(d > 1e-300)) throw std::domain_error("make_sym_point: determinant not positive");
    Y *= std::pow(d, -1.0 / n);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Y, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success || es.eigenvalues().minCoeff() <= 0.0)
        throw std::domain_error("make_sym_point: matrix is not positive definite");
    return SymPoint{std::move(Y)};
}

SymPoint from_group(const Eigen::MatrixXd& g) {
    if (g.rows() != g.cols()) throw std::invalid_argument("from_group: matrix must be square");
    const double d = std::abs(g.determinant());
    if (std::abs(d - 1.0) > kDetTolerance)
        throw std::domain_error("from_group: |det g| must be 1 within tolerance");
    return make_sym_point(g * g.transpose());
}

double distance(const SymPoint& X, const SymPoint& Y) {
    if (X.dim() != Y.dim()) throw std::invalid_argument("distance: dimension mismatch");
    // The generalized solver leaves failures of the whitening side undetected.
    Eigen::LLT<Eigen::MatrixXd> llt(X.Y);
    if (llt.info() != Eigen::Success)
        throw std::domain_error("distance: inputs must be positive definite");
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> ges(Y.Y, X.Y,
                                                                  Eigen::EigenvaluesOnly | Eigen::Ax_lBx);
    if (ges.info() != Eigen::Success)
        throw std::domain_error("distance: generalized eigensolve failed (inputs not SPD?)");
    double s = 0.0;
    for (int i = 0; i < X.dim(); ++i) {
        const double lam = ges.eigenvalues()(i);
        if (!(lam > 0.0)) throw std::domain_error("distance: inputs must be positive definite");
        const double t = std::log(lam);
        s += t * t;
    }
    return std::sqrt(s);
}

SymPoint act(const Eigen::MatrixXd& gamma, const SymPoint& X) {
    if (gamma.rows() != gamma.cols() || gamma.rows() != X.dim())
        throw std::invalid_argument("act: dimension mismatch");
    if (std::abs(gamma.determinant()) < 1e-12) throw std::domain_error("act: singular gamma");
    return make_sym_point(gamma * X.Y * gamma.transpose());
}

HalfPlanePoint to_halfplane(const SymPoint& X) {
    if (X.dim() != 2) throw std::invalid_argument("to_halfplane: n must be 2");
    const double y = 1.0 / X.Y(1, 1);
    return HalfPlanePoint{X.Y(0, 1) * y, y};
}

SymPoint from_halfplane(double x, double y) {
    if (!(y > 0.0)) throw std::invalid_argument("from_halfplane: y must be positive");
    Eigen::MatrixXd Y(2, 2);
    Y << (x * x + y * y) / y, x / y, x / y, 1.0 / y;
    return SymPoint{Y};
}

namespace {

ReducedPoint reduce2(const SymPoint& X) {
    HalfPlanePoint z = to_halfplane(X);
    // g accumulates the moves applied to the point: Y -> g Y g^T.
    long long g00 = 1, g01 = 0, g10 = 0, g11 = 1;
    int iter = 0;
    for (;;) {
        if (++iter > kReduceIterationCap)
            throw std::runtime_error("reduce: iteration cap exceeded (point degenerate near the cusp)");
        const double m = std::nearbyint(z.x);
        if (m != 0.0) {
            z.x -= m;
            const long long mi = static_cast<long long>(m);
            // left-multiply g by [[1,-m],[0,1]]
            g00 -= mi * g10;
            g01 -= mi * g11;
        }
        const double norm2 = z.x * z.x + z.y * z.y;
        if (norm2 >= 1.0 - 1e-15) break;
        // invert: z -> -1/z, g <- S g with S = [[0,-1],[1,0]]
        z = HalfPlanePoint{-z.x / norm2, z.y / norm2};
        const long long t0 = g00, t1 = g01;
        g00 = -g10;
        g01 = -g11;
        g10 = t0;
        g11 = t1;
    }
    ReducedPoint out;
    // Rebuild the point from the exact integer moves in a single product so
    // per-step float drift does not accumulate.
    Eigen::MatrixXd G(2, 2);
    G << static_cast<double>(g00), static_cast<double>(g01), static_cast<double>(g10),
        static_cast<double>(g11);
    out.point = make_sym_point(G * X.Y * G.transpose());
    out.reducer = UnimodularMatrix(2, 2);
    // U^T Y U = Y_reduced with Y_reduced = g Y g^T, so U = g^T.
    out.reducer << g00, g10, g01, g11;
    return out;
}

// Gram-matrix LLL with parameter delta; returns U with U^T G U reduced.
UnimodularMatrix lll_reduce(const Eigen::MatrixXd& G0, double delta) {
    const int n = static_cast<int>(G0.rows());
    Eigen::MatrixXd U = Eigen::MatrixXd::Identity(n, n);
    Eigen::MatrixXd G = G0;

    Eigen::MatrixXd mu = Eigen::MatrixXd::Zero(n, n);
    Eigen::VectorXd B = Eigen::VectorXd::Zero(n);
    auto gso = [&] {
        // Gram-Schmidt data straight from the Gram matrix.
        for (int i = 0; i < n; ++i) {
            double b = G(i, i);
            for (int j = 0; j < i; ++j) {
                double m = G(i, j);
                for (int t = 0; t < j; ++t) m -= mu(i, t) * mu(j, t) * B(t);
                mu(i, j) = m / B(j);
                b -= mu(i, j) * mu(i, j) * B(j);
            }
            B(i) = b;
        }
    };
    auto refresh = [&] { G = U.transpose() * G0 * U; };

    gso();
    int k = 1;
    int iter = 0;
    while (k < n) {
        if (++iter > kReduceIterationCap) throw std::runtime_error("reduce: LLL iteration cap exceeded");
        for (int j = k - 1; j >= 0; --j) {
            const double q = std::nearbyint(mu(k, j));
            if (q != 0.0) {
                U.col(k) -= q * U.col(j);
                refresh();
                gso();
            }
        }
        if (B(k) >= (delta - mu(k, k - 1) * mu(k, k - 1)) * B(k - 1)) {
            ++k;
        } else {
            U.col(k).swap(U.col(k - 1));
            refresh();
            gso();
            k = std::max(k - 1, 1);
        }
    }
    UnimodularMatrix Ui(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) Ui(i, j) = static_cast<long long>(std::nearbyint(U(i, j)));
    return Ui;
}

}  // namespace

ReducedPoint reduce(const SymPoint& X) {
    if (X.dim() == 2) return reduce2(X);
    UnimodularMatrix Ui = lll_reduce(X.Y, 0.99);
    Eigen::MatrixXd Ud = Ui.cast<double>();
    ReducedPoint out;
    out.point = make_sym_point(Ud.transpose() * X.Y * Ud);
    out.reducer = std::move(Ui);
    return out;
}

const std::vector<Eigen::MatrixXd>& unimodular_neighbors(int n) {
    static std::map<int, std::vector<Eigen::MatrixXd>> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;

    std::vector<Eigen::MatrixXd> gens;
    gens.push_back(Eigen::MatrixXd::Identity(n, n));
    if (n == 2) {
        Eigen::MatrixXd T(2, 2), Tinv(2, 2), S(2, 2);
        T << 1, 1, 0, 1;
        Tinv << 1, -1, 0, 1;
        S << 0, -1, 1, 0;
        gens.push_back(T);
        gens.push_back(Tinv);
        gens.push_back(S);
    } else {
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                if (i == j) continue;
                for (int s : {1, -1}) {
                    Eigen::MatrixXd E = Eigen::MatrixXd::Identity(n, n);
                    E(i, j) = s;
                    gens.push_back(E);
                }
            }
    }
    // Close under products of two generators (covers corner identifications)
    // and under transpose and inverse, so applying members as V Y V^T from
    // either side of a pair searches the same candidate set.
    std::vector<Eigen::MatrixXd> set;
    auto push_unique = [&](const Eigen::MatrixXd& M) {
        for (const auto& A : set)
            if ((A - M).cwiseAbs().maxCoeff() < 0.5) return;
        set.push_back(M);
    };
    if (n == 2) {
        for (const auto& a : gens)
            for (const auto& b : gens) push_unique(a * b);
    } else {
        for (const auto& a : gens) push_unique(a);
    }
    for (size_t i = 0; i < set.size(); ++i) {
        const Eigen::MatrixXd M = set[i];
        push_unique(M.transpose());
        push_unique(M.inverse());
    }
    auto [pos, inserted] = cache.emplace(n, std::move(set));
    (void)inserted;
    return pos->second;
}

double dist_in_X(const SymPoint& X, const SymPoint& Y) {
    double best = distance(X, Y);
    const SymPoint xr = reduce(X).point;
    const SymPoint yr = reduce(Y).point;
    for (const auto& V : unimodular_neighbors(X.dim())) {
        const SymPoint xv{V * xr.Y * V.transpose()};
        const double d = distance(xv, yr);
        if (d < best) best = d;
    }
    return best;
}

Eigen::VectorXd log_coords(const SymPoint& X) {
    const int n = X.dim();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(X.Y);
    if (es.info() != Eigen::Success) throw std::domain_error("log_coords: eigensolve failed");
    Eigen::VectorXd lv = es.eigenvalues();
    for (int i = 0; i < n; ++i) {
        if (!(lv(i) > 0.0)) throw std::domain_error("log_coords: matrix not positive definite");
        lv(i) = std::log(lv(i));
    }
    const Eigen::MatrixXd L = es.eigenvectors() * lv.asDiagonal() * es.eigenvectors().transpose();
    Eigen::VectorXd key(n * (n + 1) / 2);
    static const double kSqrt2 = std::sqrt(2.0);
    int s = 0;
    for (int i = 0; i < n; ++i) key(s++) = L(i, i);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) key(s++) = kSqrt2 * L(i, j);
    return key;
}

BallVolumeEstimate ball_volume_estimate(int n, double epsilon, int64_t samples, uint64_t seed,
                                        int threads) {
    if (n < 2) throw std::invalid_argument("ball_volume_estimate: n >= 2");
    if (epsilon < 0.0 || epsilon > 1.0)
        throw std::invalid_argument("ball_volume_estimate: epsilon must lie in [0, 1]");
    BallVolumeEstimate out;
    out.n = n;
    out.epsilon = epsilon;
    out.samples = samples;
    if (epsilon == 0.0) return out;
    if (samples < 1000) throw std::invalid_argument("ball_volume_estimate: need samples >= 1000");

    const int d = (n + 2) * (n - 1) / 2;
    const double ball_vol = std::pow(M_PI, d / 2.0) / std::tgamma(d / 2.0 + 1.0) * std::pow(epsilon, d);

    // Orthonormal basis of the traceless symmetric tangent space.
    std::vector<Eigen::MatrixXd> basis;
    for (int k = 1; k < n; ++k) {
        Eigen::MatrixXd D = Eigen::MatrixXd::Zero(n, n);
        const double norm = std::sqrt(static_cast<double>(k) * (k + 1));
        for (int i = 0; i < k; ++i) D(i, i) = 1.0 / norm;
        D(k, k) = -static_cast<double>(k) / norm;
        basis.push_back(D);
    }
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            Eigen::MatrixXd E = Eigen::MatrixXd::Zero(n, n);
            E(i, j) = E(j, i) = 1.0 / std::sqrt(2.0);
            basis.push_back(E);
        }

    const int64_t nchunks = (samples + 4095) / 4096;
    std::vector<double> sum_j(static_cast<size_t>(nchunks), 0.0);
    std::vector<double> sum_j2(static_cast<size_t>(nchunks), 0.0);
    parallel_chunks(samples, threads, [&](int64_t c, int64_t b, int64_t e) {
        double sj = 0.0, sj2 = 0.0;
        Eigen::VectorXd gs(d);
        Eigen::MatrixXd S(n, n);
        for (int64_t i = b; i < e; ++i) {
            CounterRng rng(seed, static_cast<uint64_t>(i));
            for (int t = 0; t < d; ++t) gs(t) = rng.next_normal();
            const double r = epsilon * std::pow(rng.next_double(), 1.0 / d);
            gs *= r / gs.norm();
            S.setZero();
            for (int t = 0; t < d; ++t) S += gs(t) * basis[static_cast<size_t>(t)];
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S, Eigen::EigenvaluesOnly);
            double jac = 1.0;
            for (int a = 0; a < n; ++a)
                for (int b2 = a + 1; b2 < n; ++b2)
                    jac *= sinhc_half(es.eigenvalues()(b2) - es.eigenvalues()(a));
            sj += jac;
            sj2 += jac * jac;
        }
        sum_j[static_cast<size_t>(c)] = sj;
        sum_j2[static_cast<size_t>(c)] = sj2;
    });
    double tj = 0.0, tj2 = 0.0;
    for (int64_t c = 0; c < nchunks; ++c) {
        tj += sum_j[static_cast<size_t>(c)];
        tj2 += sum_j2[static_cast<size_t>(c)];
    }
    const double mean = tj / static_cast<double>(samples);
    const double var = std::max(0.0, tj2 / static_cast<double>(samples) - mean * mean);
    out.volume = ball_vol * mean;
    out.std_error = ball_vol * std::sqrt(var / static_cast<double>(samples));
    return out;
}

}  // namespace heckelab
