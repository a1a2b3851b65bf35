#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

namespace heckelab {

inline constexpr double kDetTolerance = 1e-9;

// Point of the symmetric space: positive definite symmetric matrix of
// determinant one (the coset gK identified with g g^T).
struct SymPoint {
    Eigen::MatrixXd Y;
    int dim() const { return static_cast<int>(Y.rows()); }
};

// Symmetrizes, renormalizes the determinant to 1 and validates positivity.
SymPoint make_sym_point(Eigen::MatrixXd Y);

SymPoint from_group(const Eigen::MatrixXd& g);

// Geodesic distance for the trace-form metric: sqrt(sum log^2 eig(X^{-1}Y)).
double distance(const SymPoint& X, const SymPoint& Y);

// PGL-normalized action X -> (g X g^T) / det(g X g^T)^{1/n}.
SymPoint act(const Eigen::MatrixXd& gamma, const SymPoint& X);

using UnimodularMatrix = Eigen::Matrix<long long, Eigen::Dynamic, Eigen::Dynamic>;

struct ReducedPoint {
    SymPoint point;
    UnimodularMatrix reducer;  // U with U^T Y_original U = point.Y (up to tolerance)
};

// n=2: exact Gauss reduction to the modular fundamental domain.
// n>=3: LLL reduction (delta = 0.99) of Y as a quadratic form.
// Throws std::runtime_error when the iteration cap (10^4) is exceeded.
ReducedPoint reduce(const SymPoint& X);

// Short unimodular matrices used for quotient-distance search and the
// boundary identifications of the fundamental domain. Closed under inverse.
const std::vector<Eigen::MatrixXd>& unimodular_neighbors(int n);

// Upper bound on the quotient distance in SL_n(Z)\H^n: reduces both points
// and minimizes over the neighbor set (never larger than the distance of the
// given lifts).
double dist_in_X(const SymPoint& X, const SymPoint& Y);

struct BallVolumeEstimate {
    int n = 0;
    double epsilon = 0.0;
    double volume = 0.0;
    double std_error = 0.0;
    int64_t samples = 0;
};

// Monte Carlo volume of {Y : distance(I, Y) <= epsilon}: uniform sampling of
// the epsilon-ball in exponential coordinates weighted by the exact Jacobian
// prod_{i<j} sinh((s_i-s_j)/2) / ((s_i-s_j)/2).
BallVolumeEstimate ball_volume_estimate(int n, double epsilon, int64_t samples,
                                        uint64_t seed = 0, int threads = 0);

// n=2 coordinate chart: z = x+iy with Y = (1/y) [[x^2+y^2, x], [x, 1]].
struct HalfPlanePoint {
    double x = 0.0;
    double y = 1.0;
};
HalfPlanePoint to_halfplane(const SymPoint& X);
SymPoint from_halfplane(double x, double y);

// Coordinates of log(Y) flattened so that Euclidean distance between keys
// lower-bounds the geodesic distance (off-diagonals scaled by sqrt 2).
Eigen::VectorXd log_coords(const SymPoint& X);

}  // namespace heckelab
