#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <heckelab/int_matrix.hpp>
#include <heckelab/rng.hpp>
#include <heckelab/symspace.hpp>

using namespace heckelab;

namespace {

// QR-sampled: Haar rotation times a bounded diagonal, so the draws stay
// well-conditioned.
Eigen::MatrixXd random_sl(CounterRng& rng, int n) {
    Eigen::MatrixXd g(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) g(i, j) = rng.next_normal();
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
    Eigen::MatrixXd q = qr.householderQ();
    if (q.determinant() < 0) q.col(0) *= -1.0;
    Eigen::VectorXd t(n);
    double mean = 0.0;
    for (int i = 0; i < n; ++i) {
        t(i) = rng.next_in(-0.8, 0.8);
        mean += t(i) / n;
    }
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) a(i, i) = std::exp(t(i) - mean);
    return q * a;
}

SymPoint random_point(CounterRng& rng, int n) { return from_group(random_sl(rng, n)); }

mpz_class reducer_det(const UnimodularMatrix& u) {
    const int n = static_cast<int>(u.rows());
    IntMatrix m(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m.at(i, j) = static_cast<long>(u(i, j));
    return det(m);
}

}  // namespace

TEST_CASE("from_group: basepoint, diagonal, rotation invariance, rejection") {
    CHECK((from_group(Eigen::MatrixXd::Identity(2, 2)).Y -
           Eigen::MatrixXd::Identity(2, 2)).norm() < 1e-14);

    Eigen::MatrixXd d(2, 2);
    d << 2, 0, 0, 0.5;
    Eigen::MatrixXd expect(2, 2);
    expect << 4, 0, 0, 0.25;
    CHECK((from_group(d).Y - expect).norm() < 1e-12);

    const double a = 0.7;
    Eigen::MatrixXd rot(2, 2);
    rot << std::cos(a), -std::sin(a), std::sin(a), std::cos(a);
    CHECK((from_group(rot).Y - Eigen::MatrixXd::Identity(2, 2)).norm() < 1e-12);

    Eigen::MatrixXd bad(2, 2);
    bad << 2, 0, 0, 1;
    CHECK_THROWS_AS(from_group(bad), std::domain_error);
}

TEST_CASE("distance: non-positive-definite inputs rejected") {
    SymPoint I2 = from_group(Eigen::MatrixXd::Identity(2, 2));
    Eigen::MatrixXd bad(2, 2);
    bad << 1, 0, 0, -1;
    CHECK_THROWS_AS(distance(SymPoint{bad}, I2), std::domain_error);
    CHECK_THROWS_AS(make_sym_point(bad), std::domain_error);
}

TEST_CASE("distance: fixed values and symmetry") {
    SymPoint I2 = from_group(Eigen::MatrixXd::Identity(2, 2));
    CHECK(distance(I2, I2) == doctest::Approx(0.0));

    Eigen::MatrixXd Y(2, 2);
    Y << std::exp(2.0), 0, 0, std::exp(-2.0);
    SymPoint pt{Y};
    CHECK(distance(I2, pt) == doctest::Approx(2.0 * std::sqrt(2.0)));

    CounterRng rng(3, 0);
    for (int t = 0; t < 40; ++t) {
        const int n = 2 + t % 2;
        SymPoint X = random_point(rng, n);
        SymPoint Z = random_point(rng, n);
        CHECK(distance(X, Z) == doctest::Approx(distance(Z, X)).epsilon(1e-10));
    }
}

TEST_CASE("distance: invariance under 100 random group elements (n = 2, 3)") {
    CounterRng rng(5, 0);
    for (int n : {2, 3}) {
        for (int t = 0; t < 100; ++t) {
            SymPoint X = random_point(rng, n);
            SymPoint Y = random_point(rng, n);
            Eigen::MatrixXd g = random_sl(rng, n);
            const double before = distance(X, Y);
            const double after = distance(act(g, X), act(g, Y));
            CHECK(std::abs(before - after) <= 1e-8 * std::max(1.0, before));
        }
    }
}

TEST_CASE("distance: triangle inequality on random triples") {
    CounterRng rng(7, 0);
    for (int t = 0; t < 60; ++t) {
        const int n = 2 + t % 2;
        SymPoint X = random_point(rng, n);
        SymPoint Y = random_point(rng, n);
        SymPoint Z = random_point(rng, n);
        CHECK(distance(X, Z) <= distance(X, Y) + distance(Y, Z) + 1e-8);
    }
}

TEST_CASE("act: identity, diagonal, functoriality, rejection") {
    SymPoint I2 = from_group(Eigen::MatrixXd::Identity(2, 2));
    CHECK((act(Eigen::MatrixXd::Identity(2, 2), I2).Y - I2.Y).norm() < 1e-14);

    for (double p : {2.0, 3.0}) {
        Eigen::MatrixXd gam(2, 2);
        gam << p, 0, 0, 1;
        Eigen::MatrixXd expect(2, 2);
        expect << p, 0, 0, 1.0 / p;
        CHECK((act(gam, I2).Y - expect).norm() < 1e-12);
    }

    CounterRng rng(11, 0);
    for (int t = 0; t < 30; ++t) {
        const int n = 2 + t % 2;
        SymPoint X = random_point(rng, n);
        Eigen::MatrixXd g1 = random_sl(rng, n);
        Eigen::MatrixXd g2 = random_sl(rng, n);
        const double diff = (act(g1 * g2, X).Y - act(g1, act(g2, X)).Y).norm();
        CHECK(diff < 1e-9 * std::max(1.0, act(g1 * g2, X).Y.norm()));
    }

    CHECK_THROWS_AS(act(Eigen::MatrixXd::Zero(2, 2), I2), std::domain_error);
}

TEST_CASE("halfplane round-trip") {
    CounterRng rng(13, 0);
    for (int t = 0; t < 100; ++t) {
        const double x = rng.next_in(-3.0, 3.0);
        const double y = std::exp(rng.next_in(-2.0, 2.0));
        const HalfPlanePoint back = to_halfplane(from_halfplane(x, y));
        CHECK(std::abs(back.x - x) < 1e-10);
        CHECK(std::abs(back.y - y) < 1e-10);
    }
}

TEST_CASE("reduce (n=2): domain membership, reducer bookkeeping, fixed points") {
    // interior fixed point
    SymPoint zi = from_halfplane(0.0, 1.0);
    ReducedPoint rzi = reduce(zi);
    CHECK((rzi.point.Y - zi.Y).norm() < 1e-12);
    CHECK(rzi.reducer(0, 0) == 1);
    CHECK(rzi.reducer(0, 1) == 0);
    CHECK(rzi.reducer(1, 0) == 0);
    CHECK(rzi.reducer(1, 1) == 1);

    // documented example: z = 5.3 + 0.8i translates by -5 and then inverts
    // as needed until in-domain
    SymPoint far = from_halfplane(5.3, 0.8);
    ReducedPoint rfar = reduce(far);
    HalfPlanePoint z = to_halfplane(rfar.point);
    CHECK(std::abs(z.x) <= 0.5 + 1e-9);
    CHECK(z.x * z.x + z.y * z.y >= 1.0 - 1e-9);

    CounterRng rng(17, 0);
    for (int t = 0; t < 200; ++t) {
        SymPoint X = from_halfplane(rng.next_in(-8.0, 8.0), std::exp(rng.next_in(-2.5, 1.5)));
        ReducedPoint r = reduce(X);
        HalfPlanePoint w = to_halfplane(r.point);
        CHECK(std::abs(w.x) <= 0.5 + 1e-9);
        CHECK(w.x * w.x + w.y * w.y >= 1.0 - 1e-9);
        CHECK(reducer_det(r.reducer) * reducer_det(r.reducer) == 1);

        // U^T Y U = Y_reduced
        Eigen::MatrixXd U = r.reducer.cast<double>();
        CHECK((U.transpose() * X.Y * U - r.point.Y).norm() < 1e-8);

        // orbit preserved
        CHECK(dist_in_X(X, r.point) <= 1e-8);
    }
}

TEST_CASE("reduce (n=3): unimodular reducer, orbit preservation, stability") {
    CounterRng rng(19, 0);
    for (int t = 0; t < 60; ++t) {
        SymPoint X = random_point(rng, 3);
        ReducedPoint r = reduce(X);
        CHECK(reducer_det(r.reducer) * reducer_det(r.reducer) == 1);
        Eigen::MatrixXd U = r.reducer.cast<double>();
        CHECK((U.transpose() * X.Y * U - r.point.Y).norm() < 1e-8);
        CHECK(dist_in_X(X, r.point) <= 1e-8);

        // reducing a reduced point is the identity operation
        ReducedPoint again = reduce(r.point);
        CHECK((again.point.Y - r.point.Y).norm() < 1e-10);
        CHECK((again.reducer - UnimodularMatrix::Identity(3, 3)).cwiseAbs().maxCoeff() == 0);
    }
}

TEST_CASE("dist_in_X: coincidence, boundary identification, upper-bound contract") {
    SymPoint a = from_halfplane(0.21, 1.4);
    CHECK(dist_in_X(a, a) == doctest::Approx(0.0));

    // identified edge pair z and -conj(z)
    SymPoint left = from_halfplane(-0.5, 1.27);
    SymPoint right = from_halfplane(0.5, 1.27);
    CHECK(dist_in_X(left, right) <= 1e-6);

    CounterRng rng(23, 0);
    for (int t = 0; t < 50; ++t) {
        const int n = 2 + t % 2;
        SymPoint X = random_point(rng, n);
        SymPoint Y = random_point(rng, n);
        CHECK(dist_in_X(X, Y) <= distance(X, Y) + 1e-12);
    }
}

TEST_CASE("log coordinates lower-bound the geodesic distance") {
    CounterRng rng(29, 0);
    for (int t = 0; t < 80; ++t) {
        const int n = 2 + t % 2;
        SymPoint X = random_point(rng, n);
        SymPoint Y = random_point(rng, n);
        const double key_dist = (log_coords(X) - log_coords(Y)).norm();
        CHECK(key_dist <= distance(X, Y) + 1e-9);
    }
}

TEST_CASE("ball volume: n=2 closed form, edge cases") {
    // exact volume under the trace-form metric: 4 pi (cosh(eps/sqrt 2) - 1)
    for (double eps : {0.25, 0.5, 1.0}) {
        auto est = ball_volume_estimate(2, eps, 40000, 12345);
        const double exact = 4.0 * M_PI * (std::cosh(eps / std::sqrt(2.0)) - 1.0);
        CHECK(std::abs(est.volume - exact) <= std::max(4.0 * est.std_error, 0.01 * exact));
    }

    // small-radius regime: volume/eps^2 approaches the euclidean disc constant
    auto small = ball_volume_estimate(2, 0.1, 40000, 9);
    CHECK(std::abs(small.volume / (0.1 * 0.1) - M_PI) < 0.02);

    auto zero = ball_volume_estimate(2, 0.0, 5000, 1);
    CHECK(zero.volume == 0.0);

    CHECK_THROWS_AS(ball_volume_estimate(2, 0.5, 100, 1), std::invalid_argument);
    CHECK_THROWS_AS(ball_volume_estimate(2, 1.5, 5000, 1), std::invalid_argument);
}

TEST_CASE("ball volume: log-log slope recovers the dimension") {
    for (int n : {2, 3}) {
        const double d_expect = (n + 2) * (n - 1) / 2.0;
        std::vector<double> eps{0.4, 0.2, 0.1};
        std::vector<double> lv, le;
        for (double e : eps) {
            auto est = ball_volume_estimate(n, e, 30000, 777);
            lv.push_back(std::log(est.volume));
            le.push_back(std::log(e));
        }
        double xm = 0, ym = 0;
        for (size_t i = 0; i < eps.size(); ++i) {
            xm += le[i] / eps.size();
            ym += lv[i] / eps.size();
        }
        double sxx = 0, sxy = 0;
        for (size_t i = 0; i < eps.size(); ++i) {
            sxx += (le[i] - xm) * (le[i] - xm);
            sxy += (le[i] - xm) * (lv[i] - ym);
        }
        const double slope = sxy / sxx;
        CHECK(std::abs(slope - d_expect) <= 0.1 * d_expect);
    }
}
