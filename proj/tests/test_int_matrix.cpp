#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <functional>
#include <heckelab/int_matrix.hpp>
#include <heckelab/rng.hpp>

using namespace heckelab;

namespace {

// Independent oracle: 2x2 determinant by cofactor expansion.
mpz_class det2_oracle(const IntMatrix& m) {
    return m.at(0, 0) * m.at(1, 1) - m.at(0, 1) * m.at(1, 0);
}

// Independent oracle: d_1...d_k = gcd of all k x k minors.
mpz_class minor_gcd(const IntMatrix& m, int k) {
    const int n = m.dim();
    std::vector<int> rows(k), cols(k);
    mpz_class g = 0;

    std::function<void(int, int)> pick_cols = [&](int start, int depth) {
        if (depth == k) {
            IntMatrix sub(k);
            for (int i = 0; i < k; ++i)
                for (int j = 0; j < k; ++j) sub.at(i, j) = m.at(rows[i], cols[j]);
            mpz_class d = det(sub);
            mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), d.get_mpz_t());
            return;
        }
        for (int c = start; c < n; ++c) {
            cols[depth] = c;
            pick_cols(c + 1, depth + 1);
        }
    };
    std::function<void(int, int)> pick_rows = [&](int start, int depth) {
        if (depth == k) {
            pick_cols(0, 0);
            return;
        }
        for (int r = start; r < n; ++r) {
            rows[depth] = r;
            pick_rows(r + 1, depth + 1);
        }
    };
    pick_rows(0, 0);
    return g;
}

std::vector<mpz_class> snf_minor_oracle(const IntMatrix& m) {
    const int n = m.dim();
    std::vector<mpz_class> d(n);
    mpz_class prev = 1;
    for (int k = 1; k <= n; ++k) {
        mpz_class g = minor_gcd(m, k);
        d[k - 1] = g / prev;
        prev = g;
    }
    return d;
}

IntMatrix random_matrix(CounterRng& rng, int n, long lo, long hi) {
    IntMatrix m(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            m.at(i, j) = static_cast<long>(rng.next_below(static_cast<uint64_t>(hi - lo + 1))) + lo;
    return m;
}

// Random product of elementary unimodular matrices.
IntMatrix random_unimodular(CounterRng& rng, int n, int steps) {
    IntMatrix u = IntMatrix::identity(n);
    for (int s = 0; s < steps; ++s) {
        const int i = static_cast<int>(rng.next_below(static_cast<uint64_t>(n)));
        int j = static_cast<int>(rng.next_below(static_cast<uint64_t>(n - 1)));
        if (j >= i) ++j;
        const long c = static_cast<long>(rng.next_below(7)) - 3;
        // col j += c * col i
        for (int r = 0; r < n; ++r) u.at(r, j) += c * u.at(r, i);
    }
    return u;
}

bool is_hnf_canonical(const IntMatrix& h) {
    const int n = h.dim();
    for (int i = 0; i < n; ++i) {
        if (h.at(i, i) <= 0) return false;
        for (int j = 0; j < i; ++j)
            if (h.at(i, j) != 0) return false;
        for (int j = i + 1; j < n; ++j)
            if (h.at(i, j) < 0 || h.at(i, j) >= h.at(i, i)) return false;
    }
    return true;
}

}  // namespace

TEST_CASE("determinant: fixed cases") {
    CHECK(det(IntMatrix::identity(3)) == 1);
    CHECK(det(IntMatrix::from_rows({{1, 1}, {0, 4}})) == 4);
    CHECK(det(IntMatrix::from_rows({{2, 1}, {1, 2}})) == 3);
    CHECK(det(IntMatrix::from_rows({{2, 1}, {1, 2}})) ==
          det2_oracle(IntMatrix::from_rows({{2, 1}, {1, 2}})));
    CHECK(det(IntMatrix::from_rows({{1, 2}, {2, 4}})) == 0);
}

TEST_CASE("determinant: random 2x2 against cofactor oracle, and transpose invariance") {
    CounterRng rng(7, 0);
    for (int t = 0; t < 200; ++t) {
        IntMatrix m = random_matrix(rng, 2, -50, 50);
        CHECK(det(m) == det2_oracle(m));
    }
    for (int t = 0; t < 50; ++t) {
        IntMatrix m = random_matrix(rng, 4, -9, 9);
        CHECK(det(m) == det(m.transposed()));
    }
}

TEST_CASE("hnf_column: fixed cases") {
    CHECK(hnf_column(IntMatrix::from_rows({{1, 5}, {0, 2}})) ==
          IntMatrix::from_rows({{1, 0}, {0, 2}}));
    CHECK(hnf_column(IntMatrix::from_rows({{2, 0}, {0, 1}})) ==
          IntMatrix::from_rows({{2, 0}, {0, 1}}));
    CHECK(hnf_column(IntMatrix::from_rows({{0, 2}, {1, 0}})) ==
          IntMatrix::from_rows({{2, 0}, {0, 1}}));
    CHECK_THROWS_AS(hnf_column(IntMatrix::from_rows({{1, 2}, {2, 4}})), std::domain_error);
}

TEST_CASE("hnf_column: canonical form, idempotence, unimodular invariance") {
    CounterRng rng(11, 0);
    int done = 0;
    while (done < 120) {
        const int n = 2 + static_cast<int>(rng.next_below(3));
        IntMatrix m = random_matrix(rng, n, -12, 12);
        if (det(m) == 0) continue;
        ++done;
        IntMatrix h = hnf_column(m);
        CHECK(is_hnf_canonical(h));
        CHECK(hnf_column(h) == h);

        mpz_class dm = det(m);
        mpz_class dh = det(h);
        CHECK(dh == abs(dm));

        IntMatrix u = random_unimodular(rng, n, 6);
        CHECK(hnf_column(mul(m, u)) == h);
    }
}

TEST_CASE("snf: fixed cases and divisibility") {
    auto c1 = snf(IntMatrix::from_rows({{2, 0}, {0, 2}}));
    CHECK(c1.d == std::vector<mpz_class>{2, 2});

    auto c2 = snf(IntMatrix::from_rows({{1, 1}, {0, 4}}));
    CHECK(c2.d == std::vector<mpz_class>{1, 4});

    auto c3 = snf(IntMatrix::from_rows({{2, 0}, {0, 6}}));
    CHECK(c3.d == std::vector<mpz_class>{2, 6});

    CHECK_THROWS_AS(snf(IntMatrix::from_rows({{1, 2}, {2, 4}})), std::domain_error);
}

TEST_CASE("snf: random matrices against the minor-gcd oracle") {
    CounterRng rng(13, 0);
    int done = 0;
    while (done < 80) {
        const int n = 2 + static_cast<int>(rng.next_below(3));
        IntMatrix m = random_matrix(rng, n, -8, 8);
        if (det(m) == 0) continue;
        ++done;
        auto chain = snf(m);
        auto oracle = snf_minor_oracle(m);
        CHECK(chain.d == oracle);

        // divisibility chain and product identity
        mpz_class prod = 1;
        for (size_t i = 0; i < chain.d.size(); ++i) {
            CHECK(chain.d[i] > 0);
            if (i + 1 < chain.d.size()) CHECK(chain.d[i + 1] % chain.d[i] == 0);
            prod *= chain.d[i];
        }
        CHECK(prod == abs(det(m)));
    }
}

TEST_CASE("desk-scale extremes: n=5 and det = p^30") {
    CounterRng rng(19, 0);
    int done = 0;
    while (done < 20) {
        IntMatrix m = random_matrix(rng, 5, -6, 6);
        if (det(m) == 0) continue;
        ++done;
        IntMatrix h = hnf_column(m);
        CHECK(is_hnf_canonical(h));
        CHECK(hnf_column(mul(m, random_unimodular(rng, 5, 8))) == h);
        mpz_class prod = 1;
        for (const auto& d : snf(m).d) prod *= d;
        CHECK(prod == abs(det(m)));
    }

    mpz_class p30;
    mpz_ui_pow_ui(p30.get_mpz_t(), 3, 30);
    IntMatrix big = IntMatrix::identity(5);
    big.at(0, 0) = p30;
    big.at(0, 4) = p30 - 12345;
    CHECK(det(big) == p30);
    IntMatrix u = random_unimodular(rng, 5, 10);
    CHECK(det(mul(big, u)) * det(mul(big, u)) == p30 * p30);
    CHECK(hnf_column(mul(big, u)) == hnf_column(big));
    auto chain = snf(mul(big, u));
    mpz_class prod = 1;
    for (const auto& d : chain.d) prod *= d;
    CHECK(prod == p30);
}

TEST_CASE("snf: invariance under unimodular multiplication on both sides") {
    CounterRng rng(17, 0);
    int done = 0;
    while (done < 60) {
        const int n = 2 + static_cast<int>(rng.next_below(2));
        IntMatrix m = random_matrix(rng, n, -9, 9);
        if (det(m) == 0) continue;
        ++done;
        IntMatrix u = random_unimodular(rng, n, 5);
        IntMatrix v = random_unimodular(rng, n, 5);
        CHECK(snf(mul(u, m)).d == snf(m).d);
        CHECK(snf(mul(m, v)).d == snf(m).d);
        CHECK(snf(mul(u, mul(m, v))).d == snf(m).d);
    }
}
