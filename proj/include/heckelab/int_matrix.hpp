#pragma once

#include <gmpxx.h>

#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

namespace heckelab {

// Square matrix over Z with arbitrary-precision entries, row-major storage.
class IntMatrix {
public:
    IntMatrix() = default;
    explicit IntMatrix(int n) : n_(check_dim(n)), a_(static_cast<size_t>(n) * n, mpz_class(0)) {}

    static IntMatrix identity(int n);
    // Convenience constructor for literals in tests and small fixtures.
    static IntMatrix from_rows(std::initializer_list<std::initializer_list<long>> rows);

    int dim() const { return n_; }

    mpz_class& at(int i, int j) { return a_[static_cast<size_t>(i) * n_ + j]; }
    const mpz_class& at(int i, int j) const { return a_[static_cast<size_t>(i) * n_ + j]; }

    IntMatrix transposed() const;

    bool operator==(const IntMatrix& o) const { return n_ == o.n_ && a_ == o.a_; }
    bool operator!=(const IntMatrix& o) const { return !(*this == o); }

    // Row-major decimal strings, as used by the JSONL representative format.
    std::vector<std::string> to_decimal_strings() const;

private:
    static int check_dim(int n) {
        if (n < 1) throw std::invalid_argument("IntMatrix: dimension must be >= 1");
        return n;
    }
    int n_ = 0;
    std::vector<mpz_class> a_;
};

IntMatrix mul(const IntMatrix& a, const IntMatrix& b);

// Exact determinant (fraction-free Bareiss elimination).
mpz_class det(const IntMatrix& m);

// Column-style Hermite normal form: the unique H = M*U (U integer, det +-1)
// that is upper triangular with positive diagonal d_i and off-diagonal
// entries H[i][j], j > i, reduced into [0, d_i). H spans the same column
// lattice as M. Throws std::domain_error on singular input.
IntMatrix hnf_column(const IntMatrix& m);

// Elementary divisors d_1 | d_2 | ... | d_n, all positive.
struct DivisorChain {
    std::vector<mpz_class> d;
};

// Smith normal form divisor chain. Throws std::domain_error on singular input.
DivisorChain snf(const IntMatrix& m);

}  // namespace heckelab
