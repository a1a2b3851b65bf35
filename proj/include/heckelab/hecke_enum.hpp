#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <stdexcept>
#include <vector>

#include "heckelab/int_matrix.hpp"

namespace heckelab {

inline constexpr uint64_t kDefaultRepCap = 10'000'000;

// Raised when an enumeration would exceed the representative cap; carries the
// exact count so callers can report it.
class CapExceededError : public std::runtime_error {
public:
    CapExceededError(mpz_class count, uint64_t cap)
        : std::runtime_error("representative count " + count.get_str() + " exceeds cap " +
                             std::to_string(cap)),
          count_(std::move(count)),
          cap_(cap) {}
    const mpz_class& count() const { return count_; }
    uint64_t cap() const { return cap_; }

private:
    mpz_class count_;
    uint64_t cap_;
};

// Weakly increasing tuple (l_1 <= ... <= l_n) indexing a K-double-coset of
// determinant-p^l matrices; weight is the sum.
struct Partition {
    std::vector<int> parts;

    int weight() const {
        int w = 0;
        for (int v : parts) w += v;
        return w;
    }
    bool operator==(const Partition& o) const { return parts == o.parts; }
    bool operator<(const Partition& o) const { return parts < o.parts; }
};

// One left K-coset of the determinant-p^l layer: upper-triangular Hermite
// form with p-power diagonal, row-i off-diagonals in [0, p^{v_i}).
struct CosetRep {
    IntMatrix matrix;
    long p = 0;
    int l = 0;
    std::vector<int> diag_valuations;
};

struct OrbitRepSet {
    int n = 0;
    long p = 0;
    int l = 0;
    std::vector<IntMatrix> reps;  // transposed-Hermite convention
};

// Number of left K-cosets of the determinant-p^l layer: sum over diagonal
// valuation patterns (v_0..v_{n-1}) of prod_i p^{v_i (n-1-i)}.
mpz_class coset_count(int n, long p, int l);

// Diagonal valuation patterns (v_0..v_{n-1}) >= 0 with sum l, in decreasing
// lexicographic order. The same iteration backs the enumeration order and the
// character sums.
void for_each_valuation_pattern(int n, int l, const std::function<void(const std::vector<int>&)>& fn);

// Streaming enumeration in deterministic order: valuation patterns in
// decreasing lexicographic order, off-diagonal digits odometer-ascending.
// fn(diag_valuations[n], offdiag[n(n-1)/2]) with off-diagonals row-major.
// Off-diagonal values fit int64 whenever the count passes the cap check.
void for_each_coset_raw(int n, long p, int l,
                        const std::function<void(const int*, const int64_t*)>& fn,
                        uint64_t cap = kDefaultRepCap);

void for_each_coset(int n, long p, int l, const std::function<void(const CosetRep&)>& fn,
                    uint64_t cap = kDefaultRepCap);

std::vector<CosetRep> enumerate_cosets(int n, long p, int l, uint64_t cap = kDefaultRepCap);

// Double-coset label: p-valuations of the elementary divisors, increasing.
Partition partition_of(const CosetRep& rep);

// Bucket the full determinant-p^l layer by double coset.
std::map<Partition, uint64_t> partition_buckets(int n, long p, int l,
                                                uint64_t cap = kDefaultRepCap);

uint64_t double_coset_size(int n, long p, const Partition& partition,
                           uint64_t cap = kDefaultRepCap);

// Representatives of the opposite quotient (unimodular acting on the left),
// obtained by transposing the Hermite representatives.
OrbitRepSet enumerate_orbit_reps(int n, long p, int l, uint64_t cap = kDefaultRepCap);

// Square matrix over Q, used for the height function.
struct RatMatrix {
    int n = 0;
    std::vector<mpq_class> a;

    RatMatrix() = default;
    explicit RatMatrix(int dim) : n(dim), a(static_cast<size_t>(dim) * dim, mpq_class(0)) {}
    // A / p^s
    RatMatrix(const IntMatrix& A, long p, int s);

    mpq_class& at(int i, int j) { return a[static_cast<size_t>(i) * n + j]; }
    const mpq_class& at(int i, int j) const { return a[static_cast<size_t>(i) * n + j]; }
};

// Minimal k such that p^k * g has integer entries. Rejects entries whose
// denominator is divisible by a prime other than p.
int height(const RatMatrix& g, long p);

}  // namespace heckelab
