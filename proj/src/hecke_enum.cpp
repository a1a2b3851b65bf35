#include "heckelab/hecke_enum.hpp"

namespace heckelab {

namespace {

void check_args(int n, long p, int l) {
    if (n < 2) throw std::invalid_argument("hecke_enum: need n >= 2");
    if (l < 0) throw std::invalid_argument("hecke_enum: need l >= 0");
    if (p < 2) throw std::invalid_argument("hecke_enum: p must be a prime >= 2");
    for (long d = 2; d * d <= p; ++d)
        if (p % d == 0) throw std::invalid_argument("hecke_enum: p must be prime");
}

// Valuation patterns (v_0..v_{n-1}), sum l, in decreasing lexicographic
// order: v_0 runs l..0, then recursively on the tail.
bool next_pattern(std::vector<int>& v, int l) {
    const int n = static_cast<int>(v.size());
    // Find rightmost index (below the last slot) that can still give one unit
    // to the suffix.
    for (int i = n - 2; i >= 0; --i) {
        if (v[i] == 0) continue;
        // Decrement v[i]; the freed units plus everything right of i restart
        // in decreasing-lex order (all mass as far left as possible).
        int freed = 1;
        for (int j = i + 1; j < n; ++j) {
            freed += v[j];
            v[j] = 0;
        }
        v[i] -= 1;
        v[i + 1] = freed;
        // Decreasing-lex restart of the suffix: mass goes to v[i+1].
        return true;
    }
    (void)l;
    return false;
}

void first_pattern(std::vector<int>& v, int l) {
    std::fill(v.begin(), v.end(), 0);
    v[0] = l;
}

}  // namespace

void for_each_valuation_pattern(int n, int l,
                                const std::function<void(const std::vector<int>&)>& fn) {
    if (n < 1 || l < 0) throw std::invalid_argument("for_each_valuation_pattern: bad arguments");
    std::vector<int> v(n);
    first_pattern(v, l);
    do {
        fn(v);
    } while (next_pattern(v, l));
}

mpz_class coset_count(int n, long p, int l) {
    check_args(n, p, l);
    mpz_class total = 0;
    for_each_valuation_pattern(n, l, [&](const std::vector<int>& v) {
        long exp = 0;
        for (int i = 0; i < n; ++i) exp += static_cast<long>(v[i]) * (n - 1 - i);
        mpz_class members;
        mpz_ui_pow_ui(members.get_mpz_t(), static_cast<unsigned long>(p),
                      static_cast<unsigned long>(exp));
        total += members;
    });
    return total;
}

void for_each_coset_raw(int n, long p, int l,
                        const std::function<void(const int*, const int64_t*)>& fn,
                        uint64_t cap) {
    check_args(n, p, l);
    mpz_class total = coset_count(n, p, l);
    if (total > cap) throw CapExceededError(total, cap);

    const int noff = n * (n - 1) / 2;
    std::vector<int> v(n);
    std::vector<int64_t> off(noff, 0);
    std::vector<int64_t> radix(noff, 1);  // p^{v_i} per off-diagonal slot
    first_pattern(v, l);
    do {
        int s = 0;
        for (int i = 0; i < n; ++i) {
            int64_t r = 1;
            for (int e = 0; e < v[i]; ++e) r *= p;
            for (int j = i + 1; j < n; ++j) radix[s++] = r;
        }
        std::fill(off.begin(), off.end(), 0);
        for (;;) {
            fn(v.data(), off.data());
            int pos = noff - 1;
            while (pos >= 0) {
                if (++off[pos] < radix[pos]) break;
                off[pos] = 0;
                --pos;
            }
            if (pos < 0) break;
        }
    } while (next_pattern(v, l));
}

void for_each_coset(int n, long p, int l, const std::function<void(const CosetRep&)>& fn,
                    uint64_t cap) {
    const int noff = n * (n - 1) / 2;
    (void)noff;
    for_each_coset_raw(
        n, p, l,
        [&](const int* v, const int64_t* off) {
            CosetRep rep;
            rep.p = p;
            rep.l = l;
            rep.diag_valuations.assign(v, v + n);
            rep.matrix = IntMatrix(n);
            int s = 0;
            for (int i = 0; i < n; ++i) {
                mpz_class d;
                mpz_ui_pow_ui(d.get_mpz_t(), static_cast<unsigned long>(p),
                              static_cast<unsigned long>(v[i]));
                rep.matrix.at(i, i) = d;
                for (int j = i + 1; j < n; ++j) rep.matrix.at(i, j) = off[s++];
            }
            fn(rep);
        },
        cap);
}

std::vector<CosetRep> enumerate_cosets(int n, long p, int l, uint64_t cap) {
    std::vector<CosetRep> out;
    for_each_coset(
        n, p, l, [&](const CosetRep& rep) { out.push_back(rep); }, cap);
    return out;
}

Partition partition_of(const CosetRep& rep) {
    DivisorChain chain = snf(rep.matrix);
    Partition part;
    part.parts.reserve(chain.d.size());
    mpz_class pz(rep.p);
    for (const auto& d : chain.d) {
        mpz_class stripped;
        auto val = mpz_remove(stripped.get_mpz_t(), d.get_mpz_t(), pz.get_mpz_t());
        if (stripped != 1)
            throw std::domain_error("partition_of: elementary divisor is not a power of p");
        part.parts.push_back(static_cast<int>(val));
    }
    return part;
}

std::map<Partition, uint64_t> partition_buckets(int n, long p, int l, uint64_t cap) {
    std::map<Partition, uint64_t> buckets;
    for_each_coset(
        n, p, l, [&](const CosetRep& rep) { buckets[partition_of(rep)] += 1; }, cap);
    return buckets;
}

uint64_t double_coset_size(int n, long p, const Partition& partition, uint64_t cap) {
    if (partition.parts.size() != static_cast<size_t>(n))
        throw std::invalid_argument("double_coset_size: partition length must equal n");
    for (size_t i = 0; i + 1 < partition.parts.size(); ++i)
        if (partition.parts[i] > partition.parts[i + 1])
            throw std::invalid_argument("double_coset_size: partition must be weakly increasing");
    if (!partition.parts.empty() && partition.parts.front() < 0)
        throw std::invalid_argument("double_coset_size: partition must be non-negative");
    auto buckets = partition_buckets(n, p, partition.weight(), cap);
    auto it = buckets.find(partition);
    return it == buckets.end() ? 0 : it->second;
}

OrbitRepSet enumerate_orbit_reps(int n, long p, int l, uint64_t cap) {
    OrbitRepSet set;
    set.n = n;
    set.p = p;
    set.l = l;
    for_each_coset(
        n, p, l, [&](const CosetRep& rep) { set.reps.push_back(rep.matrix.transposed()); }, cap);
    return set;
}

RatMatrix::RatMatrix(const IntMatrix& A, long p, int s) : RatMatrix(A.dim()) {
    mpz_class den;
    mpz_ui_pow_ui(den.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(s));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            mpq_class q(A.at(i, j), den);
            q.canonicalize();
            at(i, j) = q;
        }
}

int height(const RatMatrix& g, long p) {
    if (g.n < 1) throw std::invalid_argument("height: empty matrix");
    mpz_class pz(p);
    long k = 0;
    for (const auto& q : g.a) {
        mpz_class den = q.get_den();  // canonical, positive
        if (den == 1) continue;
        mpz_class stripped;
        auto val = mpz_remove(stripped.get_mpz_t(), den.get_mpz_t(), pz.get_mpz_t());
        if (stripped != 1)
            throw std::invalid_argument("height: denominator divisible by a prime other than p");
        if (static_cast<long>(val) > k) k = static_cast<long>(val);
    }
    return static_cast<int>(k);
}

}  // namespace heckelab
