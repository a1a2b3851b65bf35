#include "heckelab/int_matrix.hpp"

#include <utility>

namespace heckelab {

IntMatrix IntMatrix::identity(int n) {
    IntMatrix m(n);
    for (int i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
}

IntMatrix IntMatrix::from_rows(std::initializer_list<std::initializer_list<long>> rows) {
    const int n = static_cast<int>(rows.size());
    IntMatrix m(n);
    int i = 0;
    for (const auto& row : rows) {
        if (static_cast<int>(row.size()) != n)
            throw std::invalid_argument("IntMatrix::from_rows: matrix must be square");
        int j = 0;
        for (long v : row) m.at(i, j++) = v;
        ++i;
    }
    return m;
}

IntMatrix IntMatrix::transposed() const {
    IntMatrix t(n_);
    for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j) t.at(j, i) = at(i, j);
    return t;
}

std::vector<std::string> IntMatrix::to_decimal_strings() const {
    std::vector<std::string> out;
    out.reserve(a_.size());
    for (const auto& v : a_) out.push_back(v.get_str());
    return out;
}

IntMatrix mul(const IntMatrix& a, const IntMatrix& b) {
    if (a.dim() != b.dim()) throw std::invalid_argument("mul: dimension mismatch");
    const int n = a.dim();
    IntMatrix c(n);
    mpz_class tmp;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            mpz_class s = 0;
            for (int k = 0; k < n; ++k) {
                tmp = a.at(i, k) * b.at(k, j);
                s += tmp;
            }
            c.at(i, j) = s;
        }
    return c;
}

mpz_class det(const IntMatrix& m) {
    const int n = m.dim();
    IntMatrix w = m;
    mpz_class prev_pivot = 1;
    int sign = 1;
    for (int k = 0; k + 1 < n; ++k) {
        if (w.at(k, k) == 0) {
            int piv = -1;
            for (int i = k + 1; i < n; ++i)
                if (w.at(i, k) != 0) {
                    piv = i;
                    break;
                }
            if (piv < 0) return 0;
            for (int j = 0; j < n; ++j) std::swap(w.at(k, j), w.at(piv, j));
            sign = -sign;
        }
        // Bareiss step: entries stay integral, division is exact.
        for (int i = k + 1; i < n; ++i) {
            for (int j = k + 1; j < n; ++j) {
                mpz_class num = w.at(i, j) * w.at(k, k) - w.at(i, k) * w.at(k, j);
                mpz_divexact(w.at(i, j).get_mpz_t(), num.get_mpz_t(), prev_pivot.get_mpz_t());
            }
            w.at(i, k) = 0;
        }
        prev_pivot = w.at(k, k);
    }
    mpz_class d = w.at(n - 1, n - 1);
    return sign > 0 ? d : mpz_class(-d);
}

namespace {

void negate_col(IntMatrix& h, int j) {
    for (int i = 0; i < h.dim(); ++i) h.at(i, j) = -h.at(i, j);
}

void swap_cols(IntMatrix& h, int j0, int j1) {
    for (int i = 0; i < h.dim(); ++i) std::swap(h.at(i, j0), h.at(i, j1));
}

// col j -= q * col jsrc
void submul_col(IntMatrix& h, int j, const mpz_class& q, int jsrc) {
    if (q == 0) return;
    for (int i = 0; i < h.dim(); ++i) h.at(i, j) -= q * h.at(i, jsrc);
}

}  // namespace

IntMatrix hnf_column(const IntMatrix& m) {
    const int n = m.dim();
    IntMatrix h = m;
    // Process pivot rows bottom-up; column operations preserve the column lattice.
    for (int i = n - 1; i >= 0; --i) {
        // Euclidean elimination across active columns 0..i until row i has a
        // single nonzero at column i.
        for (;;) {
            int jmin = -1;
            for (int j = 0; j <= i; ++j) {
                if (h.at(i, j) == 0) continue;
                if (jmin < 0 || mpz_cmpabs(h.at(i, j).get_mpz_t(), h.at(i, jmin).get_mpz_t()) < 0) jmin = j;
            }
            if (jmin < 0) throw std::domain_error("hnf_column: singular matrix");
            if (jmin != i) swap_cols(h, jmin, i);
            bool done = true;
            for (int j = 0; j < i; ++j) {
                if (h.at(i, j) == 0) continue;
                mpz_class q;
                mpz_fdiv_q(q.get_mpz_t(), h.at(i, j).get_mpz_t(), h.at(i, i).get_mpz_t());
                submul_col(h, j, q, i);
                if (h.at(i, j) != 0) done = false;
            }
            if (done) break;
        }
        if (h.at(i, i) < 0) negate_col(h, i);
        // Reduce this row's entries to the right of the pivot into [0, d_i).
        for (int j = i + 1; j < n; ++j) {
            mpz_class q;
            mpz_fdiv_q(q.get_mpz_t(), h.at(i, j).get_mpz_t(), h.at(i, i).get_mpz_t());
            submul_col(h, j, q, i);
        }
    }
    return h;
}

DivisorChain snf(const IntMatrix& m) {
    const int n = m.dim();
    IntMatrix w = m;
    for (int s = 0; s < n; ++s) {
        for (;;) {
            // Locate the minimal nonzero entry of the trailing block.
            int pi = -1, pj = -1;
            for (int i = s; i < n; ++i)
                for (int j = s; j < n; ++j) {
                    if (w.at(i, j) == 0) continue;
                    if (pi < 0 || mpz_cmpabs(w.at(i, j).get_mpz_t(), w.at(pi, pj).get_mpz_t()) < 0) {
                        pi = i;
                        pj = j;
                    }
                }
            if (pi < 0) throw std::domain_error("snf: singular matrix");
            if (pi != s)
                for (int j = 0; j < n; ++j) std::swap(w.at(s, j), w.at(pi, j));
            if (pj != s)
                for (int i = 0; i < n; ++i) std::swap(w.at(i, s), w.at(i, pj));

            bool clean = true;
            for (int i = s + 1; i < n; ++i) {
                if (w.at(i, s) == 0) continue;
                mpz_class q;
                mpz_fdiv_q(q.get_mpz_t(), w.at(i, s).get_mpz_t(), w.at(s, s).get_mpz_t());
                for (int j = s; j < n; ++j) w.at(i, j) -= q * w.at(s, j);
                if (w.at(i, s) != 0) clean = false;
            }
            for (int j = s + 1; j < n; ++j) {
                if (w.at(s, j) == 0) continue;
                mpz_class q;
                mpz_fdiv_q(q.get_mpz_t(), w.at(s, j).get_mpz_t(), w.at(s, s).get_mpz_t());
                for (int i = s; i < n; ++i) w.at(i, j) -= q * w.at(i, s);
                if (w.at(s, j) != 0) clean = false;
            }
            if (!clean) continue;

            // Pivot must divide the rest of the block; otherwise fold a bad
            // row in and rerun the elimination.
            int bi = -1, bj = -1;
            for (int i = s + 1; i < n && bi < 0; ++i)
                for (int j = s + 1; j < n; ++j)
                    if (w.at(i, j) % w.at(s, s) != 0) {
                        bi = i;
                        bj = j;
                        break;
                    }
            if (bi < 0) break;
            for (int j = s; j < n; ++j) w.at(s, j) += w.at(bi, j);
        }
        if (w.at(s, s) < 0)
            for (int j = 0; j < n; ++j) w.at(s, j) = -w.at(s, j);
    }
    DivisorChain chain;
    chain.d.reserve(n);
    for (int i = 0; i < n; ++i) chain.d.push_back(w.at(i, i));
    return chain;
}

}  // namespace heckelab
