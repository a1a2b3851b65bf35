#include "heckelab/spherical.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace heckelab {

namespace {

void check_mu(int n, const SpectralParam& mu) {
    if (mu.dim() != n) throw std::invalid_argument("spectral parameter has wrong dimension");
}

}  // namespace

bool SpectralParam::is_pgl_normalized(double tol) const {
    std::complex<double> s(0.0, 0.0);
    for (const auto& m : mu) s += m;
    return std::abs(s) < tol;
}

std::vector<double> rho(int n) {
    if (n < 1) throw std::invalid_argument("rho: n >= 1");
    std::vector<double> r(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) r[static_cast<size_t>(i)] = (n - 1 - 2 * i) / 2.0;
    return r;
}

double theta(const SpectralParam& mu) {
    double t = 0.0;
    for (const auto& m : mu.mu) t = std::max(t, std::abs(m.real()));
    return t;
}

std::complex<double> chi(const SpectralParam& mu, const std::vector<int>& valuations, long p) {
    if (mu.mu.size() != valuations.size())
        throw std::invalid_argument("chi: dimension mismatch");
    std::complex<double> w(0.0, 0.0);
    for (size_t i = 0; i < valuations.size(); ++i)
        w += static_cast<double>(valuations[i]) * mu.mu[i];
    return std::exp(-std::log(static_cast<double>(p)) * w);
}

double chi_real(const std::vector<double>& weights, const std::vector<int>& valuations, long p) {
    if (weights.size() != valuations.size()) throw std::invalid_argument("chi_real: dimension mismatch");
    double w = 0.0;
    for (size_t i = 0; i < valuations.size(); ++i)
        w += static_cast<double>(valuations[i]) * weights[i];
    return std::exp(-std::log(static_cast<double>(p)) * w);
}

std::complex<double> spherical_transform_h(int n, long p, int l, const SpectralParam& mu) {
    check_mu(n, mu);
    if (l < 0) throw std::invalid_argument("spherical_transform_h: l >= 0");
    const double logp = std::log(static_cast<double>(p));
    const auto r = rho(n);
    std::complex<double> sum(0.0, 0.0);
    double total = 0.0;
    for_each_valuation_pattern(n, l, [&](const std::vector<int>& v) {
        // multiplicity p^{sum v_i (n-1-i)} folded into the exponent
        long mult_exp = 0;
        std::complex<double> w(0.0, 0.0);
        for (int i = 0; i < n; ++i) {
            mult_exp += static_cast<long>(v[static_cast<size_t>(i)]) * (n - 1 - i);
            w += static_cast<double>(v[static_cast<size_t>(i)]) *
                 (mu.mu[static_cast<size_t>(i)] + r[static_cast<size_t>(i)]);
        }
        sum += std::exp(logp * (static_cast<double>(mult_exp) - w));
        total += std::exp(logp * static_cast<double>(mult_exp));
    });
    return sum / total;
}

std::complex<double> hecke_eigenvalue_lambda(int n, long p, int l, const SpectralParam& mu) {
    const std::complex<double> h = spherical_transform_h(n, p, l, mu);
    const double count = coset_count(n, p, l).get_d();
    const double norm = std::exp(-0.5 * l * (n - 1) * std::log(static_cast<double>(p)));
    return h * count * norm;
}

std::complex<double> symmetric_oracle(int n, long p, int l, const SpectralParam& mu) {
    check_mu(n, mu);
    if (l < 0) throw std::invalid_argument("symmetric_oracle: l >= 0");
    const double logp = std::log(static_cast<double>(p));
    std::vector<std::complex<double>> alpha(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) alpha[static_cast<size_t>(i)] = std::exp(-logp * mu.mu[static_cast<size_t>(i)]);
    std::complex<double> sum(0.0, 0.0);
    for_each_valuation_pattern(n, l, [&](const std::vector<int>& k) {
        std::complex<double> term(1.0, 0.0);
        for (int i = 0; i < n; ++i)
            for (int e = 0; e < k[static_cast<size_t>(i)]; ++e) term *= alpha[static_cast<size_t>(i)];
        sum += term;
    });
    return sum;
}

std::complex<double> spherical_function(int n, long p, const Partition& partition,
                                        const SpectralParam& mu, uint64_t cap) {
    check_mu(n, mu);
    const int l = partition.weight();
    SpectralParam shifted = mu;
    const auto r = rho(n);
    for (int i = 0; i < n; ++i) shifted.mu[static_cast<size_t>(i)] += r[static_cast<size_t>(i)];
    std::complex<double> sum(0.0, 0.0);
    uint64_t count = 0;
    for_each_coset(
        n, p, l,
        [&](const CosetRep& rep) {
            if (partition_of(rep) == partition) {
                sum += chi(shifted, rep.diag_valuations, p);
                ++count;
            }
        },
        cap);
    if (count == 0) throw std::invalid_argument("spherical_function: empty double coset label");
    return sum / static_cast<double>(count);
}

std::map<Partition, std::complex<double>> spherical_function_layer(int n, long p, int l,
                                                                   const SpectralParam& mu,
                                                                   uint64_t cap) {
    check_mu(n, mu);
    SpectralParam shifted = mu;
    const auto r = rho(n);
    for (int i = 0; i < n; ++i) shifted.mu[static_cast<size_t>(i)] += r[static_cast<size_t>(i)];
    struct Acc {
        std::complex<double> sum{0.0, 0.0};
        uint64_t count = 0;
    };
    std::map<Partition, Acc> acc;
    for_each_coset(
        n, p, l,
        [&](const CosetRep& rep) {
            Acc& a = acc[partition_of(rep)];
            a.sum += chi(shifted, rep.diag_valuations, p);
            a.count += 1;
        },
        cap);
    std::map<Partition, std::complex<double>> out;
    for (const auto& [part, a] : acc) out[part] = a.sum / static_cast<double>(a.count);
    return out;
}

SpectralParam sort_to_dominant(const SpectralParam& mu) {
    SpectralParam out = mu;
    std::stable_sort(out.mu.begin(), out.mu.end(),
                     [](const std::complex<double>& a, const std::complex<double>& b) {
                         return a.real() > b.real();
                     });
    return out;
}

SphericalBoundReport spherical_decay_ratio(int n, long p, const Partition& partition,
                                           const SpectralParam& mu, double delta, double bound,
                                           uint64_t cap) {
    check_mu(n, mu);
    for (size_t i = 0; i + 1 < mu.mu.size(); ++i)
        if (mu.mu[i].real() < mu.mu[i + 1].real() - 1e-12)
            throw std::invalid_argument("spherical_decay_ratio: mu must be dominant (sort it first)");
    const auto r = rho(n);
    std::vector<double> w(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i)
        w[static_cast<size_t>(i)] = -(1.0 - delta) * r[static_cast<size_t>(i)] + mu.mu[static_cast<size_t>(i)].real();
    const double denom = chi_real(w, partition.parts, p);
    const double num = std::abs(spherical_function(n, p, partition, mu, cap));
    SphericalBoundReport rep;
    rep.ratio = num / denom;
    rep.bound = bound;
    rep.pass = rep.ratio <= bound;
    return rep;
}

}  // namespace heckelab
