#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "heckelab/hecke_enum.hpp"

namespace heckelab {

// Langlands parameter mu = (mu_1, ..., mu_n) in complex coordinates.
struct SpectralParam {
    std::vector<std::complex<double>> mu;

    int dim() const { return static_cast<int>(mu.size()); }
    bool is_pgl_normalized(double tol = 1e-12) const;
};

// Half sum of positive roots: ((n-1)/2, (n-3)/2, ..., -(n-1)/2).
std::vector<double> rho(int n);

// Distance from temperedness: max_i |Re mu_i|.
double theta(const SpectralParam& mu);

// chi_mu(diag(p^{v_1}, ..., p^{v_n})) = prod_i p^{-v_i mu_i}; the exponent is
// accumulated before a single exponentiation.
std::complex<double> chi(const SpectralParam& mu, const std::vector<int>& valuations, long p);

// Same for a real weight vector.
double chi_real(const std::vector<double>& weights, const std::vector<int>& valuations, long p);

// Spherical transform of the normalized indicator of the determinant-p^l
// layer: the average of chi_{mu+rho} over the Iwasawa diagonals of the left
// coset representatives. Evaluated per valuation pattern with its exact
// multiplicity.
std::complex<double> spherical_transform_h(int n, long p, int l, const SpectralParam& mu);

// Normalized Hecke eigenvalue: transform * coset count * p^{-l(n-1)/2}.
std::complex<double> hecke_eigenvalue_lambda(int n, long p, int l, const SpectralParam& mu);

// Independent cross-check: complete homogeneous symmetric polynomial
// h_l(alpha_1, ..., alpha_n) with alpha_i = p^{-mu_i}, summed monomial by
// monomial.
std::complex<double> symmetric_oracle(int n, long p, int l, const SpectralParam& mu);

// Spherical function at the double coset labeled by the partition: the
// chi_{mu+rho} average over that double coset's left cosets.
std::complex<double> spherical_function(int n, long p, const Partition& partition,
                                        const SpectralParam& mu, uint64_t cap = kDefaultRepCap);

// All weight-l double cosets in one enumeration pass; values match
// spherical_function per partition.
std::map<Partition, std::complex<double>> spherical_function_layer(
    int n, long p, int l, const SpectralParam& mu, uint64_t cap = kDefaultRepCap);

// Sorts coordinates to the dominant chamber (Re descending).
SpectralParam sort_to_dominant(const SpectralParam& mu);

struct SphericalBoundReport {
    double ratio = 0.0;
    double bound = 0.0;
    bool pass = false;
};

// Ratio |eta_mu(a)| / chi_{-rho(1-delta)+Re mu}(a) at the given double coset;
// mu must be dominant.
SphericalBoundReport spherical_decay_ratio(int n, long p, const Partition& partition,
                                           const SpectralParam& mu, double delta,
                                           double bound = 3.0, uint64_t cap = kDefaultRepCap);

}  // namespace heckelab
