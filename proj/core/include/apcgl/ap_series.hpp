#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "apcgl/grid_field.hpp"

namespace apcgl {

using Complex = std::complex<double>;

// Truncated coefficient sequence {a_j}, j = 1..M, of a series
// sum_j a_j exp(i*j*lambda*x) on the one-sided frequency lattice
// {j*lambda : j >= 1}.  There is no j = 0 (constant) mode.  Because
// products only raise indices, truncation at M is exact for every
// retained mode; no dealiasing is needed in coefficient space.
class ApSeries {
public:
    // All-zero series with M modes.
    ApSeries(double lambda, std::size_t modes);

    // coeffs[0] holds a_1, coeffs[M-1] holds a_M.
    ApSeries(double lambda, std::vector<Complex> coeffs);

    double lambda() const { return lambda_; }
    std::size_t modes() const { return coeffs_.size(); }

    // 1-based access, j in [1, M].
    const Complex& coeff(std::size_t j) const;
    void set_coeff(std::size_t j, Complex value);

    std::span<const Complex> coeffs() const { return coeffs_; }

    friend bool operator==(const ApSeries&, const ApSeries&) = default;

private:
    double lambda_;
    std::vector<Complex> coeffs_;
};

// sum_j |a_j|, accumulated with compensated summation.
double l1_norm(const ApSeries& u);

// sum_j a_j exp(i*j*lambda*x).
Complex evaluate(const ApSeries& u, double x);

/// Truncated Cauchy product: w_m = sum_{j+k=m, j,k>=1} u_j v_k.
/// Modes m <= M are exact (every contributing index is below m), w_1 = 0.
/// Requires matching lambda and M.
ApSeries cauchy_product(const ApSeries& u, const ApSeries& v);

/// n-fold power via iterated pairwise products; n >= 2.  The lowest
/// possibly-nonzero mode of the result is m = n.
ApSeries power(const ApSeries& u, int n);

/// Discrete Bohr mean (1/N) * sum_k u(x_k) exp(-i*j*lambda*x_k).
/// Pairing against exp(-i*j*lambda*x) plays the conjugation role; the
/// mean itself carries no conjugate.  Exact for band-limited fields.
/// Requires 1 <= j < N.
Complex bohr_coefficient(const GridField& samples, std::size_t j);

// JSON document {"lambda": float, "coeffs": [[re, im], ...]}; index j is
// position + 1.
std::string to_json_string(const ApSeries& u);
ApSeries ap_series_from_json(const std::string& text);

namespace detail {

// Vector-level kernels shared with the coefficient-space integrator.
// c[i] stores a_{i+1}.  out, u, v must have equal sizes; out must not
// alias u or v.
void convolve_truncated(std::span<const Complex> u, std::span<const Complex> v,
                        std::span<Complex> out);
void power_truncated(std::span<const Complex> u, int n, std::span<Complex> out);
double l1_norm(std::span<const Complex> c);

} // namespace detail

} // namespace apcgl
