#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>

#include "apcgl/ap_series.hpp"
#include "apcgl/cgl_params.hpp"

namespace apcgl {

// The semigroup of du/dt = (alpha + i*beta) u_xx + gamma u acts diagonally
// on lattice modes; each coefficient picks up the multiplier
// exp((-(j*lambda)^2 (alpha + i*beta) + gamma) t).  kernel_convolve_mode
// recomputes the same multiplier by numerically convolving the explicit
// heat-type kernel against a single mode and is kept as an independent
// cross-check of the closed form.

struct QuadratureError : std::runtime_error {
    QuadratureError(const std::string& what, double estimate)
        : std::runtime_error(what), estimated_error(estimate) {}
    double estimated_error;
};

// exp((-(j*lambda)^2 (alpha + i*beta) + gamma) * t).
std::complex<double> linear_multiplier(const CglParams& p, double lambda,
                                       std::size_t j, double t);

// Applies the semigroup for time t >= 0 (forward only; negative t throws).
ApSeries linear_step(const ApSeries& u, const CglParams& p, double t);

/// integral over R of exp(-a x^2 - b x + c) dx
///   = exp(b^2/(4a) + c) * sqrt(pi) / sqrt(a),  Re(a) > 0,
/// with the principal square root.
std::complex<double> gaussian_integral(std::complex<double> a,
                                       std::complex<double> b,
                                       std::complex<double> c);

/// Kernel G_t(x) = (4 pi t (alpha + i beta))^{-1/2}
///                 * exp(-x^2 / (4 t (alpha + i beta)) + gamma t), t > 0.
/// Its modulus is (4 pi t |alpha + i beta|)^{-1/2}
///                 * exp(-alpha x^2 / (4 t (alpha^2 + beta^2)) + gamma t).
std::complex<double> kernel_eval(const CglParams& p, double t, double x);

/// Quadrature of integral G_t(y) exp(-i j lambda y) dy over |y| <= R with
/// R = 10 * sqrt(2 t (alpha^2 + beta^2) / alpha); at that radius the
/// integrand modulus has decayed by exp(-50).  Composite Gauss-Legendre
/// panels are doubled until two successive refinements agree to `tol`;
/// failure to converge throws QuadratureError.
std::complex<double> kernel_convolve_mode(const CglParams& p, double t,
                                          std::size_t j, double lambda,
                                          double tol = 1e-9);

} // namespace apcgl
