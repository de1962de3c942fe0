#pragma once

#include <complex>

namespace apcgl {

// Constants of the governed equation
//   du/dt = (alpha + i*beta) u_xx + gamma u + kappa u^degree.
// kappa is a free complex coefficient; the conventional dissipative choice
// is -(a + i*b).
struct CglParams {
    double alpha = 1.0;  // diffusion, > 0
    double beta = 0.0;   // dispersion, >= 0 (0 degenerates to a heat equation)
    double gamma = 0.0;  // linear gain, >= 0
    double a = 1.0;      // nonlinearity strength, > 0
    double b = 0.0;      // nonlinearity strength, >= 0
    int degree = 3;      // polynomial degree n >= 2
    std::complex<double> kappa{-1.0, 0.0};
};

std::complex<double> default_kappa(double a, double b);

// Throws std::invalid_argument naming the violated constraint.
void validate(const CglParams& p);

} // namespace apcgl
