#include "apcgl/linear_propagator.hpp"

#include <cmath>
#include <numbers>

#include "apcgl/quadrature.hpp"

namespace apcgl {

std::complex<double> linear_multiplier(const CglParams& p, double lambda,
                                       std::size_t j, double t) {
    const double freq = static_cast<double>(j) * lambda;
    const std::complex<double> rate{-freq * freq * p.alpha + p.gamma,
                                    -freq * freq * p.beta};
    return std::exp(rate * t);
}

ApSeries linear_step(const ApSeries& u, const CglParams& p, double t) {
    validate(p);
    if (t < 0.0) {
        throw std::invalid_argument("linear_step: the semigroup is forward-only");
    }
    if (t == 0.0) {
        return u;
    }
    std::vector<Complex> out(u.modes());
    for (std::size_t j = 1; j <= u.modes(); ++j) {
        out[j - 1] = u.coeff(j) * linear_multiplier(p, u.lambda(), j, t);
    }
    return ApSeries(u.lambda(), std::move(out));
}

std::complex<double> gaussian_integral(std::complex<double> a,
                                       std::complex<double> b,
                                       std::complex<double> c) {
    if (!(a.real() > 0.0)) {
        throw std::domain_error("gaussian_integral: requires Re(a) > 0");
    }
    return std::exp(b * b / (4.0 * a) + c) * std::sqrt(std::numbers::pi) /
           std::sqrt(a);
}

std::complex<double> kernel_eval(const CglParams& p, double t, double x) {
    validate(p);
    if (!(t > 0.0)) {
        throw std::invalid_argument("kernel_eval: requires t > 0");
    }
    const std::complex<double> diff{p.alpha, p.beta};
    const std::complex<double> denom = 4.0 * t * diff;
    // Principal roots throughout; t > 0 keeps denom in the right half-plane.
    return std::exp(-x * x / denom + p.gamma * t) /
           std::sqrt(4.0 * std::numbers::pi * t * diff);
}

std::complex<double> kernel_convolve_mode(const CglParams& p, double t,
                                          std::size_t j, double lambda,
                                          double tol) {
    validate(p);
    if (!(t > 0.0)) {
        throw std::invalid_argument("kernel_convolve_mode: requires t > 0");
    }
    if (j < 1) {
        throw std::invalid_argument("kernel_convolve_mode: requires j >= 1");
    }
    if (!(lambda > 0.0)) {
        throw std::invalid_argument("kernel_convolve_mode: requires lambda > 0");
    }
    // |G_t(y)| ~ exp(-alpha y^2 / (4 t (alpha^2+beta^2))): at radius
    // 10 * sqrt(2 t (alpha^2+beta^2)/alpha) the modulus is down by e^{-50}.
    const double mod2 = p.alpha * p.alpha + p.beta * p.beta;
    const double radius = 10.0 * std::sqrt(2.0 * t * mod2 / p.alpha);
    const double freq = static_cast<double>(j) * lambda;

    const auto integrand = [&](double y) {
        return kernel_eval(p, t, y) * std::polar(1.0, -freq * y);
    };

    static const GaussLegendreRule rule = gauss_legendre(16);
    std::complex<double> previous{0.0, 0.0};
    bool have_previous = false;
    double error = 0.0;
    for (int panels = 8; panels <= 4096; panels *= 2) {
        const std::complex<double> current =
            integrate_panels(integrand, -radius, radius, panels, rule);
        if (have_previous) {
            error = std::abs(current - previous);
            if (error <= tol * std::max(1.0, std::abs(current))) {
                return current;
            }
        }
        previous = current;
        have_previous = true;
    }
    throw QuadratureError("kernel_convolve_mode: quadrature did not converge",
                          error);
}

} // namespace apcgl
