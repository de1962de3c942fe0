#include "apcgl/cgl_params.hpp"

#include <stdexcept>

namespace apcgl {

std::complex<double> default_kappa(double a, double b) {
    return {-a, -b};
}

void validate(const CglParams& p) {
    if (!(p.alpha > 0.0)) {
        throw std::invalid_argument("CglParams: alpha must be > 0");
    }
    if (!(p.beta >= 0.0)) {
        throw std::invalid_argument("CglParams: beta must be >= 0");
    }
    if (!(p.gamma >= 0.0)) {
        throw std::invalid_argument("CglParams: gamma must be >= 0");
    }
    if (!(p.a > 0.0)) {
        throw std::invalid_argument("CglParams: a must be > 0");
    }
    if (!(p.b >= 0.0)) {
        throw std::invalid_argument("CglParams: b must be >= 0");
    }
    if (p.degree < 2) {
        throw std::invalid_argument("CglParams: degree must be >= 2");
    }
}

} // namespace apcgl
