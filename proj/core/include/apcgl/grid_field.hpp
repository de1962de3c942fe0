#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace apcgl {

// Complex samples of a field on one period [0, 2*pi/lambda), at
// x_k = 2*pi*k / (lambda*N).  N is kept a power of two so the discrete
// spectrum is cheap to compute.  No conjugate symmetry is assumed: the
// fields of interest have one-sided spectra.
class GridField {
public:
    GridField(double lambda, std::vector<std::complex<double>> values);

    double lambda() const { return lambda_; }
    std::size_t size() const { return values_.size(); }
    const std::vector<std::complex<double>>& values() const { return values_; }
    std::vector<std::complex<double>>& values() { return values_; }

    // Sample abscissa x_k = 2*pi*k / (lambda*N).
    double x(std::size_t k) const;

private:
    double lambda_;
    std::vector<std::complex<double>> values_;
};

bool is_power_of_two(std::size_t n);

} // namespace apcgl
