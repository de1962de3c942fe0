#include "apcgl/grid_field.hpp"

#include <numbers>
#include <stdexcept>

namespace apcgl {

bool is_power_of_two(std::size_t n) {
    return n != 0 && (n & (n - 1)) == 0;
}

GridField::GridField(double lambda, std::vector<std::complex<double>> values)
    : lambda_(lambda), values_(std::move(values)) {
    if (!(lambda_ > 0.0)) {
        throw std::invalid_argument("GridField: lambda must be positive");
    }
    if (!is_power_of_two(values_.size())) {
        throw std::invalid_argument("GridField: sample count must be a power of two");
    }
}

double GridField::x(std::size_t k) const {
    return 2.0 * std::numbers::pi * static_cast<double>(k) /
           (lambda_ * static_cast<double>(values_.size()));
}

} // namespace apcgl
