#pragma once

#include <string>

namespace apcgl {

// Decimal rendering with 17 significant digits: doubles round-trip exactly,
// so regression baselines can be compared byte for byte.
std::string csv_number(double value);

} // namespace apcgl
