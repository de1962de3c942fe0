#include "apcgl/csv.hpp"

#include <cstdio>

namespace apcgl {

std::string csv_number(double value) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    return buf;
}

} // namespace apcgl
