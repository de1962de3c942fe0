#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace apcgl {

// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussLegendreRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

// Computed by Newton iteration on the Legendre recurrence; accurate to
// machine precision for the orders used here (n <= a few hundred).
GaussLegendreRule gauss_legendre(int n);

// Composite Gauss-Legendre integration of a complex-valued integrand
// over [lo, hi] with `panels` equal panels.
template <typename F>
std::complex<double> integrate_panels(F&& f, double lo, double hi, int panels,
                                      const GaussLegendreRule& rule) {
    const double width = (hi - lo) / panels;
    std::complex<double> acc{0.0, 0.0};
    for (int p = 0; p < panels; ++p) {
        const double a = lo + p * width;
        const double mid = a + 0.5 * width;
        const double half = 0.5 * width;
        std::complex<double> panel{0.0, 0.0};
        for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
            panel += rule.weights[q] * f(mid + half * rule.nodes[q]);
        }
        acc += half * panel;
    }
    return acc;
}

// Barycentric weights for polynomial interpolation through `nodes`
// (second-form barycentric formula).
std::vector<double> barycentric_weights(const std::vector<double>& nodes);

} // namespace apcgl
