#pragma once

#include <complex>
#include <optional>
#include <stdexcept>

#include "apcgl/ap_series.hpp"

namespace apcgl {

// Flow of dz/dt = kappa z^n, pointwise (closed form, used as an oracle)
// and in coefficient space (the canonical route).  In coefficient space
// the induced system da_m/dt = kappa [a^n]_m is lower triangular: mode m
// depends only on modes <= m - (n - 1), so modes below n are constant and
// truncation at M is exact for retained modes.

enum class FlowStatus { completed, blowup };

struct FlowResult {
    ApSeries state;
    FlowStatus status = FlowStatus::completed;
    // Present iff status == blowup; never exceeds the requested duration.
    std::optional<double> blowup_time;
};

struct ScalarFlowResult {
    std::complex<double> value{0.0, 0.0};
    FlowStatus status = FlowStatus::completed;
    std::optional<double> blowup_time;
};

// The closed form is declared invalid when the radicand path would cross
// the principal branch cut; callers fall back to the numeric flow.
struct ClosedFormError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// l1 threshold beyond which the coefficient flow declares blowup.
inline constexpr double kBlowupNormThreshold = 1e8;

// Modulus below which the closed-form radicand counts as having hit zero.
inline constexpr double kRadicandEps = 1e-12;

/// z(t) = z0 (1 - (n-1) kappa z0^{n-1} t)^{-1/(n-1)}, principal branch.
/// Reports blowup with the time at which the radicand modulus bottoms out
/// below kRadicandEps along [0, t].
ScalarFlowResult pointwise_flow(std::complex<double> z0, std::complex<double> kappa,
                                int n, double t);

// substeps = 0 picks default_substeps(t, l1_norm(u), n, |kappa|).
FlowResult coefficient_flow(const ApSeries& u, std::complex<double> kappa, int n,
                            double t, int substeps = 0);

/// Flow of dw/dt = 2 kappa w^n over duration h/2; by rescaling of the
/// autonomous field this equals coefficient_flow(u, kappa, n, h).  The
/// identity is asserted in tests, not assumed here.
FlowResult half_interval_flow(const ApSeries& u, std::complex<double> kappa, int n,
                              double h, int substeps = 0);

// ceil(64 * h * norm^{n-1} * |kappa|), at least 8: substep count scaled by
// the local Lipschitz size of the vector field.
int default_substeps(double h, double norm, int n, double kappa_mag);

} // namespace apcgl
