#include "apcgl/nonlinear_flow.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace apcgl {

namespace {

using Vec = std::vector<Complex>;

bool all_finite(const Vec& v) {
    for (const Complex& z : v) {
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
            return false;
        }
    }
    return true;
}

Complex pow_int(Complex z, int n) {
    Complex acc{1.0, 0.0};
    for (int k = 0; k < n; ++k) {
        acc *= z;
    }
    return acc;
}

// Classical RK4 on da/dt = kappa_eff * a^n (truncated).  Returns the blowup
// time if the state leaves the admissible region, otherwise nullopt.
std::optional<double> rk4_power_flow(Vec& y, Complex kappa_eff, int n,
                                     double duration, int substeps) {
    const std::size_t m = y.size();
    const double dt = duration / substeps;
    Vec k1(m), k2(m), k3(m), k4(m), stage(m), pw(m);

    const auto field = [&](const Vec& state, Vec& out) {
        detail::power_truncated(state, n, pw);
        for (std::size_t i = 0; i < m; ++i) {
            out[i] = kappa_eff * pw[i];
        }
    };

    for (int step = 0; step < substeps; ++step) {
        field(y, k1);
        for (std::size_t i = 0; i < m; ++i) stage[i] = y[i] + 0.5 * dt * k1[i];
        field(stage, k2);
        for (std::size_t i = 0; i < m; ++i) stage[i] = y[i] + 0.5 * dt * k2[i];
        field(stage, k3);
        for (std::size_t i = 0; i < m; ++i) stage[i] = y[i] + dt * k3[i];
        field(stage, k4);
        Vec candidate = y;
        for (std::size_t i = 0; i < m; ++i) {
            candidate[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        const double t_reached = std::min((step + 1) * dt, duration);
        if (!all_finite(candidate)) {
            return t_reached; // y keeps the last finite state
        }
        y.swap(candidate);
        if (detail::l1_norm(y) > kBlowupNormThreshold) {
            return t_reached;
        }
    }
    return std::nullopt;
}

FlowResult run_flow(const ApSeries& u, Complex kappa_eff, int n, double duration,
                    int substeps, double reported_scale) {
    Vec y(u.coeffs().begin(), u.coeffs().end());
    const auto blow = rk4_power_flow(y, kappa_eff, n, duration, substeps);
    FlowResult result{ApSeries(u.lambda(), std::move(y)), FlowStatus::completed, {}};
    if (blow) {
        result.status = FlowStatus::blowup;
        // Report on the caller's clock (the half-interval form runs on a
        // rescaled internal clock).
        result.blowup_time = *blow * reported_scale;
    }
    return result;
}

} // namespace

int default_substeps(double h, double norm, int n, double kappa_mag) {
    // Capped: once the state is racing toward the blowup threshold extra
    // substeps only delay its detection.
    const double scale = 64.0 * h * std::pow(norm, n - 1) * kappa_mag;
    const double capped = std::min(scale, 4096.0);
    return std::max(8, static_cast<int>(std::ceil(capped)));
}

ScalarFlowResult pointwise_flow(Complex z0, Complex kappa, int n, double t) {
    if (n < 2) {
        throw std::invalid_argument("pointwise_flow: degree must be >= 2");
    }
    if (t < 0.0) {
        throw std::invalid_argument("pointwise_flow: requires t >= 0");
    }
    if (z0 == Complex{0.0, 0.0} || t == 0.0) {
        return {z0, FlowStatus::completed, {}};
    }
    // Radicand path w(s) = 1 + d s with d = -(n-1) kappa z0^{n-1}.
    const Complex d = -static_cast<double>(n - 1) * kappa * pow_int(z0, n - 1);
    if (std::abs(d) == 0.0) {
        return {z0, FlowStatus::completed, {}};
    }
    const double s_min =
        std::clamp(-d.real() / std::norm(d), 0.0, t);
    const Complex w_min = 1.0 + d * s_min;
    if (std::abs(w_min) < kRadicandEps) {
        const double inf = std::numeric_limits<double>::infinity();
        return {Complex{inf, inf}, FlowStatus::blowup, s_min};
    }
    const Complex w_end = 1.0 + d * t;
    // Starting from w(0) = 1, the straight path can only reach the negative
    // real axis through (near) zero, which the blowup check above catches;
    // anything else indicates the closed form left its validity region.
    if (d.imag() == 0.0 && w_end.real() < 0.0) {
        throw ClosedFormError("pointwise_flow: radicand crossed the branch cut");
    }
    const Complex z =
        z0 * std::pow(w_end, -1.0 / static_cast<double>(n - 1));
    return {z, FlowStatus::completed, {}};
}

FlowResult coefficient_flow(const ApSeries& u, Complex kappa, int n, double t,
                            int substeps) {
    if (n < 2) {
        throw std::invalid_argument("coefficient_flow: degree must be >= 2");
    }
    if (t < 0.0) {
        throw std::invalid_argument("coefficient_flow: requires t >= 0");
    }
    if (substeps < 0) {
        throw std::invalid_argument("coefficient_flow: substeps must be >= 0");
    }
    if (t == 0.0) {
        return {u, FlowStatus::completed, {}};
    }
    if (substeps == 0) {
        substeps = default_substeps(t, l1_norm(u), n, std::abs(kappa));
    }
    return run_flow(u, kappa, n, t, substeps, 1.0);
}

FlowResult half_interval_flow(const ApSeries& u, Complex kappa, int n, double h,
                              int substeps) {
    if (n < 2) {
        throw std::invalid_argument("half_interval_flow: degree must be >= 2");
    }
    if (h < 0.0) {
        throw std::invalid_argument("half_interval_flow: requires h >= 0");
    }
    if (h == 0.0) {
        return {u, FlowStatus::completed, {}};
    }
    if (substeps == 0) {
        // Same default as the equivalent F-over-h flow so the rescaling
        // identity holds with matched substep counts.
        substeps = default_substeps(h, l1_norm(u), n, std::abs(kappa));
    }
    // 2F over h/2; the blowup clock is stretched back to [0, h].
    return run_flow(u, 2.0 * kappa, n, 0.5 * h, substeps, 2.0);
}

} // namespace apcgl
