#include "apcgl/splitting.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>

#include "apcgl/csv.hpp"
#include "apcgl/linear_propagator.hpp"

namespace apcgl {

void validate(const SplitSchedule& s) {
    if (!(s.h > 0.0)) {
        throw std::invalid_argument("SplitSchedule: h must be > 0");
    }
    if (s.steps < 0) {
        throw std::invalid_argument("SplitSchedule: steps must be >= 0");
    }
    if (s.record_every < 1 || (s.steps > 0 && s.record_every > s.steps)) {
        throw std::invalid_argument("SplitSchedule: record_every must lie in [1, steps]");
    }
    if (s.truncation < 1) {
        throw std::invalid_argument("SplitSchedule: truncation must be >= 1");
    }
}

double toggle_alpha(double t) {
    const double frac = t - std::floor(t);
    return frac < 0.5 ? 2.0 : 0.0;
}

namespace {

// Antiderivative of toggle_alpha from 0: floor(x) whole periods of mass 1
// plus the active part of the current one.
double toggle_integral_from_zero(double x) {
    const double m = std::floor(x);
    const double r = x - m;
    return m + 2.0 * std::min(r, 0.5);
}

} // namespace

double toggle_tau(double h, double t, double t_prime) {
    if (!(h > 0.0)) {
        throw std::invalid_argument("toggle_tau: h must be > 0");
    }
    if (t < t_prime) {
        throw std::invalid_argument("toggle_tau: requires t >= t_prime");
    }
    return h * (toggle_integral_from_zero(t / h) -
                toggle_integral_from_zero(t_prime / h));
}

FlowResult lie_trotter_step(const ApSeries& W, const CglParams& p, double h,
                            int substeps) {
    if (!(h > 0.0)) {
        throw std::invalid_argument("lie_trotter_step: h must be > 0");
    }
    const ApSeries V = linear_step(W, p, h);
    return half_interval_flow(V, p.kappa, p.degree, h, substeps);
}

TrajectoryRecord evolve(const ApSeries& u0, const CglParams& p,
                        const SplitSchedule& schedule) {
    validate(p);
    validate(schedule);
    if (u0.modes() != schedule.truncation) {
        throw std::invalid_argument("evolve: initial truncation differs from schedule");
    }

    TrajectoryRecord record;
    const auto snapshot = [&](double t, const ApSeries& state) {
        record.times.push_back(t);
        record.states.push_back(state);
        record.norms.push_back(l1_norm(state));
    };

    ApSeries W = u0;
    snapshot(0.0, W);
    for (long k = 0; k < schedule.steps; ++k) {
        FlowResult step = lie_trotter_step(W, p, schedule.h);
        if (step.status == FlowStatus::blowup) {
            record.status = FlowStatus::blowup;
            record.blowup_time =
                static_cast<double>(k) * schedule.h + step.blowup_time.value();
            return record;
        }
        W = std::move(step.state);
        if ((k + 1) % schedule.record_every == 0 || k + 1 == schedule.steps) {
            snapshot(static_cast<double>(k + 1) * schedule.h, W);
        }
    }
    return record;
}

void write_trajectory_csv(const TrajectoryRecord& record, std::ostream& out) {
    out << "t,j,re_a_j,im_a_j\n";
    for (std::size_t s = 0; s < record.times.size(); ++s) {
        const ApSeries& state = record.states[s];
        for (std::size_t j = 1; j <= state.modes(); ++j) {
            out << csv_number(record.times[s]) << ',' << j << ','
                << csv_number(state.coeff(j).real()) << ','
                << csv_number(state.coeff(j).imag()) << '\n';
        }
    }
}

void write_summary_csv(const TrajectoryRecord& record, std::ostream& out) {
    const char* status =
        record.status == FlowStatus::blowup ? "blowup" : "completed";
    out << "t,l1_norm,status\n";
    for (std::size_t s = 0; s < record.times.size(); ++s) {
        out << csv_number(record.times[s]) << ',' << csv_number(record.norms[s])
            << ',' << status << '\n';
    }
}

} // namespace apcgl
