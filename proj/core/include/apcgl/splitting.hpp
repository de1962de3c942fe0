#pragma once

#include <iosfwd>
#include <optional>
#include <vector>

#include "apcgl/ap_series.hpp"
#include "apcgl/cgl_params.hpp"
#include "apcgl/nonlinear_flow.hpp"

namespace apcgl {

// Lie-Trotter machinery: one macro step is an exact linear semigroup step
// over h followed by the nonlinear flow of 2F over h/2 (equivalently, of
// F over h).  The period-1 toggle and its running integral express the
// same alternation as a single reparametrized evolution; they are kept as
// closed-form utilities.

struct SplitSchedule {
    double h = 0.1;          // macro step
    long steps = 1;          // step count; h * steps = total time
    long record_every = 1;   // snapshot cadence in steps
    std::size_t truncation = 1;
};

void validate(const SplitSchedule& s);

struct TrajectoryRecord {
    std::vector<double> times;      // strictly increasing, starts at 0
    std::vector<ApSeries> states;   // W snapshots, same lattice throughout
    std::vector<double> norms;      // l1 norms of the snapshots
    FlowStatus status = FlowStatus::completed;
    std::optional<double> blowup_time;
};

// Period-1 toggle: 2 on [k, k+1/2), 0 on [k+1/2, k+1), k integer.
double toggle_alpha(double t);

// integral of toggle_alpha(s/h) ds over [t_prime, t], in closed form.
// Requires h > 0 and t >= t_prime; the value lies in [0, 2(t - t_prime)].
double toggle_tau(double h, double t, double t_prime);

// V = linear step of W over h, then the half-interval nonlinear flow.
// substeps = 0 uses the default rule for duration h.
FlowResult lie_trotter_step(const ApSeries& W, const CglParams& p, double h,
                            int substeps = 0);

// Iterates lie_trotter_step schedule.steps times from u0, recording every
// record_every steps (plus the final state).  Stops early on blowup.
// Requires u0.modes() == schedule.truncation.
TrajectoryRecord evolve(const ApSeries& u0, const CglParams& p,
                        const SplitSchedule& schedule);

// Long-format CSV: t,j,re_a_j,im_a_j (17 significant digits).
void write_trajectory_csv(const TrajectoryRecord& record, std::ostream& out);

// Summary CSV: t,l1_norm,status.
void write_summary_csv(const TrajectoryRecord& record, std::ostream& out);

} // namespace apcgl
