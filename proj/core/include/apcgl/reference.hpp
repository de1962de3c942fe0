#pragma once

#include <functional>
#include <iosfwd>
#include <stdexcept>
#include <vector>

#include "apcgl/ap_series.hpp"
#include "apcgl/cgl_params.hpp"
#include "apcgl/grid_field.hpp"

namespace apcgl {

// Independent reference solvers on one period of the lattice, plus the
// spectral phase-closure check.  Because every frequency is an integer
// multiple of lambda, the problem on the whole line reduces exactly to
// this periodic problem.

GridField sample(const ApSeries& u, std::size_t n_grid);

// Spectrum -> truncated series, modes 1..m via the discrete Bohr mean.
ApSeries extract_series(const GridField& field, std::size_t m);

enum class Scheme {
    exponential_euler, // first order, exact linear part
    etdrk4,            // fourth order exponential time differencing
};

struct ReferenceBlowupError : std::runtime_error {
    ReferenceBlowupError(const std::string& what, double t)
        : std::runtime_error(what), last_stable_time(t) {}
    double last_stable_time;
};

struct PseudospectralOptions {
    Scheme scheme = Scheme::exponential_euler;
    // When positive, observer(t, spectrum) fires every observe_every steps
    // and after the final step; spectrum bin j holds mode j*lambda.
    long observe_every = 0;
    std::function<void(double, const std::vector<Complex>&)> observer;
};

/// Integrates on the discrete one-sided spectrum with the exact per-mode
/// linear factor exp((-(j lambda)^2 (alpha+i beta) + gamma) dt) and the
/// nonlinearity evaluated pointwise on a zero-padded (2N) grid, which makes
/// polynomial products alias-free for the retained modes.  dt is rounded
/// so that it divides T evenly.  Non-finite values raise
/// ReferenceBlowupError carrying the last stable time.
GridField pseudospectral_solve(const ApSeries& u0, const CglParams& p, double T,
                               std::size_t n_grid, double dt,
                               const PseudospectralOptions& opts = {});

struct NonContractionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Fixed-point iteration of
///   u(T) = U(T) u0 + integral over [0,T] of U(T-t') kappa u(t')^n dt'
/// with the iterate stored at Gauss-Legendre nodes on [0, T] and the
/// integrals evaluated by the same rule (inner integrals over [0, t_i]
/// interpolate the stored nodes barycentrically).  Returns the iters-th
/// iterate at T.  Iterate norms growing beyond 10x the initial norm raise
/// NonContractionError.
ApSeries picard_iterate(const ApSeries& u0, const CglParams& p, double T,
                        int iters, int quad_nodes);

// Fraction of spectral l1 mass off the positive lattice modes 1..m
// (the k = 0 mean and everything above m, including the bins a sampled
// negative frequency would land in).  Zero field -> 0.
double spectral_leakage(const GridField& field, std::size_t m);

// Same ratio computed directly from a spectrum.
double leakage_from_spectrum(std::span<const Complex> spectrum, std::size_t m);

// CSV: k,x_k,re_u,im_u.
void write_grid_csv(const GridField& field, std::ostream& out);

} // namespace apcgl
