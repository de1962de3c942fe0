#include "apcgl/reference.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>

#include "apcgl/compensated_sum.hpp"
#include "apcgl/csv.hpp"
#include "apcgl/dft.hpp"
#include "apcgl/linear_propagator.hpp"
#include "apcgl/quadrature.hpp"

namespace apcgl {

namespace {

using Vec = std::vector<Complex>;

// phi1(z) = (e^z-1)/z, phi2 = (e^z-1-z)/z^2, phi3 = (e^z-1-z-z^2/2)/z^3.
// Below |z| = 0.5 the closed forms cancel badly; a short Taylor series is
// exact to machine precision there.
Complex phi_taylor(Complex z, int shift) {
    // sum_k z^k / (k + shift)!
    double denom = 1.0; // running (k + shift)!
    for (int k = 1; k <= shift; ++k) {
        denom *= k;
    }
    Complex term{1.0, 0.0};
    Complex acc{0.0, 0.0};
    for (int k = 0; k <= 24; ++k) {
        acc += term / denom;
        term *= z;
        denom *= (k + shift + 1);
    }
    return acc;
}

Complex phi1(Complex z) {
    if (std::abs(z) < 0.5) {
        return phi_taylor(z, 1);
    }
    return (std::exp(z) - 1.0) / z;
}

Complex phi2(Complex z) {
    if (std::abs(z) < 0.5) {
        return phi_taylor(z, 2);
    }
    return (std::exp(z) - 1.0 - z) / (z * z);
}

Complex phi3(Complex z) {
    if (std::abs(z) < 0.5) {
        return phi_taylor(z, 3);
    }
    return (std::exp(z) - 1.0 - z - 0.5 * z * z) / (z * z * z);
}

Complex pow_int(Complex z, int n) {
    Complex acc{1.0, 0.0};
    for (int k = 0; k < n; ++k) {
        acc *= z;
    }
    return acc;
}

bool all_finite(const Vec& v) {
    for (const Complex& z : v) {
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
            return false;
        }
    }
    return true;
}

// kappa * u^n on the zero-padded 2N grid: exact for every retained mode
// (products of modes < N live below 2N, so nothing wraps onto bins 0..N-1
// with non-negligible amplitude).
Vec nonlinear_term(const Vec& spectrum, Complex kappa, int degree) {
    const std::size_t n = spectrum.size();
    Vec padded(2 * n, Complex{0.0, 0.0});
    std::copy(spectrum.begin(), spectrum.end(), padded.begin());
    Vec samples = dft_inverse(padded);
    for (Complex& s : samples) {
        s = pow_int(s, degree);
    }
    Vec coeffs = dft_forward(samples);
    Vec out(n);
    for (std::size_t j = 0; j < n; ++j) {
        out[j] = kappa * coeffs[j];
    }
    return out;
}

void apply_linear(Vec& coeffs, const CglParams& p, double lambda, double t) {
    for (std::size_t j = 0; j < coeffs.size(); ++j) {
        coeffs[j] *= linear_multiplier(p, lambda, j + 1, t);
    }
}

} // namespace

GridField sample(const ApSeries& u, std::size_t n_grid) {
    if (n_grid <= 2 * u.modes()) {
        throw std::invalid_argument("sample: needs N > 2M grid points");
    }
    std::vector<Complex> values(n_grid);
    const double period = 2.0 * std::numbers::pi / u.lambda();
    for (std::size_t k = 0; k < n_grid; ++k) {
        values[k] = evaluate(u, period * static_cast<double>(k) /
                                    static_cast<double>(n_grid));
    }
    return GridField(u.lambda(), std::move(values));
}

ApSeries extract_series(const GridField& field, std::size_t m) {
    if (m < 1 || m >= field.size()) {
        throw std::invalid_argument("extract_series: m must lie in [1, N)");
    }
    std::vector<Complex> coeffs(m);
    for (std::size_t j = 1; j <= m; ++j) {
        coeffs[j - 1] = bohr_coefficient(field, j);
    }
    return ApSeries(field.lambda(), std::move(coeffs));
}

GridField pseudospectral_solve(const ApSeries& u0, const CglParams& p, double T,
                               std::size_t n_grid, double dt,
                               const PseudospectralOptions& opts) {
    validate(p);
    if (!(T > 0.0)) {
        throw std::invalid_argument("pseudospectral_solve: requires T > 0");
    }
    if (!(dt > 0.0)) {
        throw std::invalid_argument("pseudospectral_solve: requires dt > 0");
    }
    if (!is_power_of_two(n_grid)) {
        throw std::invalid_argument("pseudospectral_solve: N must be a power of two");
    }
    if (n_grid <= 2 * u0.modes()) {
        throw std::invalid_argument("pseudospectral_solve: needs N > 2M");
    }

    const long steps = std::max(1L, std::lround(T / dt));
    const double dt_eff = T / static_cast<double>(steps); // dt divides T exactly

    // Spectrum bins are one-sided lattice modes: bin j holds mode j*lambda.
    Vec c(n_grid, Complex{0.0, 0.0});
    for (std::size_t j = 1; j <= u0.modes(); ++j) {
        c[j] = u0.coeff(j);
    }

    const double lambda = u0.lambda();
    Vec E(n_grid), E2(n_grid), q1(n_grid), f1(n_grid), f2(n_grid), f3(n_grid);
    for (std::size_t j = 0; j < n_grid; ++j) {
        const double freq = static_cast<double>(j) * lambda;
        const Complex z =
            Complex{-freq * freq * p.alpha + p.gamma, -freq * freq * p.beta} *
            dt_eff;
        E[j] = std::exp(z);
        if (opts.scheme == Scheme::exponential_euler) {
            q1[j] = phi1(z);
        } else {
            E2[j] = std::exp(0.5 * z);
            q1[j] = phi1(0.5 * z);
            const Complex p1 = phi1(z), p2 = phi2(z), p3 = phi3(z);
            f1[j] = p1 - 3.0 * p2 + 4.0 * p3;
            f2[j] = p2 - 2.0 * p3;
            f3[j] = 4.0 * p3 - p2;
        }
    }

    const auto observe = [&](long step) {
        if (opts.observer && opts.observe_every > 0 &&
            (step % opts.observe_every == 0 || step == steps)) {
            opts.observer(static_cast<double>(step) * dt_eff, c);
        }
    };

    observe(0);
    Vec a(n_grid), b(n_grid), d(n_grid);
    for (long step = 0; step < steps; ++step) {
        if (opts.scheme == Scheme::exponential_euler) {
            const Vec n1 = nonlinear_term(c, p.kappa, p.degree);
            for (std::size_t j = 0; j < n_grid; ++j) {
                c[j] = E[j] * c[j] + dt_eff * q1[j] * n1[j];
            }
        } else {
            // Cox-Matthews ETDRK4 with exact half/full-step propagators.
            const Vec n1 = nonlinear_term(c, p.kappa, p.degree);
            for (std::size_t j = 0; j < n_grid; ++j) {
                a[j] = E2[j] * c[j] + 0.5 * dt_eff * q1[j] * n1[j];
            }
            const Vec n2 = nonlinear_term(a, p.kappa, p.degree);
            for (std::size_t j = 0; j < n_grid; ++j) {
                b[j] = E2[j] * c[j] + 0.5 * dt_eff * q1[j] * n2[j];
            }
            const Vec n3 = nonlinear_term(b, p.kappa, p.degree);
            for (std::size_t j = 0; j < n_grid; ++j) {
                d[j] = E2[j] * a[j] + 0.5 * dt_eff * q1[j] * (2.0 * n3[j] - n1[j]);
            }
            const Vec n4 = nonlinear_term(d, p.kappa, p.degree);
            for (std::size_t j = 0; j < n_grid; ++j) {
                c[j] = E[j] * c[j] +
                       dt_eff * (f1[j] * n1[j] + 2.0 * f2[j] * (n2[j] + n3[j]) +
                                 f3[j] * n4[j]);
            }
        }
        if (!all_finite(c)) {
            throw ReferenceBlowupError(
                "pseudospectral_solve: non-finite state",
                static_cast<double>(step) * dt_eff);
        }
        observe(step + 1);
    }

    return GridField(lambda, dft_inverse(c));
}

ApSeries picard_iterate(const ApSeries& u0, const CglParams& p, double T,
                        int iters, int quad_nodes) {
    validate(p);
    if (T < 0.0) {
        throw std::invalid_argument("picard_iterate: requires T >= 0");
    }
    if (iters < 1) {
        throw std::invalid_argument("picard_iterate: requires iters >= 1");
    }
    if (quad_nodes < 2) {
        throw std::invalid_argument("picard_iterate: requires quad_nodes >= 2");
    }
    if (T == 0.0) {
        return u0;
    }

    const std::size_t m = u0.modes();
    const double lambda = u0.lambda();
    const double norm0 = l1_norm(u0);

    const GaussLegendreRule rule = gauss_legendre(quad_nodes);
    std::vector<double> nodes(quad_nodes);
    for (int i = 0; i < quad_nodes; ++i) {
        nodes[i] = 0.5 * T * (rule.nodes[i] + 1.0);
    }
    const std::vector<double> bary = barycentric_weights(nodes);

    // u^{(0)} at the nodes: the free evolution U(t) u0.
    std::vector<Vec> vals(quad_nodes, Vec(u0.coeffs().begin(), u0.coeffs().end()));
    for (int i = 0; i < quad_nodes; ++i) {
        apply_linear(vals[i], p, lambda, nodes[i]);
    }

    const auto interpolate = [&](double tau) -> Vec {
        for (int i = 0; i < quad_nodes; ++i) {
            if (tau == nodes[i]) {
                return vals[i];
            }
        }
        Vec num(m, Complex{0.0, 0.0});
        double den = 0.0;
        for (int i = 0; i < quad_nodes; ++i) {
            const double w = bary[i] / (tau - nodes[i]);
            den += w;
            for (std::size_t cix = 0; cix < m; ++cix) {
                num[cix] += w * vals[i][cix];
            }
        }
        for (Complex& z : num) {
            z /= den;
        }
        return num;
    };

    // One application of the mild-solution map at time `t`, reading the
    // previous iterate through `lookup`.
    const auto apply_map = [&](double t, auto&& lookup) -> Vec {
        Vec acc(u0.coeffs().begin(), u0.coeffs().end());
        apply_linear(acc, p, lambda, t);
        Vec pw(m);
        for (int q = 0; q < quad_nodes; ++q) {
            const double tau = 0.5 * t * (rule.nodes[q] + 1.0);
            const Vec u_tau = lookup(tau, q);
            detail::power_truncated(u_tau, p.degree, pw);
            apply_linear(pw, p, lambda, t - tau);
            const Complex scale = p.kappa * (0.5 * t * rule.weights[q]);
            for (std::size_t cix = 0; cix < m; ++cix) {
                acc[cix] += scale * pw[cix];
            }
        }
        return acc;
    };

    for (int it = 1; it < iters; ++it) {
        std::vector<Vec> next(quad_nodes);
        for (int i = 0; i < quad_nodes; ++i) {
            next[i] = apply_map(nodes[i],
                                [&](double tau, int) { return interpolate(tau); });
        }
        vals.swap(next);
        if (norm0 > 0.0) {
            for (const Vec& v : vals) {
                if (detail::l1_norm(v) > 10.0 * norm0) {
                    throw NonContractionError(
                        "picard_iterate: iterate norm grew beyond 10x initial");
                }
            }
        }
    }

    // Final assembly at t = T: the quadrature nodes on [0, T] are the master
    // nodes, so the stored values are used directly.
    Vec result = apply_map(T, [&](double, int q) { return vals[q]; });
    if (norm0 > 0.0 && detail::l1_norm(result) > 10.0 * norm0) {
        throw NonContractionError(
            "picard_iterate: iterate norm grew beyond 10x initial");
    }
    return ApSeries(lambda, std::move(result));
}

double leakage_from_spectrum(std::span<const Complex> spectrum, std::size_t m) {
    CompensatedSum lattice;
    CompensatedSum off;
    for (std::size_t k = 0; k < spectrum.size(); ++k) {
        const double mag = std::abs(spectrum[k]);
        if (k >= 1 && k <= m) {
            lattice.add(mag);
        } else {
            off.add(mag);
        }
    }
    const double total = lattice.value() + off.value();
    if (total == 0.0) {
        return 0.0;
    }
    return off.value() / total;
}

double spectral_leakage(const GridField& field, std::size_t m) {
    const std::vector<Complex> spectrum = dft_forward(field.values());
    return leakage_from_spectrum(spectrum, m);
}

void write_grid_csv(const GridField& field, std::ostream& out) {
    out << "k,x_k,re_u,im_u\n";
    for (std::size_t k = 0; k < field.size(); ++k) {
        out << k << ',' << csv_number(field.x(k)) << ','
            << csv_number(field.values()[k].real()) << ','
            << csv_number(field.values()[k].imag()) << '\n';
    }
}

} // namespace apcgl
