#include "apcgl/ap_series.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include <json.hpp>

#include "apcgl/compensated_sum.hpp"

namespace apcgl {

ApSeries::ApSeries(double lambda, std::size_t modes)
    : lambda_(lambda), coeffs_(modes, Complex{0.0, 0.0}) {
    if (!(lambda_ > 0.0)) {
        throw std::invalid_argument("ApSeries: lambda must be positive");
    }
    if (modes == 0) {
        throw std::invalid_argument("ApSeries: needs at least one mode");
    }
}

ApSeries::ApSeries(double lambda, std::vector<Complex> coeffs)
    : lambda_(lambda), coeffs_(std::move(coeffs)) {
    if (!(lambda_ > 0.0)) {
        throw std::invalid_argument("ApSeries: lambda must be positive");
    }
    if (coeffs_.empty()) {
        throw std::invalid_argument("ApSeries: needs at least one mode");
    }
}

const Complex& ApSeries::coeff(std::size_t j) const {
    if (j < 1 || j > coeffs_.size()) {
        throw std::out_of_range("ApSeries: mode index outside [1, M]");
    }
    return coeffs_[j - 1];
}

void ApSeries::set_coeff(std::size_t j, Complex value) {
    if (j < 1 || j > coeffs_.size()) {
        throw std::out_of_range("ApSeries: mode index outside [1, M]");
    }
    coeffs_[j - 1] = value;
}

double l1_norm(const ApSeries& u) {
    return detail::l1_norm(u.coeffs());
}

Complex evaluate(const ApSeries& u, double x) {
    CompensatedSum re;
    CompensatedSum im;
    const double base = u.lambda() * x;
    for (std::size_t j = 1; j <= u.modes(); ++j) {
        const Complex term =
            u.coeff(j) * std::polar(1.0, static_cast<double>(j) * base);
        re.add(term.real());
        im.add(term.imag());
    }
    return {re.value(), im.value()};
}

ApSeries cauchy_product(const ApSeries& u, const ApSeries& v) {
    if (u.lambda() != v.lambda()) {
        throw std::invalid_argument("cauchy_product: lambda mismatch");
    }
    if (u.modes() != v.modes()) {
        throw std::invalid_argument("cauchy_product: truncation mismatch");
    }
    std::vector<Complex> out(u.modes());
    detail::convolve_truncated(u.coeffs(), v.coeffs(), out);
    return ApSeries(u.lambda(), std::move(out));
}

ApSeries power(const ApSeries& u, int n) {
    if (n < 2) {
        throw std::invalid_argument("power: exponent must be >= 2");
    }
    std::vector<Complex> out(u.modes());
    detail::power_truncated(u.coeffs(), n, out);
    return ApSeries(u.lambda(), std::move(out));
}

Complex bohr_coefficient(const GridField& samples, std::size_t j) {
    const std::size_t n = samples.size();
    if (j < 1) {
        throw std::invalid_argument("bohr_coefficient: mode index must be >= 1");
    }
    if (j >= n) {
        throw std::domain_error(
            "bohr_coefficient: mode " + std::to_string(j) +
            " is unresolvable on " + std::to_string(n) + " samples");
    }
    // (1/N) sum_k u(x_k) exp(-2 pi i j k / N); the lattice spacing cancels
    // lambda out of the phase.
    CompensatedSum re;
    CompensatedSum im;
    const double step = -2.0 * std::numbers::pi * static_cast<double>(j) /
                        static_cast<double>(n);
    for (std::size_t k = 0; k < n; ++k) {
        const Complex term =
            samples.values()[k] * std::polar(1.0, step * static_cast<double>(k));
        re.add(term.real());
        im.add(term.imag());
    }
    const double inv_n = 1.0 / static_cast<double>(n);
    return {re.value() * inv_n, im.value() * inv_n};
}

std::string to_json_string(const ApSeries& u) {
    nlohmann::json doc;
    doc["lambda"] = u.lambda();
    auto& coeffs = doc["coeffs"] = nlohmann::json::array();
    for (std::size_t j = 1; j <= u.modes(); ++j) {
        coeffs.push_back({u.coeff(j).real(), u.coeff(j).imag()});
    }
    return doc.dump();
}

ApSeries ap_series_from_json(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::invalid_argument(std::string("ApSeries JSON: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("lambda") || !doc.contains("coeffs")) {
        throw std::invalid_argument("ApSeries JSON: expected {lambda, coeffs}");
    }
    if (!doc["lambda"].is_number()) {
        throw std::invalid_argument("ApSeries JSON: lambda must be a number");
    }
    const double lambda = doc["lambda"].get<double>();
    if (!doc["coeffs"].is_array() || doc["coeffs"].empty()) {
        throw std::invalid_argument("ApSeries JSON: coeffs must be a non-empty array");
    }
    std::vector<Complex> coeffs;
    coeffs.reserve(doc["coeffs"].size());
    for (const auto& entry : doc["coeffs"]) {
        if (!entry.is_array() || entry.size() != 2 || !entry[0].is_number() ||
            !entry[1].is_number()) {
            throw std::invalid_argument("ApSeries JSON: coeffs entries must be [re, im]");
        }
        coeffs.emplace_back(entry[0].get<double>(), entry[1].get<double>());
    }
    return ApSeries(lambda, std::move(coeffs));
}

namespace detail {

void convolve_truncated(std::span<const Complex> u, std::span<const Complex> v,
                        std::span<Complex> out) {
    const std::size_t m = out.size();
    // w_m = sum_{j=1}^{m-1} u_j v_{m-j}; with 0-based storage the mode
    // (i+1) sums u[p] * v[i-1-p].  Contributions use only indices below m,
    // so the loop is independent of the truncation (nestedness).
    // TODO: switch to an FFT product if M ever grows past a few thousand.
    for (std::size_t i = 0; i < m; ++i) {
        Complex acc{0.0, 0.0};
        for (std::size_t p = 0; p < i; ++p) {
            acc += u[p] * v[i - 1 - p];
        }
        out[i] = acc;
    }
}

void power_truncated(std::span<const Complex> u, int n, std::span<Complex> out) {
    const std::size_t m = u.size();
    std::vector<Complex> acc(u.begin(), u.end());
    std::vector<Complex> next(m);
    for (int k = 2; k <= n; ++k) {
        convolve_truncated(acc, u, next);
        acc.swap(next);
    }
    std::copy(acc.begin(), acc.end(), out.begin());
}

double l1_norm(std::span<const Complex> c) {
    CompensatedSum sum;
    for (const Complex& z : c) {
        sum.add(std::abs(z));
    }
    return sum.value();
}

} // namespace detail

} // namespace apcgl
