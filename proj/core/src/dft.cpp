#include "apcgl/dft.hpp"

#include <numbers>
#include <stdexcept>

namespace apcgl {

void fft_radix2(std::vector<std::complex<double>>& data, int sign) {
    const std::size_t n = data.size();
    if (n == 0 || (n & (n - 1)) != 0) {
        throw std::invalid_argument("fft_radix2: size must be a power of two");
    }
    // Bit-reversal permutation.
    for (std::size_t i = 1, rev = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; rev & bit; bit >>= 1) {
            rev ^= bit;
        }
        rev ^= bit;
        if (i < rev) {
            std::swap(data[i], data[rev]);
        }
    }
    // Twiddle table from std::polar keeps phases accurate over long runs
    // (a running product drifts by ~len*eps).
    std::vector<std::complex<double>> twiddle(n / 2);
    const double base = static_cast<double>(sign) * 2.0 * std::numbers::pi /
                        static_cast<double>(n);
    for (std::size_t k = 0; k < n / 2; ++k) {
        twiddle[k] = std::polar(1.0, base * static_cast<double>(k));
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const std::size_t stride = n / len;
        for (std::size_t start = 0; start < n; start += len) {
            for (std::size_t k = 0; k < len / 2; ++k) {
                const std::complex<double> even = data[start + k];
                const std::complex<double> odd =
                    data[start + k + len / 2] * twiddle[k * stride];
                data[start + k] = even + odd;
                data[start + k + len / 2] = even - odd;
            }
        }
    }
}

std::vector<std::complex<double>> dft_forward(
    std::span<const std::complex<double>> samples) {
    std::vector<std::complex<double>> out(samples.begin(), samples.end());
    fft_radix2(out, -1);
    const double inv_n = 1.0 / static_cast<double>(out.size());
    for (auto& c : out) {
        c *= inv_n;
    }
    return out;
}

std::vector<std::complex<double>> dft_inverse(
    std::span<const std::complex<double>> coeffs) {
    std::vector<std::complex<double>> out(coeffs.begin(), coeffs.end());
    fft_radix2(out, +1);
    return out;
}

} // namespace apcgl
