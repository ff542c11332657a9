#include "ewg/special_functions.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "ewg/errors.hpp"

namespace ewg::special {
namespace {

using std::numbers::pi;

// B_{2n} / (2n (2n-1)) for the Stirling series.
constexpr std::array<double, 7> stirling = {
    1.0 / 12.0, -1.0 / 360.0, 1.0 / 1260.0, -1.0 / 1680.0, 1.0 / 1188.0, -691.0 / 360360.0, 1.0 / 156.0,
};

// Power series  -pi Im I_{i nu}(x) / sinh(pi nu), rescaled by e^{pi nu/2}.
double k_series(double nu, double x) {
    const std::complex<double> a(1.0, nu);
    const double y = 0.25 * x * x;
    std::complex<double> term = 1.0;
    std::complex<double> sum = 1.0;
    for (int k = 1; k < 2000; ++k) {
        term *= y / (static_cast<double>(k) * (static_cast<double>(k) + std::complex<double>(0.0, nu)));
        sum += term;
        if (std::abs(term) < 1e-17 * std::abs(sum)) break;
    }
    const double theta = nu * std::log(0.5 * x) - std::imag(log_gamma(a));
    const double prefactor = std::sqrt(2.0 * pi / (nu * -std::expm1(-2.0 * pi * nu)));
    return -prefactor * std::imag(std::polar(1.0, theta) * sum);
}

// Trapezoidal rule for (1/2) int exp(-x cosh t + i nu t) dt along Im t = phi.
double k_contour(double nu, double x) {
    const double eta = std::clamp(2.0 / nu, 0.02, pi / 4.0);
    const double phi = std::min(std::asin(std::min(1.0, nu / x)), 0.5 * pi - eta);
    const double c = std::cos(phi);
    const double s = std::sin(phi);
    const double shift = nu * (0.5 * pi - phi);

    auto integrand = [&](double u) {
        const double re = -x * std::cosh(u) * c + shift;
        const double im = nu * u - x * std::sinh(u) * s;
        return std::exp(re) * std::cos(im);
    };
    // Beyond u_max the integrand is below e^-60 relative to its value at u = 0.
    const double u_max = std::acosh(1.0 + 60.0 / (x * c)) + 0.5;

    double h = std::min(0.25, eta);
    int n = static_cast<int>(std::ceil(u_max / h));
    double sum = 0.5 * integrand(0.0);
    double scale = std::abs(sum);
    for (int j = 1; j <= n; ++j) {
        const double v = integrand(j * h);
        sum += v;
        scale += std::abs(v);
    }
    double estimate = h * sum;
    for (int level = 0; level < 24; ++level) {
        double odd = 0.0;
        for (int j = 0; j < n; ++j) {
            const double v = integrand((2 * j + 1) * 0.5 * h);
            odd += v;
            scale += std::abs(v);
        }
        sum += odd;
        h *= 0.5;
        n *= 2;
        const double refined = h * sum;
        const double change = std::abs(refined - estimate);
        estimate = refined;
        if (level >= 1 && change <= 1e-14 * h * scale) return estimate;
    }
    fail(ErrorKind::NumericalFailure, "K_{i nu}(x) quadrature did not converge");
}

}  // namespace

std::complex<double> log_gamma(std::complex<double> z) {
    require(z.real() >= 0.0 && z != 0.0, ErrorKind::InvalidParameter, "log_gamma needs Re z >= 0, z != 0");
    std::complex<double> shift_sum = 0.0;
    while (z.real() < 15.0) {
        shift_sum += std::log(z);
        z += 1.0;
    }
    const std::complex<double> inv = 1.0 / z;
    const std::complex<double> inv2 = inv * inv;
    std::complex<double> series = 0.0;
    std::complex<double> power = inv;
    for (double coeff : stirling) {
        series += coeff * power;
        power *= inv2;
    }
    return (z - 0.5) * std::log(z) - z + 0.5 * std::log(2.0 * pi) + series - shift_sum;
}

double bessel_k_imag_scaled(double nu, double x) {
    require(x > 0.0 && std::isfinite(x), ErrorKind::InvalidParameter, "K_{i nu}(x) needs x > 0");
    nu = std::abs(nu);
    if (nu < 1e-6) return std::cyl_bessel_k(0.0, x);
    const double series_limit = std::max(2.0, std::min(0.5 * nu, std::sqrt(12.0 * nu)));
    return x <= series_limit ? k_series(nu, x) : k_contour(nu, x);
}

double bessel_j(int n, double x) {
    const double value = std::cyl_bessel_j(static_cast<double>(std::abs(n)), std::abs(x));
    // J_{-n} = (-1)^n J_n and J_n(-x) = (-1)^n J_n(x).
    const bool flip = ((n < 0) != (x < 0.0)) && (std::abs(n) % 2 == 1);
    return flip ? -value : value;
}

}  // namespace ewg::special
