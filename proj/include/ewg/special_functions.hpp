#pragma once

#include <complex>

namespace ewg::special {

// Principal branch of log Gamma(z) with continuous imaginary part, Re z >= 0.
std::complex<double> log_gamma(std::complex<double> z);

// e^{pi nu / 2} K_{i nu}(x) for real nu and x > 0.  The scaling keeps the
// oscillatory region of order unity for large nu.
double bessel_k_imag_scaled(double nu, double x);

// Integer-order Bessel function of the first kind, any sign of n.
double bessel_j(int n, double x);

}  // namespace ewg::special
