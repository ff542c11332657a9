#pragma once

#include <array>
#include <complex>

namespace ewg {

using cplx = std::complex<double>;

// Field vector in the spherical basis, components stored for q = -1, 0, +1.
struct SphericalVector {
    std::array<cplx, 3> c{};

    cplx& operator[](int q) { return c.at(static_cast<std::size_t>(q + 1)); }
    const cplx& operator[](int q) const { return c.at(static_cast<std::size_t>(q + 1)); }

    static SphericalVector sigma_minus(cplx amplitude);
    static SphericalVector pi(cplx amplitude);
    static SphericalVector sigma_plus(cplx amplitude);

    friend bool operator==(const SphericalVector&, const SphericalVector&) = default;
};

// E_{+1} = -(Ex + i Ey)/sqrt2, E_{-1} = (Ex - i Ey)/sqrt2, E_0 = Ez.
SphericalVector spherical_from_cartesian(cplx ex, cplx ey, cplx ez);

// Hermitian inner product sum_q conj(a_q) b_q.
cplx inner(const SphericalVector& a, const SphericalVector& b);
double intensity(const SphericalVector& a);
SphericalVector scaled(const SphericalVector& a, cplx factor);

// Amplitudes of the two counter-propagating evanescent waves, E_+ along +x and E_- along -x.
struct FieldPair {
    SphericalVector plus;
    SphericalVector minus;
    double total_intensity() const { return intensity(plus) + intensity(minus); }
    friend bool operator==(const FieldPair&, const FieldPair&) = default;
};

// 2 Re(E_+* . E_-) / (|E_+|^2 + |E_-|^2); throws for zero total intensity.
double contrast_from_fields(const SphericalVector& e_plus, const SphericalVector& e_minus);

}  // namespace ewg
