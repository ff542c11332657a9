#pragma once

#include <array>
#include <complex>
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "ewg/adiabatic.hpp"
#include "ewg/kinematics.hpp"

namespace ewg {

// Zener exponent (gap/2)^2 / (hbar v |slope_diff|).  The velocity is in units of
// hbar kappa / M, which in recoil units is the local normal wavevector.
double landau_zener_exponent(double gap, double slope_diff, double velocity);
// Probability of following the diabatic (crossing) path, exp(-2 pi Lambda).
double landau_zener_probability(double gap, double slope_diff, double velocity);
// Stokes phase pi/4 + Lambda (ln Lambda - 1) + arg Gamma(1 - i Lambda).
double stokes_phase(double lz_exponent);

// Two-state node of the avoided crossing.  split_amplitudes maps the adiabatic
// amplitudes (lower, upper) on the outer side to those on the inner side.
struct CrossingNode {
    AvoidedCrossing crossing;
    double local_velocity = 0.0;
    double lz_exponent = 0.0;
    Eigen::Matrix2cd split_amplitudes;

    double diabatic_probability() const;
};

CrossingNode make_crossing_node(const AvoidedCrossing& crossing, double local_velocity);

struct PathContribution {
    std::vector<std::size_t> nodes;  // crossing passages along the path
    double phase = 0.0;              // accumulated WKB phase including Maslov terms
    std::complex<double> amplitude;  // product of node amplitudes times e^{i phase}
    std::size_t exit_channel = 0;
};

struct PathSum {
    std::vector<PathContribution> paths;
    std::vector<std::complex<double>> channel_amplitudes;

    double probability(std::size_t channel) const { return std::norm(channel_amplitudes.at(channel)); }
};

using Surface = std::function<double(double)>;

// Integral of sqrt(E - W(z)) over [z_a, z_b] minus pi/2 per turning-point reflection.
// Endpoints may be turning points; a forbidden interior raises InvalidPath.
double wkb_phase(const Surface& surface, double energy, double z_a, double z_b, int reflections = 0);
// Cubic-spline interpolant of one landscape track (uniform grids only).
Surface track_surface(const AdiabaticLandscape& landscape, std::size_t track);

// Parameters of the Raman pair in a J = 1/2 grating: incident channel (nu = 0,
// m = +1/2) with barrier a e^{-2z}, diffracted channel (nu = -2, m = -1/2) with
// barrier b e^{-2z} and normal energy raised by offset, coupled by r e^{-2z}.
struct RamanPair {
    double a = 0.0;
    double b = 0.0;
    std::complex<double> r;
    double offset = 0.0;
    double k_in = 0.0;
    double k_out = 0.0;

    double crossing_position() const;  // where the diabatic potentials cross
    double light_shift_ratio() const { return b / a; }
};

RamanPair raman_pair(const GratingConfig& grating, const IncidentState& incident);

struct MichelsonResult {
    double specular = 0.0;    // (nu = 0, m = +1/2)
    double diffracted = 0.0;  // (nu = -2, m = -1/2)
    bool reaches_crossing = false;
    CrossingNode node;
    PathSum paths;
    double turning_incident = 0.0;
    double turning_diffracted = 0.0;
};

// Beamsplitter at the avoided crossing, two WKB mirrors, recombination on the way out.
MichelsonResult michelson_diffraction(const GratingConfig& grating, const IncidentState& incident);

// Golden-rule transfer between the two flat-barrier distorted waves of the Raman pair.
double raman_dwba(const GratingConfig& grating, const IncidentState& incident);

// Normal incident energy at which the incident turning point sits on the crossing.
double optimum_incident_energy(double light_shift_ratio, double doppler);

// V_0(z_c) base^{2l-1} with base = sqrt(v_max delta) e^{1 - z_c} / delta.
double doppleron_rabi(const GratingConfig& grating, int l, double z_c);
double doppleron_rabi(double v0, double base, int l);
// (2l + 1) delta_D for l = 1..l_max; light shifts move the true resonances lower.
std::vector<double> doppleron_resonance_detunings(double doppler, int l_max);

double four_crossing_estimate(const std::array<double, 4>& splitting_probabilities);

}  // namespace ewg
