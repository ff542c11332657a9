#pragma once

#include <complex>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ewg/kinematics.hpp"

namespace ewg {

enum class ScalarModel { Dwba, Tpga, HardWall };

std::string_view to_string(ScalarModel model);

struct ScalarValidity {
    double delta_kz_plus = 0.0;       // k_z(+1) - k_zi
    double delta_kz_minus = 0.0;      // k_z(-1) - k_zi
    double modulation_index = 0.0;    // u
    double thin_grating_ratio = 0.0;  // 2Q^2 / k_zi, small for a thin phase grating
    double interaction_time = 0.0;    // 1/(kappa v_zi), in hbar/recoil units
    std::vector<std::string> warnings;
};

// Probabilities are keyed by the channel order nu (= 2n for diffraction order n),
// the same index used by ChannelSet.
struct ScalarPrediction {
    ScalarModel model = ScalarModel::Dwba;
    std::map<int, double> probabilities;
    std::optional<double> modulation_index;
    ScalarValidity validity;

    double probability(int order) const;
    double total() const;
};

// (pi xi / 2) / sinh(pi xi / 2), exactly 1 at xi = 0.
double beta(double xi);
// pi |xi| exp(-pi |xi| / 2), the large-|xi| form of beta.
double beta_asymptotic(double xi);

double flat_barrier_turning_point(double k_z, double v_max);
// Reflection coefficient r of the barrier v_max e^{-2z}; |r| = 1.
std::complex<double> flat_barrier_reflection(double k_z, double v_max);
// Solution of psi'' = (v_max e^{-2z} - k_z^2) psi decaying for z -> -inf and
// tending to e^{-i k_z z} + r e^{i k_z z} for z -> +inf.
std::complex<double> flat_barrier_wavefunction(double k_z, double v_max, double z);

// <psi_f | e^{-2z} | psi_i> for distorted waves in barriers v_i and v_f.
std::complex<double> distorted_wave_overlap(double k_i, double v_i, double k_f, double v_f);
// Same barrier for both states: the grating's v_max.
std::complex<double> dwba_matrix_element(double k_zi, double k_zf, const GratingConfig& grating);

ScalarPrediction dwba_first_order(const GratingConfig& grating, const IncidentState& incident);
ScalarPrediction hard_wall_pattern(const GratingConfig& grating, const IncidentState& incident, int n_max);
ScalarPrediction tpga_prediction(const GratingConfig& grating, const IncidentState& incident, int n_max);

// Diffraction comb sampled on tangential-momentum offsets, each order broadened
// by a normalised Gaussian of the given width.  Width 0 returns the bare comb.
struct ProfileSample {
    double momentum = 0.0;
    double intensity = 0.0;
};
std::vector<ProfileSample> convolved_profile(const ScalarPrediction& prediction, double big_q, double width,
                                             const std::vector<double>& momenta);

}  // namespace ewg
