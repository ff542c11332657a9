#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ewg/fields.hpp"

// Everything in this library is expressed in units where hbar = 1, lengths are
// measured in 1/kappa and energies in the recoil unit hbar^2 kappa^2 / 2M.  A
// free atom with normal wavevector k then has normal kinetic energy k^2.

namespace ewg {

enum class Model { OneLevel, TwoLevel, Multilevel };

std::string_view to_string(Model model);
Model model_from_string(std::string_view text);

class GratingConfig {
public:
    // Scalar description: potential height and contrast only.  Field amplitudes are
    // synthesised on demand as two parallel pi-polarised waves with that contrast.
    static GratingConfig scalar(double big_q, double v_max, double contrast, double detuning = 0.0);
    // Vector description: the contrast follows from the field amplitudes.
    static GratingConfig from_fields(double big_q, double v_max, double detuning, const FieldPair& fields);

    double kappa() const { return 1.0; }
    double recoil_unit() const { return 1.0; }
    double big_q() const { return big_q_; }
    double v_max() const { return v_max_; }
    double contrast() const { return contrast_; }
    double detuning() const { return detuning_; }
    bool has_explicit_fields() const { return fields_.has_value(); }
    FieldPair field_amplitudes() const;

    GratingConfig with_v_max(double v_max) const;
    GratingConfig with_contrast(double contrast) const;
    GratingConfig with_big_q(double big_q) const;
    // Changes the detuning at fixed potential height v_max.
    GratingConfig with_detuning(double detuning) const;
    // Changes the detuning at fixed laser intensity; the light shift scales as 1/detuning.
    GratingConfig with_detuning_at_fixed_intensity(double detuning) const;

    // Squared single-photon coupling d^2 (|E_+|^2 + |E_-|^2) implied by v_max and detuning.
    double coupling_sq() const { return v_max_ * detuning_; }

private:
    GratingConfig(double big_q, double v_max, double contrast, double detuning, std::optional<FieldPair> fields);
    void validate() const;

    double big_q_;
    double v_max_;
    double contrast_;
    double detuning_;
    std::optional<FieldPair> fields_;
};

struct InternalState {
    enum class Kind { Ground, Excited, Sublevel };
    Kind kind = Kind::Ground;
    int two_m = 0;  // twice the magnetic quantum number for Kind::Sublevel

    static InternalState ground() { return {Kind::Ground, 0}; }
    static InternalState excited() { return {Kind::Excited, 0}; }
    static InternalState sublevel(int two_m) { return {Kind::Sublevel, two_m}; }

    std::string label() const;
    static InternalState from_label(std::string_view label);
    friend auto operator<=>(const InternalState&, const InternalState&) = default;
};

struct IncidentState {
    double k_xi = 0.0;
    double k_zi = 1.0;
    InternalState internal = InternalState::ground();

    void validate() const;
    IncidentState with_k_zi(double k) const;
    double normal_energy() const { return k_zi * k_zi; }
};

struct Channel {
    int order = 0;
    InternalState internal;
    double k_x = 0.0;
    double k_z_sq = 0.0;
    bool open = false;

    double k_z() const;         // real normal wavevector, zero for closed channels
    double decay_rate() const;  // sqrt(-k_z_sq) for closed channels, zero otherwise
    std::string label() const;
};

struct ChannelSet {
    Model model = Model::OneLevel;
    int nu_max = 0;
    double big_q = 0.0;
    double detuning = 0.0;
    double k_xi = 0.0;
    double k_zi = 0.0;
    InternalState incident_internal;
    std::vector<Channel> channels;
    std::size_t incident_index = 0;

    std::size_t size() const { return channels.size(); }
    const Channel& operator[](std::size_t i) const { return channels[i]; }
    std::optional<std::size_t> find(int order, InternalState internal) const;
    // k_x(nu)^2 - k_xi^2, the tangential kinetic energy offset of channel i.
    double kinetic_offset(std::size_t i) const;
    // Internal energy of the channel relative to the incident internal state (-delta for excited states).
    double internal_offset(std::size_t i) const;
};

bool is_excited_order(Model model, int order);

ChannelSet build_channels(const IncidentState& incident, const GratingConfig& grating, int nu_max, Model model);

double diffraction_angle(const Channel& channel);

// delta_D = Q v_xi = 2 Q k_xi in recoil units.
double doppler_shift(const IncidentState& incident, const GratingConfig& grating);

struct ConservationReport {
    double max_momentum_violation = 0.0;
    double max_energy_violation = 0.0;
    std::vector<std::size_t> flagged;
    double max_violation() const;
    bool ok() const { return flagged.empty(); }
};

ConservationReport conservation_check(const ChannelSet& channels, const IncidentState& incident,
                                      double threshold = 1e-12);

}  // namespace ewg
