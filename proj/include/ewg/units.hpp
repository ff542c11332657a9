#pragma once

#include <optional>

#include "ewg/fields.hpp"
#include "ewg/kinematics.hpp"

namespace ewg::units {

inline constexpr double hbar = 1.054571817e-34;  // J s

// Scales that make hbar = 1, lengths in 1/kappa and energies in hbar^2 kappa^2 / 2M.
class UnitSystem {
public:
    UnitSystem(double mass_kg, double kappa_per_m);

    double mass() const { return mass_; }
    double kappa() const { return kappa_; }
    double energy_unit() const;     // J
    double frequency_unit() const;  // rad/s
    double velocity_unit() const;   // m/s, equals hbar kappa / M

    double length(double metres) const { return metres * kappa_; }
    double wavevector(double per_metre) const { return per_metre / kappa_; }
    double energy(double joule) const { return joule / energy_unit(); }
    double frequency(double rad_per_s) const { return rad_per_s / frequency_unit(); }
    double velocity(double metres_per_s) const { return metres_per_s / velocity_unit(); }

    double metres(double length) const { return length / kappa_; }
    double per_metre(double wavevector) const { return wavevector * kappa_; }
    double joule(double energy) const { return energy * energy_unit(); }
    double rad_per_s(double frequency) const { return frequency * frequency_unit(); }
    double metres_per_s(double velocity) const { return velocity * velocity_unit(); }

private:
    double mass_;
    double kappa_;
};

struct PhysicalGrating {
    double mass_kg = 0.0;
    double kappa_per_m = 0.0;
    double big_q_per_m = 0.0;
    double v_max_joule = 0.0;
    double contrast = 0.0;
    double detuning_rad_s = 0.0;
    std::optional<FieldPair> fields;
};

GratingConfig to_dimensionless(const PhysicalGrating& raw);
PhysicalGrating from_dimensionless(const GratingConfig& grating, const UnitSystem& units);

}  // namespace ewg::units
