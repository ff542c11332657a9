#include "ewg/units.hpp"

#include <cmath>

#include "ewg/errors.hpp"

namespace ewg::units {

UnitSystem::UnitSystem(double mass_kg, double kappa_per_m) : mass_(mass_kg), kappa_(kappa_per_m) {
    require(std::isfinite(mass_kg) && mass_kg > 0.0, ErrorKind::InvalidParameter, "mass must be positive");
    require(std::isfinite(kappa_per_m) && kappa_per_m > 0.0, ErrorKind::InvalidParameter, "kappa must be positive");
}

double UnitSystem::energy_unit() const { return hbar * hbar * kappa_ * kappa_ / (2.0 * mass_); }

double UnitSystem::frequency_unit() const { return energy_unit() / hbar; }

double UnitSystem::velocity_unit() const { return hbar * kappa_ / mass_; }

GratingConfig to_dimensionless(const PhysicalGrating& raw) {
    const UnitSystem u(raw.mass_kg, raw.kappa_per_m);
    require(raw.big_q_per_m > 0.0, ErrorKind::InvalidParameter, "Q must be positive");
    const double big_q = u.wavevector(raw.big_q_per_m);
    const double v_max = u.energy(raw.v_max_joule);
    const double detuning = u.frequency(raw.detuning_rad_s);
    if (raw.fields) return GratingConfig::from_fields(big_q, v_max, detuning, *raw.fields);
    return GratingConfig::scalar(big_q, v_max, raw.contrast, detuning);
}

PhysicalGrating from_dimensionless(const GratingConfig& grating, const UnitSystem& units) {
    PhysicalGrating raw;
    raw.mass_kg = units.mass();
    raw.kappa_per_m = units.kappa();
    raw.big_q_per_m = units.per_metre(grating.big_q());
    raw.v_max_joule = units.joule(grating.v_max());
    raw.contrast = grating.contrast();
    raw.detuning_rad_s = units.rad_per_s(grating.detuning());
    if (grating.has_explicit_fields()) raw.fields = grating.field_amplitudes();
    return raw;
}

}  // namespace ewg::units
