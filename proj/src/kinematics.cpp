#include "ewg/kinematics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ewg/errors.hpp"

namespace ewg {

std::string_view to_string(Model model) {
    switch (model) {
        case Model::OneLevel: return "one-level";
        case Model::TwoLevel: return "two-level";
        case Model::Multilevel: return "multilevel-j12";
    }
    return "unknown";
}

Model model_from_string(std::string_view text) {
    if (text == "one-level") return Model::OneLevel;
    if (text == "two-level") return Model::TwoLevel;
    if (text == "multilevel-j12" || text == "multilevel") return Model::Multilevel;
    fail(ErrorKind::InvalidParameter, "unknown model '" + std::string(text) + "'");
}

GratingConfig::GratingConfig(double big_q, double v_max, double contrast, double detuning,
                             std::optional<FieldPair> fields)
    : big_q_(big_q), v_max_(v_max), contrast_(contrast), detuning_(detuning), fields_(std::move(fields)) {
    validate();
}

GratingConfig GratingConfig::scalar(double big_q, double v_max, double contrast, double detuning) {
    return GratingConfig(big_q, v_max, contrast, detuning, std::nullopt);
}

GratingConfig GratingConfig::from_fields(double big_q, double v_max, double detuning, const FieldPair& fields) {
    return GratingConfig(big_q, v_max, contrast_from_fields(fields.plus, fields.minus), detuning, fields);
}

void GratingConfig::validate() const {
    require(std::isfinite(big_q_) && big_q_ > 0.0, ErrorKind::InvalidParameter, "big_q must be positive");
    require(std::isfinite(v_max_), ErrorKind::InvalidParameter, "v_max must be finite");
    require(std::isfinite(detuning_), ErrorKind::InvalidParameter, "detuning must be finite");
    if (!fields_) {
        require(std::isfinite(contrast_) && contrast_ >= 0.0 && contrast_ <= 1.0, ErrorKind::InvalidParameter,
                "contrast must lie in [0,1]");
    } else {
        // Field-derived contrast is negative when the standing-wave maxima sit at cos 2Qx = -1.
        require(std::abs(contrast_) <= 1.0 + 1e-12, ErrorKind::InvalidParameter, "contrast must lie in [-1,1]");
        const double eps = contrast_from_fields(fields_->plus, fields_->minus);
        require(std::abs(eps - contrast_) <= 1e-12, ErrorKind::InvalidParameter,
                "contrast inconsistent with field amplitudes");
    }
}

FieldPair GratingConfig::field_amplitudes() const {
    if (fields_) return *fields_;
    // Parallel waves with |E_-| <= |E_+| = 1 and 2r/(1+r^2) = contrast.
    const double r = contrast_ > 0.0 ? (1.0 - std::sqrt(1.0 - contrast_ * contrast_)) / contrast_ : 0.0;
    return FieldPair{SphericalVector::pi(1.0), SphericalVector::pi(r)};
}

GratingConfig GratingConfig::with_v_max(double v_max) const {
    return GratingConfig(big_q_, v_max, contrast_, detuning_, fields_);
}

GratingConfig GratingConfig::with_contrast(double contrast) const {
    return GratingConfig(big_q_, v_max_, contrast, detuning_, std::nullopt);
}

GratingConfig GratingConfig::with_big_q(double big_q) const {
    return GratingConfig(big_q, v_max_, contrast_, detuning_, fields_);
}

GratingConfig GratingConfig::with_detuning(double detuning) const {
    return GratingConfig(big_q_, v_max_, contrast_, detuning, fields_);
}

GratingConfig GratingConfig::with_detuning_at_fixed_intensity(double detuning) const {
    require(detuning_ != 0.0 && detuning != 0.0, ErrorKind::InvalidParameter,
            "fixed-intensity detuning change needs nonzero detunings");
    return GratingConfig(big_q_, v_max_ * detuning_ / detuning, contrast_, detuning, fields_);
}

std::string InternalState::label() const {
    switch (kind) {
        case Kind::Ground: return "g";
        case Kind::Excited: return "e";
        case Kind::Sublevel: return (two_m >= 0 ? "m=+" : "m=-") + std::to_string(std::abs(two_m)) + "/2";
    }
    return "?";
}

InternalState InternalState::from_label(std::string_view label) {
    if (label == "g" || label == "ground") return ground();
    if (label == "e" || label == "excited") return excited();
    if (label == "m=+1/2" || label == "+1/2") return sublevel(1);
    if (label == "m=-1/2" || label == "-1/2") return sublevel(-1);
    fail(ErrorKind::InvalidParameter, "unknown internal state '" + std::string(label) + "'");
}

void IncidentState::validate() const {
    require(std::isfinite(k_xi), ErrorKind::InvalidParameter, "k_xi must be finite");
    require(std::isfinite(k_zi) && k_zi > 0.0, ErrorKind::InvalidParameter, "k_zi must be positive");
}

IncidentState IncidentState::with_k_zi(double k) const {
    IncidentState copy = *this;
    copy.k_zi = k;
    copy.validate();
    return copy;
}

double Channel::k_z() const { return open ? std::sqrt(k_z_sq) : 0.0; }

double Channel::decay_rate() const { return open ? 0.0 : std::sqrt(-k_z_sq); }

std::string Channel::label() const {
    std::ostringstream out;
    out << "nu=" << order;
    if (internal.kind == InternalState::Kind::Sublevel) out << ',' << internal.label();
    return out.str();
}

std::optional<std::size_t> ChannelSet::find(int order, InternalState internal) const {
    for (std::size_t i = 0; i < channels.size(); ++i)
        if (channels[i].order == order && channels[i].internal == internal) return i;
    return std::nullopt;
}

double ChannelSet::kinetic_offset(std::size_t i) const {
    const double kx = channels[i].k_x;
    return kx * kx - k_xi * k_xi;
}

double ChannelSet::internal_offset(std::size_t i) const {
    return channels[i].internal.kind == InternalState::Kind::Excited ? -detuning : 0.0;
}

bool is_excited_order(Model model, int order) { return model == Model::TwoLevel && (order % 2 != 0); }

ChannelSet build_channels(const IncidentState& incident, const GratingConfig& grating, int nu_max, Model model) {
    incident.validate();
    require(nu_max >= 1, ErrorKind::InvalidParameter, "nu_max must be at least 1");

    ChannelSet set;
    set.model = model;
    set.nu_max = nu_max;
    set.big_q = grating.big_q();
    set.detuning = grating.detuning();
    set.k_xi = incident.k_xi;
    set.k_zi = incident.k_zi;
    set.incident_internal = incident.internal;

    const double q = grating.big_q();
    const double doppler = doppler_shift(incident, grating);
    const int step = model == Model::TwoLevel ? 1 : 2;
    const int first = -(nu_max / step) * step;

    std::vector<InternalState> sublevels;
    switch (model) {
        case Model::OneLevel:
        case Model::TwoLevel: sublevels = {InternalState::ground()}; break;
        case Model::Multilevel: sublevels = {InternalState::sublevel(-1), InternalState::sublevel(1)}; break;
    }
    if (model == Model::Multilevel) {
        require(incident.internal.kind == InternalState::Kind::Sublevel && std::abs(incident.internal.two_m) == 1,
                ErrorKind::InvalidParameter, "multilevel incident state must be m = +1/2 or m = -1/2");
    } else {
        require(incident.internal == InternalState::ground(), ErrorKind::InvalidParameter,
                "incident state must be the ground state for this model");
    }

    for (int nu = first; nu <= nu_max; nu += step) {
        for (InternalState internal : sublevels) {
            Channel ch;
            ch.order = nu;
            ch.internal = internal;
            if (is_excited_order(model, nu)) ch.internal = InternalState::excited();
            ch.k_x = incident.k_xi + nu * q;
            ch.k_z_sq = incident.k_zi * incident.k_zi - nu * doppler - static_cast<double>(nu) * nu * q * q;
            if (ch.internal.kind == InternalState::Kind::Excited) ch.k_z_sq += grating.detuning();
            ch.open = ch.k_z_sq > 0.0;
            set.channels.push_back(ch);
        }
    }
    const auto incident_channel = set.find(0, incident.internal);
    require(incident_channel.has_value(), ErrorKind::InvalidParameter, "incident channel missing from basis");
    set.incident_index = *incident_channel;
    return set;
}

double diffraction_angle(const Channel& channel) {
    require(channel.open, ErrorKind::ClosedChannel, "diffraction angle of closed channel " + channel.label());
    return std::atan2(channel.k_x, channel.k_z());
}

double doppler_shift(const IncidentState& incident, const GratingConfig& grating) {
    return 2.0 * grating.big_q() * incident.k_xi;
}

double ConservationReport::max_violation() const { return std::max(max_momentum_violation, max_energy_violation); }

ConservationReport conservation_check(const ChannelSet& channels, const IncidentState& incident, double threshold) {
    ConservationReport report;
    const double total = incident.k_xi * incident.k_xi + incident.k_zi * incident.k_zi;
    for (std::size_t i = 0; i < channels.size(); ++i) {
        const Channel& ch = channels[i];
        const double transfer = ch.order * channels.big_q;
        const double dp = std::abs((ch.k_x - incident.k_xi) - transfer) / std::max(1.0, std::abs(transfer));
        const double energy = ch.k_x * ch.k_x + ch.k_z_sq + channels.internal_offset(i);
        const double de = std::abs(energy - total) / std::max(1.0, total);
        report.max_momentum_violation = std::max(report.max_momentum_violation, dp);
        report.max_energy_violation = std::max(report.max_energy_violation, de);
        const bool open_flag_ok = ch.open == (ch.k_z_sq > 0.0);
        if (dp > threshold || de > threshold || !open_flag_ok) report.flagged.push_back(i);
    }
    return report;
}

}  // namespace ewg
