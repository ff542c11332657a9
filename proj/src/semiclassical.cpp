#include "ewg/semiclassical.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>
#include <sstream>

#include <boost/math/interpolators/cardinal_cubic_b_spline.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/roots.hpp>

#include "ewg/errors.hpp"
#include "ewg/potentials.hpp"
#include "ewg/scalar_models.hpp"
#include "ewg/special_functions.hpp"

namespace ewg {

using std::numbers::pi;

double landau_zener_exponent(double gap, double slope_diff, double velocity) {
    require(std::isfinite(gap) && std::isfinite(slope_diff), ErrorKind::InvalidParameter,
            "crossing parameters must be finite");
    require(slope_diff > 0.0, ErrorKind::InvalidParameter, "slope difference must be positive");
    require(velocity >= 0.0, ErrorKind::InvalidParameter, "velocity must be non-negative");
    require(velocity > 0.0, ErrorKind::ModelInvalid,
            "zero velocity at the crossing; the Landau-Zener model does not apply (use the Raman DWBA)");
    // hbar v = 2 v in recoil units when v is measured in hbar kappa / M.
    return 0.25 * gap * gap / (2.0 * velocity * slope_diff);
}

double landau_zener_probability(double gap, double slope_diff, double velocity) {
    return std::exp(-2.0 * pi * landau_zener_exponent(gap, slope_diff, velocity));
}

double stokes_phase(double lz_exponent) {
    require(lz_exponent >= 0.0, ErrorKind::InvalidParameter, "Zener exponent must be non-negative");
    if (lz_exponent == 0.0) return pi / 4.0;
    const double arg_gamma = std::imag(special::log_gamma({1.0, -lz_exponent}));
    return pi / 4.0 + lz_exponent * (std::log(lz_exponent) - 1.0) + arg_gamma;
}

double CrossingNode::diabatic_probability() const { return std::exp(-2.0 * pi * lz_exponent); }

CrossingNode make_crossing_node(const AvoidedCrossing& crossing, double local_velocity) {
    CrossingNode node;
    node.crossing = crossing;
    node.local_velocity = local_velocity;
    node.lz_exponent = landau_zener_exponent(crossing.gap, crossing.slope_diff, local_velocity);
    const double p = node.diabatic_probability();
    const double t = std::sqrt(p);
    const double s = std::sqrt(-std::expm1(-2.0 * pi * node.lz_exponent));
    const std::complex<double> phase = std::polar(1.0, stokes_phase(node.lz_exponent) - pi / 2.0);
    // Columns: outer lower, outer upper.  Rows: inner lower, inner upper.  A
    // diabatic passage swaps the adiabatic label.
    node.split_amplitudes << s * std::conj(phase), -t, t, s * phase;
    return node;
}

double wkb_phase(const Surface& surface, double energy, double z_a, double z_b, int reflections) {
    require(reflections >= 0, ErrorKind::InvalidParameter, "reflection count must be non-negative");
    const double lo = std::min(z_a, z_b);
    const double hi = std::max(z_a, z_b);
    const double maslov = -0.5 * pi * reflections;
    if (hi == lo) return maslov;

    constexpr int samples = 256;
    for (int i = 1; i < samples; ++i) {
        const double z = lo + (hi - lo) * i / samples;
        const double w = surface(z);
        if (energy - w < -1e-9 * std::max({std::abs(energy), std::abs(w), 1.0})) {
            std::ostringstream msg;
            msg << "classically forbidden at z = " << z << " (W = " << w << ", E = " << energy << ")";
            fail(ErrorKind::InvalidPath, msg.str());
        }
    }
    // z = lo + (hi - lo)(3s^2 - 2s^3) has dz/ds vanishing at both ends, which
    // removes the square-root behaviour at turning points.
    const double width = hi - lo;
    auto integrand = [&](double s) {
        const double z = lo + width * s * s * (3.0 - 2.0 * s);
        return std::sqrt(std::max(0.0, energy - surface(z))) * 6.0 * width * s * (1.0 - s);
    };
    const double value =
        boost::math::quadrature::gauss_kronrod<double, 31>::integrate(integrand, 0.0, 1.0, 15, 1e-12);
    return value + maslov;
}

Surface track_surface(const AdiabaticLandscape& landscape, std::size_t track) {
    require(track < landscape.surfaces.size(), ErrorKind::InvalidParameter, "track index out of range");
    const auto& z = landscape.z_grid;
    require(z.size() >= 4, ErrorKind::InvalidParameter, "landscape grid too short for interpolation");
    const double h = (z.back() - z.front()) / static_cast<double>(z.size() - 1);
    for (std::size_t i = 1; i < z.size(); ++i)
        require(std::abs(z[i] - z[i - 1] - h) <= 1e-9 * std::abs(h), ErrorKind::InvalidParameter,
                "track interpolation needs a uniform grid");
    const auto& w = landscape.surfaces[track];
    auto spline = std::make_shared<boost::math::interpolators::cardinal_cubic_b_spline<double>>(
        w.begin(), w.end(), z.front(), h);
    const double z0 = z.front();
    const double z1 = z.back();
    return [spline, z0, z1](double x) {
        if (x < z0 || x > z1) {
            std::ostringstream msg;
            msg << "z = " << x << " outside the landscape grid [" << z0 << ", " << z1 << "]";
            fail(ErrorKind::Geometry, msg.str());
        }
        return (*spline)(x);
    };
}

double RamanPair::crossing_position() const {
    require(b > a, ErrorKind::NoCrossing, "diffracted light shift does not exceed the incident one");
    require(offset > 0.0, ErrorKind::NoCrossing, "diffracted channel lies above the incident one");
    return 0.5 * std::log((b - a) / offset);
}

RamanPair raman_pair(const GratingConfig& grating, const IncidentState& incident) {
    incident.validate();
    const InternalState up = InternalState::sublevel(1);
    const InternalState down = InternalState::sublevel(-1);
    require(incident.internal == up, ErrorKind::InvalidParameter, "the Raman pair starts in m = +1/2");
    const ChannelSet channels = build_channels(incident, grating, 2, Model::Multilevel);
    const CouplingMatrixField field = multilevel_matrix(grating, channels);
    const auto in = channels.find(0, up);
    const auto out = channels.find(-2, down);
    require(in && out, ErrorKind::InvalidParameter, "Raman channels missing from the basis");
    const auto i = static_cast<Eigen::Index>(*in);
    const auto o = static_cast<Eigen::Index>(*out);

    RamanPair pair;
    pair.a = std::real(field.decay2()(i, i));
    pair.b = std::real(field.decay2()(o, o));
    pair.r = field.decay2()(o, i);
    pair.offset = channels[*out].k_z_sq - incident.normal_energy();
    pair.k_in = incident.k_zi;
    require(channels[*out].open, ErrorKind::ClosedChannel, "diffracted Raman channel is closed");
    pair.k_out = channels[*out].k_z();
    return pair;
}

namespace {

struct PairSurfaces {
    RamanPair pair;

    double diagonal_in(double z) const { return pair.a * std::exp(-2.0 * z); }
    double diagonal_out(double z) const { return pair.b * std::exp(-2.0 * z) - pair.offset; }
    double half_split(double z) const {
        const double d = 0.5 * (diagonal_in(z) - diagonal_out(z));
        return std::hypot(d, std::abs(pair.r) * std::exp(-2.0 * z));
    }
    double lower(double z) const { return 0.5 * (diagonal_in(z) + diagonal_out(z)) - half_split(z); }
    double upper(double z) const { return 0.5 * (diagonal_in(z) + diagonal_out(z)) + half_split(z); }
};

// Turning point of a decreasing surface inside z_hi.
double turning_point(const Surface& surface, double energy, double z_hi) {
    double z_lo = z_hi - 1.0;
    while (surface(z_lo) < energy) z_lo -= 1.0;
    auto f = [&](double z) { return surface(z) - energy; };
    boost::math::tools::eps_tolerance<double> tol(50);
    std::uintmax_t iterations = 200;
    const auto [a, b] = boost::math::tools::toms748_solve(f, z_lo, z_hi, tol, iterations);
    return 0.5 * (a + b);
}

}  // namespace

MichelsonResult michelson_diffraction(const GratingConfig& grating, const IncidentState& incident) {
    const RamanPair pair = raman_pair(grating, incident);
    const double energy = incident.normal_energy();
    if (!(pair.b > pair.a && pair.b - pair.a > pair.offset)) {
        std::ostringstream msg;
        msg << "light-shift difference " << pair.b - pair.a << " at the surface does not exceed the channel offset "
            << pair.offset << "; the potentials do not cross";
        fail(ErrorKind::NoCrossing, msg.str());
    }
    if (!(energy < pair.a && energy + pair.offset < pair.b)) {
        fail(ErrorKind::Geometry, "incident energy exceeds a barrier top; the turning point lies inside the surface");
    }

    const PairSurfaces s{pair};
    const double z_c = pair.crossing_position();
    const double u_c = s.diagonal_in(z_c);

    MichelsonResult result;
    AvoidedCrossing crossing;
    crossing.z_c = z_c;
    crossing.surface_pair = {0, 1};
    crossing.gap = 2.0 * std::abs(pair.r) * std::exp(-2.0 * z_c);
    crossing.slope_diff = 2.0 * (pair.b - pair.a) * std::exp(-2.0 * z_c);
    result.paths.channel_amplitudes.assign(2, 0.0);

    const Surface lower = [s](double z) { return s.lower(z); };
    const Surface upper = [s](double z) { return s.upper(z); };
    result.turning_incident = turning_point([s](double z) { return s.diagonal_in(z); }, energy, z_c + 50.0);
    result.turning_diffracted = turning_point([s](double z) { return s.diagonal_out(z); }, energy, z_c + 50.0);

    result.reaches_crossing = energy > s.upper(z_c);
    if (!result.reaches_crossing) {
        // Classically reflected on the incident surface before the crossing.
        result.node.crossing = crossing;
        result.specular = 1.0;
        result.paths.channel_amplitudes[0] = 1.0;
        return result;
    }

    result.node = make_crossing_node(crossing, std::sqrt(energy - u_c));
    const Eigen::Matrix2cd& n_in = result.node.split_amplitudes;
    const Eigen::Matrix2cd n_out = n_in.transpose();

    const double z_lower = turning_point(lower, energy, z_c);
    const double z_upper = turning_point(upper, energy, z_c);
    const std::array<double, 2> arm_phase = {2.0 * wkb_phase(lower, energy, z_lower, z_c) - 0.5 * pi,
                                             2.0 * wkb_phase(upper, energy, z_upper, z_c) - 0.5 * pi};

    // Enter on the outer upper surface (incident channel); exit on the outer
    // lower (diffracted, channel 1) or upper (specular, channel 0) surface.
    for (int arm = 0; arm < 2; ++arm) {
        for (int exit = 0; exit < 2; ++exit) {
            PathContribution path;
            path.nodes = {0, 0};
            path.phase = arm_phase[static_cast<std::size_t>(arm)];
            path.exit_channel = exit == 0 ? 1 : 0;
            path.amplitude = n_out(exit, arm) * std::polar(1.0, path.phase) * n_in(arm, 1);
            result.paths.channel_amplitudes[path.exit_channel] += path.amplitude;
            result.paths.paths.push_back(path);
        }
    }
    result.specular = result.paths.probability(0);
    result.diffracted = result.paths.probability(1);
    return result;
}

double raman_dwba(const GratingConfig& grating, const IncidentState& incident) {
    const RamanPair pair = raman_pair(grating, incident);
    require(incident.normal_energy() < pair.a && pair.k_out * pair.k_out < pair.b, ErrorKind::OutOfModel,
            "Raman DWBA needs both states reflected by their barriers");
    if (pair.r == 0.0) return 0.0;
    const std::complex<double> overlap = distorted_wave_overlap(pair.k_in, pair.a, pair.k_out, pair.b);
    return std::norm(pair.r * overlap) / (4.0 * pair.k_in * pair.k_out);
}

double optimum_incident_energy(double light_shift_ratio, double doppler) {
    require(std::isfinite(light_shift_ratio) && std::isfinite(doppler), ErrorKind::InvalidParameter,
            "optimum condition needs finite inputs");
    require(light_shift_ratio > 1.0, ErrorKind::NoSolution, "light-shift ratio <= 1: the potentials never cross");
    return 2.0 * doppler / (light_shift_ratio - 1.0);
}

double doppleron_rabi(double v0, double base, int l) {
    require(l >= 1, ErrorKind::InvalidParameter, "Doppleron index l must be >= 1");
    return v0 * std::pow(base, 2 * l - 1);
}

double doppleron_rabi(const GratingConfig& grating, int l, double z_c) {
    require(grating.detuning() > 0.0, ErrorKind::InvalidParameter, "Doppleron estimate needs a positive detuning");
    const double v0 = grating.v_max() * std::exp(-2.0 * z_c);
    const double base = std::sqrt(grating.coupling_sq()) * std::exp(1.0 - z_c) / grating.detuning();
    return doppleron_rabi(v0, base, l);
}

std::vector<double> doppleron_resonance_detunings(double doppler, int l_max) {
    std::vector<double> out;
    for (int l = 1; l <= l_max; ++l) out.push_back((2 * l + 1) * doppler);
    return out;
}

double four_crossing_estimate(const std::array<double, 4>& splitting_probabilities) {
    double product = 1.0;
    for (double p : splitting_probabilities) {
        require(p >= 0.0 && p <= 1.0, ErrorKind::InvalidParameter, "splitting probability outside [0, 1]");
        product *= p;
    }
    return product;
}

}  // namespace ewg
