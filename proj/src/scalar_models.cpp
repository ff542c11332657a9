#include "ewg/scalar_models.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <numbers>
#include <sstream>

#include "ewg/errors.hpp"
#include "ewg/special_functions.hpp"

namespace ewg {

using std::numbers::pi;

std::string_view to_string(ScalarModel model) {
    switch (model) {
        case ScalarModel::Dwba: return "dwba";
        case ScalarModel::Tpga: return "tpga";
        case ScalarModel::HardWall: return "hard_wall";
    }
    return "unknown";
}

double ScalarPrediction::probability(int order) const {
    const auto it = probabilities.find(order);
    return it == probabilities.end() ? 0.0 : it->second;
}

double ScalarPrediction::total() const {
    double sum = 0.0;
    for (const auto& [order, p] : probabilities) sum += p;
    return sum;
}

double beta(double xi) {
    const double a = 0.5 * pi * std::abs(xi);
    if (a < 1e-4) return 1.0 - a * a / 6.0;
    // a / sinh(a) written to stay finite for large a.
    return 2.0 * a * std::exp(-a) / -std::expm1(-2.0 * a);
}

double beta_asymptotic(double xi) {
    const double a = 0.5 * pi * std::abs(xi);
    return 2.0 * a * std::exp(-a);
}

double flat_barrier_turning_point(double k_z, double v_max) {
    require(v_max > 0.0, ErrorKind::InvalidParameter, "flat barrier needs v_max > 0");
    require(k_z > 0.0, ErrorKind::InvalidParameter, "flat barrier needs k_z > 0");
    return 0.5 * std::log(v_max / (k_z * k_z));
}

namespace {

// theta = arg Gamma(-ik) + k ln(sqrt(V)/2)
double barrier_phase(double k, double v_max) {
    return -std::imag(special::log_gamma({0.0, k})) + k * std::log(0.5 * std::sqrt(v_max));
}

}  // namespace

std::complex<double> flat_barrier_reflection(double k_z, double v_max) {
    require(v_max > 0.0, ErrorKind::InvalidParameter, "flat barrier needs v_max > 0");
    require(k_z > 0.0, ErrorKind::InvalidParameter, "flat barrier needs k_z > 0");
    // r = Gamma(ik)/Gamma(-ik) (sqrt(V)/2)^{-2ik} = exp(-2 i theta)
    return std::polar(1.0, -2.0 * barrier_phase(k_z, v_max));
}

std::complex<double> flat_barrier_wavefunction(double k_z, double v_max, double z) {
    require(v_max > 0.0, ErrorKind::InvalidParameter, "flat barrier needs v_max > 0");
    require(k_z > 0.0, ErrorKind::InvalidParameter, "flat barrier needs k_z > 0");
    const double x = std::sqrt(v_max) * std::exp(-z);
    if (x == 0.0) {
        const std::complex<double> r = flat_barrier_reflection(k_z, v_max);
        return std::polar(1.0, -k_z * z) + r * std::polar(1.0, k_z * z);
    }
    // 2 K_{ik}(x) / (Gamma(-ik) (sqrt(V)/2)^{ik}) with K = e^{-pi k/2} K_scaled.
    const double norm = 2.0 * std::sqrt(k_z * -std::expm1(-2.0 * pi * k_z) / (2.0 * pi));
    return norm * special::bessel_k_imag_scaled(k_z, x) * std::polar(1.0, -barrier_phase(k_z, v_max));
}

std::complex<double> distorted_wave_overlap(double k_i, double v_i, double k_f, double v_f) {
    const double z_i = flat_barrier_turning_point(k_i, v_i);
    const double z_f = flat_barrier_turning_point(k_f, v_f);
    const double lo = std::min(z_i, z_f) - 4.0;
    const double hi = std::max(z_i, z_f) + 12.0;
    // Only the reflection phases differ between psi and its conjugate, so use the
    // real standing-wave parts and restore the phase afterwards.
    const double phase_i = barrier_phase(k_i, v_i);
    const double phase_f = barrier_phase(k_f, v_f);
    const double norm_i = 2.0 * std::sqrt(k_i * -std::expm1(-2.0 * pi * k_i) / (2.0 * pi));
    const double norm_f = 2.0 * std::sqrt(k_f * -std::expm1(-2.0 * pi * k_f) / (2.0 * pi));
    const double si = std::sqrt(v_i);
    const double sf = std::sqrt(v_f);
    auto integrand = [&](double z) {
        const double e = std::exp(-z);
        return special::bessel_k_imag_scaled(k_f, sf * e) * special::bessel_k_imag_scaled(k_i, si * e) * e * e;
    };
    double error = 0.0;
    double l1 = 0.0;
    const double value = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(integrand, lo, hi, 20, 1e-10,
                                                                                       &error, &l1);
    if (!(error <= std::max(1e-8 * std::abs(value), 1e-10 * l1))) {
        std::ostringstream msg;
        msg << "distorted-wave overlap quadrature did not converge (k_i=" << k_i << ", k_f=" << k_f
            << ", estimate " << value << ", error " << error << ")";
        fail(ErrorKind::NumericalFailure, msg.str());
    }
    return norm_i * norm_f * value * std::polar(1.0, phase_f - phase_i);
}

std::complex<double> dwba_matrix_element(double k_zi, double k_zf, const GratingConfig& grating) {
    return distorted_wave_overlap(k_zi, grating.v_max(), k_zf, grating.v_max());
}

namespace {

ScalarValidity base_validity(const GratingConfig& grating, const IncidentState& incident,
                             const ChannelSet& channels) {
    ScalarValidity v;
    auto dk = [&](int order) {
        const auto i = channels.find(order, InternalState::ground());
        return i && channels[*i].open ? channels[*i].k_z() - incident.k_zi : -incident.k_zi;
    };
    v.delta_kz_plus = dk(2);
    v.delta_kz_minus = dk(-2);
    v.thin_grating_ratio = 2.0 * grating.big_q() * grating.big_q() / incident.k_zi;
    v.interaction_time = 1.0 / (2.0 * incident.k_zi);
    return v;
}

ScalarPrediction bessel_pattern(ScalarModel model, double u, int n_max) {
    require(n_max >= 0, ErrorKind::InvalidParameter, "n_max must be non-negative");
    ScalarPrediction p;
    p.model = model;
    p.modulation_index = u;
    for (int n = -n_max; n <= n_max; ++n) {
        const double j = special::bessel_j(n, u);
        p.probabilities[2 * n] = j * j;
    }
    return p;
}

}  // namespace

ScalarPrediction dwba_first_order(const GratingConfig& grating, const IncidentState& incident) {
    incident.validate();
    require(grating.v_max() > 0.0, ErrorKind::OutOfModel, "DWBA needs a repulsive barrier");
    require(incident.normal_energy() < grating.v_max(), ErrorKind::OutOfModel,
            "incident normal energy exceeds the barrier height");
    const ChannelSet channels = build_channels(incident, grating, 2, Model::OneLevel);
    ScalarPrediction p;
    p.model = ScalarModel::Dwba;
    p.validity = base_validity(grating, incident, channels);
    const double eps = grating.contrast();
    double first_order_sum = 0.0;
    for (int order : {-2, 2}) {
        const Channel& ch = channels[*channels.find(order, InternalState::ground())];
        double prob = 0.0;
        if (ch.open) {
            const double kf = ch.k_z();
            const double b = beta(kf - incident.k_zi);
            const double mean = 0.5 * (kf + incident.k_zi);
            prob = 0.25 * eps * eps * mean * mean * b * b;
        }
        p.probabilities[order] = prob;
        first_order_sum += prob;
        if (prob > 0.1) p.validity.warnings.push_back("first-order probability above 0.1; perturbation theory doubtful");
    }
    p.probabilities[0] = std::max(0.0, 1.0 - first_order_sum);
    return p;
}

ScalarPrediction hard_wall_pattern(const GratingConfig& grating, const IncidentState& incident, int n_max) {
    incident.validate();
    const double u = grating.contrast() * incident.k_zi;
    ScalarPrediction p = bessel_pattern(ScalarModel::HardWall, u, n_max);
    p.validity = base_validity(grating, incident, build_channels(incident, grating, 2, Model::OneLevel));
    p.validity.modulation_index = u;
    return p;
}

ScalarPrediction tpga_prediction(const GratingConfig& grating, const IncidentState& incident, int n_max) {
    incident.validate();
    const double tan_theta = incident.k_xi / incident.k_zi;
    const double u = grating.contrast() * incident.k_zi * beta(2.0 * grating.big_q() * tan_theta);
    ScalarPrediction p = bessel_pattern(ScalarModel::Tpga, u, n_max);
    p.validity = base_validity(grating, incident, build_channels(incident, grating, 2, Model::OneLevel));
    p.validity.modulation_index = u;
    if (p.validity.thin_grating_ratio > 0.3)
        p.validity.warnings.push_back("2Q^2/(k_zi kappa) not small; thin-grating condition violated");
    return p;
}

std::vector<ProfileSample> convolved_profile(const ScalarPrediction& prediction, double big_q, double width,
                                             const std::vector<double>& momenta) {
    require(width >= 0.0, ErrorKind::InvalidParameter, "convolution width must be non-negative");
    std::vector<ProfileSample> out;
    out.reserve(momenta.size());
    for (double k : momenta) {
        double sum = 0.0;
        for (const auto& [order, p] : prediction.probabilities) {
            const double centre = order * big_q;
            if (width == 0.0) {
                if (k == centre) sum += p;
            } else {
                const double t = (k - centre) / width;
                sum += p * std::exp(-0.5 * t * t) / (width * std::sqrt(2.0 * pi));
            }
        }
        out.push_back({k, sum});
    }
    return out;
}

}  // namespace ewg
