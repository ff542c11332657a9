#include "ewg/potentials.hpp"

#include <algorithm>
#include <cmath>

#include "ewg/clebsch_gordan.hpp"
#include "ewg/errors.hpp"

namespace ewg {

SphericalVector SphericalVector::sigma_minus(cplx amplitude) {
    SphericalVector v;
    v[-1] = amplitude;
    return v;
}

SphericalVector SphericalVector::pi(cplx amplitude) {
    SphericalVector v;
    v[0] = amplitude;
    return v;
}

SphericalVector SphericalVector::sigma_plus(cplx amplitude) {
    SphericalVector v;
    v[1] = amplitude;
    return v;
}

SphericalVector spherical_from_cartesian(cplx ex, cplx ey, cplx ez) {
    const double r = 1.0 / std::sqrt(2.0);
    const cplx i(0.0, 1.0);
    SphericalVector v;
    v[1] = -r * (ex + i * ey);
    v[0] = ez;
    v[-1] = r * (ex - i * ey);
    return v;
}

cplx inner(const SphericalVector& a, const SphericalVector& b) {
    cplx sum = 0.0;
    for (std::size_t k = 0; k < 3; ++k) sum += std::conj(a.c[k]) * b.c[k];
    return sum;
}

double intensity(const SphericalVector& a) { return std::real(inner(a, a)); }

SphericalVector scaled(const SphericalVector& a, cplx factor) {
    SphericalVector v = a;
    for (auto& c : v.c) c *= factor;
    return v;
}

double contrast_from_fields(const SphericalVector& e_plus, const SphericalVector& e_minus) {
    const double total = intensity(e_plus) + intensity(e_minus);
    require(std::isfinite(total) && total > 0.0, ErrorKind::InvalidParameter, "field amplitudes have zero intensity");
    return std::clamp(2.0 * std::real(inner(e_plus, e_minus)) / total, -1.0, 1.0);
}

double IncidentBarrier::mean(double z) const {
    const double w = mean_weight * std::exp(-2.0 * z);
    if (!dressed) return w;
    return 0.5 * (std::sqrt(detuning * detuning + 4.0 * w) - detuning);
}

double IncidentBarrier::minimum(double z) const {
    const double w = min_weight * std::exp(-2.0 * z);
    if (!dressed) return w;
    return 0.5 * (std::sqrt(detuning * detuning + 4.0 * w) - detuning);
}

CouplingMatrixField::CouplingMatrixField(ChannelSet basis, Matrix constant, Matrix decay1, Matrix decay2,
                                         IncidentBarrier barrier)
    : basis_(std::move(basis)),
      constant_(std::move(constant)),
      decay1_(std::move(decay1)),
      decay2_(std::move(decay2)),
      barrier_(barrier),
      kinetic_(static_cast<Eigen::Index>(basis_.size())) {
    const auto n = static_cast<Eigen::Index>(basis_.size());
    require(constant_.rows() == n && constant_.cols() == n && decay1_.rows() == n && decay1_.cols() == n &&
                decay2_.rows() == n && decay2_.cols() == n,
            ErrorKind::InvalidParameter, "coupling matrices do not match the channel basis");
    for (Eigen::Index i = 0; i < n; ++i) kinetic_[i] = basis_.kinetic_offset(static_cast<std::size_t>(i));
    max_decay1_ = decay1_.cwiseAbs().maxCoeff();
    max_decay2_ = decay2_.cwiseAbs().maxCoeff();
}

Matrix CouplingMatrixField::evaluate(double z) const {
    return constant_ + std::exp(-z) * decay1_ + std::exp(-2.0 * z) * decay2_;
}

Matrix CouplingMatrixField::evaluate_with_kinetic(double z) const {
    Matrix m = evaluate(z);
    m.diagonal() += kinetic_.cast<cplx>();
    return m;
}

Matrix CouplingMatrixField::derivative(double z) const {
    return -std::exp(-z) * decay1_ - 2.0 * std::exp(-2.0 * z) * decay2_;
}

double CouplingMatrixField::coupling_magnitude(double z) const {
    return std::max(max_decay1_ * std::exp(-z), max_decay2_ * std::exp(-2.0 * z));
}

double CouplingMatrixField::max_hermiticity_defect(double z) const {
    const Matrix m = evaluate(z);
    const double scale = std::max(m.cwiseAbs().maxCoeff(), 1e-300);
    return (m - m.adjoint()).cwiseAbs().maxCoeff() / scale;
}

double scalar_potential(double x, double z, const GratingConfig& grating) {
    return grating.v_max() * (1.0 + grating.contrast() * std::cos(2.0 * grating.big_q() * x)) * std::exp(-2.0 * z);
}

namespace {

Matrix zeros(std::size_t n) {
    const auto m = static_cast<Eigen::Index>(n);
    return Matrix::Zero(m, m);
}

Eigen::Index idx(std::size_t i) { return static_cast<Eigen::Index>(i); }

}  // namespace

CouplingMatrixField one_level_matrix(const GratingConfig& grating, const ChannelSet& channels) {
    require(channels.model == Model::OneLevel, ErrorKind::InvalidParameter, "channel basis is not one-level");
    const std::size_t n = channels.size();
    Matrix d2 = zeros(n);
    const double half_mod = 0.5 * grating.contrast() * grating.v_max();
    for (std::size_t i = 0; i < n; ++i) {
        d2(idx(i), idx(i)) = grating.v_max();
        for (std::size_t j = 0; j < n; ++j)
            if (std::abs(channels[i].order - channels[j].order) == 2) d2(idx(i), idx(j)) = half_mod;
    }
    IncidentBarrier barrier{grating.v_max(), grating.v_max() * (1.0 - grating.contrast()), false, 0.0};
    return CouplingMatrixField(channels, zeros(n), zeros(n), std::move(d2), barrier);
}

CouplingMatrixField two_level_matrix(const GratingConfig& grating, const ChannelSet& channels) {
    require(channels.model == Model::TwoLevel, ErrorKind::InvalidParameter, "channel basis is not two-level");
    const double coupling_sq = grating.coupling_sq();
    require(coupling_sq > 0.0, ErrorKind::InvalidParameter,
            "two-level model needs v_max and detuning of the same sign");
    const FieldPair fields = grating.field_amplitudes();
    const double i_plus = intensity(fields.plus);
    const double i_minus = intensity(fields.minus);
    const double total = i_plus + i_minus;
    require(total > 0.0, ErrorKind::InvalidParameter, "field amplitudes have zero intensity");

    // Scalar amplitudes along the common polarisation.
    const SphericalVector& reference = i_plus > 0.0 ? fields.plus : fields.minus;
    const double ref_norm = std::sqrt(intensity(reference));
    const cplx e_plus = inner(reference, fields.plus) / ref_norm;
    const cplx e_minus = inner(reference, fields.minus) / ref_norm;
    require(std::abs(std::norm(e_plus) + std::norm(e_minus) - total) <= 1e-12 * total, ErrorKind::InvalidParameter,
            "two-level model needs parallel polarisations of both waves");

    const double scale = std::sqrt(coupling_sq / total);
    const std::size_t n = channels.size();
    Matrix c = zeros(n);
    Matrix d1 = zeros(n);
    for (std::size_t i = 0; i < n; ++i) {
        const Channel& ch = channels[i];
        const bool excited = ch.internal.kind == InternalState::Kind::Excited;
        require(excited == is_excited_order(Model::TwoLevel, ch.order), ErrorKind::InvalidParameter,
                "two-level basis must alternate ground and excited states");
        if (!excited) continue;
        c(idx(i), idx(i)) = -grating.detuning();
        for (std::size_t j = 0; j < n; ++j) {
            const int diff = ch.order - channels[j].order;
            // Absorbing from the + wave raises the order by one, from the - wave lowers it.
            cplx value = 0.0;
            if (diff == 1) value = -scale * e_plus;
            if (diff == -1) value = -scale * e_minus;
            if (value == cplx(0.0)) continue;
            d1(idx(i), idx(j)) = value;
            d1(idx(j), idx(i)) = std::conj(value);
        }
    }
    const double eps = contrast_from_fields(fields.plus, fields.minus);
    IncidentBarrier barrier{coupling_sq, coupling_sq * (1.0 - std::abs(eps)), true, grating.detuning()};
    return CouplingMatrixField(channels, std::move(c), std::move(d1), zeros(n), barrier);
}

CouplingMatrixField multilevel_matrix(const GratingConfig& grating, const ChannelSet& channels) {
    require(channels.model == Model::Multilevel, ErrorKind::InvalidParameter, "channel basis is not multilevel");
    const FieldPair fields = grating.field_amplitudes();
    const double total = fields.total_intensity();
    require(std::isfinite(total) && total > 0.0, ErrorKind::InvalidParameter, "field amplitudes have zero intensity");
    const double scale = grating.v_max() / total;

    // <1/2 m; 1 q | 3/2 m+q>
    auto cg = [](int two_m, int q) {
        const int two_me = two_m + 2 * q;
        if (std::abs(two_me) > 3) return 0.0;
        return clebsch_gordan_doubled(1, two_m, 2, 2 * q, 3, two_me);
    };

    // Field products conj(E_a,q) E_b,q' for the order change they produce.
    auto weight = [&](int order_change, int q, int qp) -> cplx {
        switch (order_change) {
            case 0: return std::conj(fields.plus[q]) * fields.plus[qp] + std::conj(fields.minus[q]) * fields.minus[qp];
            case -2: return std::conj(fields.plus[q]) * fields.minus[qp];
            case 2: return std::conj(fields.minus[q]) * fields.plus[qp];
            default: return 0.0;
        }
    };

    const std::size_t n = channels.size();
    Matrix d2 = zeros(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const Channel& row = channels[i];
            const Channel& col = channels[j];
            const int change = row.order - col.order;
            if (std::abs(change) > 2) continue;
            const int two_m = row.internal.two_m;
            const int two_mp = col.internal.two_m;
            cplx sum = 0.0;
            for (int q = -1; q <= 1; ++q) {
                for (int qp = -1; qp <= 1; ++qp) {
                    if (two_m + 2 * q != two_mp + 2 * qp) continue;
                    const double c = cg(two_m, q) * cg(two_mp, qp);
                    if (c == 0.0) continue;
                    sum += weight(change, q, qp) * c;
                }
            }
            d2(idx(i), idx(j)) = scale * sum;
        }
    }
    // Exact Hermitian symmetry despite rounding in the sums.
    d2 = 0.5 * (d2 + d2.adjoint()).eval();

    const std::size_t inc = channels.incident_index;
    const double mean = std::real(d2(idx(inc), idx(inc)));
    double off = 0.0;
    for (std::size_t j = 0; j < n; ++j)
        if (j != inc) off += std::abs(d2(idx(inc), idx(j)));
    IncidentBarrier barrier{mean, std::max(0.0, mean - off), false, 0.0};
    return CouplingMatrixField(channels, zeros(n), zeros(n), std::move(d2), barrier);
}

CouplingMatrixField coupling_field(Model model, const GratingConfig& grating, const ChannelSet& channels) {
    require(channels.model == model, ErrorKind::InvalidParameter, "channel basis built for a different model");
    switch (model) {
        case Model::OneLevel: return one_level_matrix(grating, channels);
        case Model::TwoLevel: return two_level_matrix(grating, channels);
        case Model::Multilevel: return multilevel_matrix(grating, channels);
    }
    fail(ErrorKind::InvalidParameter, "unknown model");
}

}  // namespace ewg
