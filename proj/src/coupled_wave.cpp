#include "ewg/coupled_wave.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <type_traits>

#include "ewg/errors.hpp"

namespace ewg {

std::string_view to_string(LossModel model) {
    switch (model) {
        case LossModel::HardTruncation: return "hard-truncation";
        case LossModel::AbsorbingInnerBoundary: return "absorbing-inner-boundary";
    }
    return "unknown";
}

LossModel loss_model_from_string(std::string_view text) {
    if (text == "hard-truncation") return LossModel::HardTruncation;
    if (text == "absorbing-inner-boundary" || text == "absorbing") return LossModel::AbsorbingInnerBoundary;
    fail(ErrorKind::InvalidParameter, "unknown loss model '" + std::string(text) + "'");
}

void SolveRequest::validate() const {
    incident.validate();
    require(std::isfinite(z_min) && std::isfinite(z_max) && z_min < z_max, ErrorKind::InvalidParameter,
            "integration window needs z_min < z_max");
    require(tolerance > 0.0 && tolerance <= 1e-3, ErrorKind::InvalidParameter, "tolerance must lie in (0, 1e-3]");
    const ChannelSet& basis = field.basis();
    require(basis.k_zi == incident.k_zi && basis.k_xi == incident.k_xi &&
                basis.incident_internal == incident.internal,
            ErrorKind::InvalidParameter, "channel basis was built for a different incident state");
}

std::optional<std::size_t> DiffractionPattern::index_of(int order, InternalState internal) const {
    for (std::size_t i = 0; i < channels.size(); ++i)
        if (channels[i].order == order && channels[i].internal == internal) return i;
    return std::nullopt;
}

double DiffractionPattern::probability(int order) const {
    require(model != Model::Multilevel, ErrorKind::InvalidParameter, "multilevel channels need a sublevel");
    for (std::size_t i = 0; i < channels.size(); ++i)
        if (channels[i].order == order) return probabilities[i];
    return 0.0;
}

double DiffractionPattern::probability(int order, InternalState internal) const {
    const auto i = index_of(order, internal);
    return i ? probabilities[*i] : 0.0;
}

double DiffractionPattern::nonspecular() const {
    double sum = 0.0;
    for (std::size_t i = 0; i < probabilities.size(); ++i)
        if (i != incident_index) sum += probabilities[i];
    return sum;
}

IntegrationWindow default_window(const CouplingMatrixField& field, const IncidentState& incident) {
    const double energy = incident.normal_energy();
    const IncidentBarrier& barrier = field.barrier();
    IntegrationWindow w;

    // Turning point on the mean potential (monotonically decreasing in z).
    if (barrier.mean(0.0) > energy) {
        double lo = 0.0;
        double hi = 1.0;
        while (barrier.mean(hi) > energy) hi *= 2.0;
        for (int it = 0; it < 200 && hi - lo > 1e-14 * std::max(1.0, hi); ++it) {
            const double mid = 0.5 * (lo + hi);
            (barrier.mean(mid) > energy ? lo : hi) = mid;
        }
        w.z_turn = 0.5 * (lo + hi);
    } else {
        double lo = -1.0;
        const double hi = 0.0;
        while (barrier.mean(lo) <= energy && lo > -60.0) lo *= 2.0;
        if (barrier.mean(lo) > energy) {
            double a = lo;
            double b = hi;
            for (int it = 0; it < 200 && b - a > 1e-14; ++it) {
                const double mid = 0.5 * (a + b);
                (barrier.mean(mid) > energy ? a : b) = mid;
            }
            w.z_turn = 0.5 * (a + b);
        } else {
            w.z_turn = 0.0;
        }
    }

    // Inner edge: attenuation e^-40 on the weakest barrier, at most 3 units deep.
    const double step = 1e-3;
    double attenuation = 0.0;
    double z = w.z_turn;
    while (attenuation < 40.0 && z > w.z_turn - 3.0) {
        const double mid = z - 0.5 * step;
        attenuation += std::sqrt(std::max(0.0, barrier.minimum(mid) - energy)) * step;
        z -= step;
    }
    w.z_min = z;

    // Outer edge: coupling magnitude m1 e^{-z} + m2 e^{-2z} below 1e-10 E.
    const double threshold = 1e-10 * energy;
    const double m1 = field.decay1().cwiseAbs().maxCoeff();
    const double m2 = field.decay2().cwiseAbs().maxCoeff();
    double z_max = w.z_turn + 1.0;
    if (m1 > 0.0) z_max = std::max(z_max, std::log(m1 / threshold));
    if (m2 > 0.0) z_max = std::max(z_max, 0.5 * std::log(m2 / threshold));
    w.z_max = z_max;
    return w;
}

int auto_nu_max(Model model, const GratingConfig& grating, const IncidentState& incident, int closed_extra, int cap,
                double energy_margin) {
    require(cap >= 2, ErrorKind::InvalidParameter, "nu_max cap must be at least 2");
    const int step = model == Model::TwoLevel ? 1 : 2;
    const ChannelSet wide = build_channels(incident, grating, cap, model);

    int by_openness = 2;
    for (int side : {-1, 1}) {
        int last_open = 0;
        for (const Channel& ch : wide.channels)
            if (ch.open && ch.order * side > 0) last_open = std::max(last_open, std::abs(ch.order));
        by_openness = std::max(by_openness, last_open + closed_extra * step);
    }

    // Walking outward, the first order whose asymptotic energy lies far from the
    // incident one screens everything behind it: those orders are reached only
    // through strongly off-resonant steps.
    const double k2 = incident.normal_energy();
    int by_energy = 2;
    for (int side : {-1, 1}) {
        int stop = cap;
        for (int order = step; order <= cap; order += step) {
            double mismatch = std::numeric_limits<double>::infinity();
            for (const Channel& ch : wide.channels)
                if (ch.order == side * order) mismatch = std::min(mismatch, std::abs(ch.k_z_sq - k2));
            if (mismatch >= energy_margin * k2) {
                stop = order;
                break;
            }
        }
        by_energy = std::max(by_energy, stop);
    }

    return std::min({by_openness, by_energy, cap});
}

SolveRequest assemble_system(Model model, const GratingConfig& grating, const IncidentState& incident, int nu_max,
                             const SolverOptions& options) {
    const ChannelSet channels = build_channels(incident, grating, nu_max, model);
    CouplingMatrixField field = coupling_field(model, grating, channels);
    const IntegrationWindow window = default_window(field, incident);
    SolveRequest request{std::move(field), incident, options.z_min.value_or(window.z_min),
                         options.z_max.value_or(window.z_max), options.tolerance, options.loss_model};
    request.validate();
    return request;
}

namespace {

template <typename Scalar>
using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar>
Mat<Scalar> narrow(const Matrix& m) {
    if constexpr (std::is_same_v<Scalar, double>) {
        return m.real();
    } else {
        return m;
    }
}

// Johnson's log-derivative propagation of Y = psi' psi^{-1} for psi'' = W psi,
// W = V(z) + diag(kinetic + thresholds) - E.  Optionally accumulates
// T with psi(z_min) = T psi(z_max) for the inward flux.
template <typename Scalar>
class LogDerivativePropagator {
public:
    LogDerivativePropagator(const CouplingMatrixField& field, double energy)
        : n_(field.size()),
          constant_(narrow<Scalar>(field.constant_part())),
          decay1_(narrow<Scalar>(field.decay1())),
          decay2_(narrow<Scalar>(field.decay2())),
          identity_(Mat<Scalar>::Identity(n_, n_)) {
        for (Eigen::Index i = 0; i < n_; ++i) constant_(i, i) += field.kinetic_offsets()[i] - energy;
    }

    void w_matrix(double z, Mat<Scalar>& out) const {
        out.noalias() = constant_;
        out.noalias() += std::exp(-z) * decay1_;
        out.noalias() += std::exp(-2.0 * z) * decay2_;
    }

    // Gershgorin bound on the spectral radius of W.
    double local_scale(double z) const {
        Mat<Scalar> w;
        w_matrix(z, w);
        return w.cwiseAbs().rowwise().sum().maxCoeff();
    }

    // Propagates one block [z0, z1] with `steps` (even) sub-steps.  On entry
    // y holds the log-derivative at z0, on exit the one at z1.
    void block(Mat<Scalar>& y, double z0, double z1, long steps, Mat<Scalar>* t) {
        const double h = (z1 - z0) / static_cast<double>(steps);
        w_matrix(z0, w_);
        y.noalias() += (h / 3.0) * w_;
        for (long k = 1; k <= steps; ++k) {
            a_ = identity_;
            a_.noalias() += h * y;
            lu_.compute(a_);
            // (I + hY)^{-1} Y = (I - (I + hY)^{-1}) / h avoids a second product.
            inv_ = lu_.inverse();
            y = (identity_ - inv_) / h;
            if (t) {
                tmp_.noalias() = (*t) * inv_;
                *t = tmp_;
            }
            const double z = z0 + static_cast<double>(k) * h;
            w_matrix(z, w_);
            if (k == steps) {
                y.noalias() += (h / 3.0) * w_;
            } else if (k % 2 == 1) {
                a_ = identity_;
                a_.noalias() -= (h * h / 6.0) * w_;
                lu2_.compute(a_);
                y.noalias() += (4.0 * h / 3.0) * lu2_.solve(w_);
            } else {
                y.noalias() += (2.0 * h / 3.0) * w_;
            }
        }
    }

    Eigen::Index size() const { return n_; }

private:
    Eigen::Index n_;
    Mat<Scalar> constant_;
    Mat<Scalar> decay1_;
    Mat<Scalar> decay2_;
    Mat<Scalar> identity_;
    Mat<Scalar> w_, a_, inv_, tmp_;
    Eigen::PartialPivLU<Mat<Scalar>> lu_, lu2_;
};

struct RunResult {
    std::vector<cplx> amplitudes;
    std::vector<double> probabilities;
    double loss = 0.0;
    std::size_t steps = 0;
    double smallest_step = 0.0;
};

struct Block {
    double z0;
    double z1;
    long steps;
};

// Inward boundary condition at z_min for the absorbing model: locally open
// eigen-channels carry purely inward WKB waves, closed ones decay inward.
Matrix absorbing_boundary(const CouplingMatrixField& field, double energy, double z) {
    Matrix w = field.evaluate_with_kinetic(z);
    w.diagonal().array() -= energy;
    const Matrix dw = field.derivative(z);
    Eigen::SelfAdjointEigenSolver<Matrix> eig(w);
    require(eig.info() == Eigen::Success, ErrorKind::NumericalFailure, "boundary eigen-decomposition failed");
    const Matrix& u = eig.eigenvectors();
    Vector y(w.rows());
    for (Eigen::Index j = 0; j < w.rows(); ++j) {
        const double lambda = eig.eigenvalues()[j];
        const double slope = std::real(u.col(j).dot(dw * u.col(j)));
        const double wkb = lambda != 0.0 ? -slope / (4.0 * lambda) : 0.0;
        y[j] = (lambda < 0.0 ? cplx(0.0, -std::sqrt(-lambda)) : cplx(std::sqrt(lambda), 0.0)) + wkb;
    }
    return u * y.asDiagonal() * u.adjoint();
}

template <typename Scalar>
std::vector<Block> make_blocks(const LogDerivativePropagator<Scalar>& prop, double z_min, double z_max,
                               double factor) {
    constexpr double block_length = 0.5;
    std::vector<Block> blocks;
    double z = z_min;
    while (z < z_max) {
        double z1 = z + block_length;
        if (z_max - z1 < 0.5 * block_length) z1 = z_max;
        const double scale = std::max({prop.local_scale(z), prop.local_scale(z1), 1e-12});
        const double h = factor / std::sqrt(scale);
        const long half = std::max(1L, static_cast<long>(std::ceil((z1 - z) / (2.0 * h))));
        blocks.push_back({z, z1, 2 * half});
        z = z1;
    }
    return blocks;
}

template <typename Scalar>
RunResult run(const SolveRequest& request, double factor, const Matrix& inner_y, std::size_t step_limit) {
    const CouplingMatrixField& field = request.field;
    const ChannelSet& basis = field.basis();
    const double energy = request.incident.normal_energy();
    const double k_in = request.incident.k_zi;
    LogDerivativePropagator<Scalar> prop(field, energy);
    const Eigen::Index n = prop.size();
    const bool absorbing = request.loss_model == LossModel::AbsorbingInnerBoundary;

    const std::vector<Block> blocks = make_blocks(prop, request.z_min, request.z_max, factor);
    RunResult result;
    result.smallest_step = std::numeric_limits<double>::infinity();
    for (const Block& b : blocks) {
        result.steps += static_cast<std::size_t>(b.steps);
        result.smallest_step = std::min(result.smallest_step, (b.z1 - b.z0) / static_cast<double>(b.steps));
    }
    if (result.steps > step_limit || result.smallest_step < 1e-9) {
        std::ostringstream msg;
        msg << "step size underflow: " << result.steps << " steps, smallest step " << result.smallest_step
            << " on [" << request.z_min << ", " << request.z_max << "]";
        fail(ErrorKind::Stiffness, msg.str());
    }

    Mat<Scalar> y(n, n);
    Mat<Scalar> t;
    if (absorbing) {
        y = narrow<Scalar>(inner_y);
        t = Mat<Scalar>::Identity(n, n);
    } else {
        // Infinite wall: psi(z_min) = 0, i.e. an (effectively) infinite log-derivative.
        const double h0 = (blocks.front().z1 - blocks.front().z0) / static_cast<double>(blocks.front().steps);
        y = Mat<Scalar>::Identity(n, n) * (1e14 / h0);
    }
    for (const Block& b : blocks) prop.block(y, b.z0, b.z1, b.steps, absorbing ? &t : nullptr);

    // Match to e^{-ik z} in the incident channel plus outgoing / decaying waves.
    const double z = request.z_max;
    const Matrix y_end = y.template cast<cplx>();
    Vector d(n);
    Vector j(n);
    Vector jp(n);
    j.setZero();
    jp.setZero();
    for (Eigen::Index i = 0; i < n; ++i) {
        const Channel& ch = basis[static_cast<std::size_t>(i)];
        d[i] = ch.open ? cplx(0.0, ch.k_z()) : cplx(-ch.decay_rate(), 0.0);
    }
    const auto inc = static_cast<Eigen::Index>(basis.incident_index);
    j[inc] = std::polar(1.0, -k_in * z);
    jp[inc] = cplx(0.0, -k_in) * j[inc];

    Matrix m = y_end;
    m.diagonal() -= d;
    Eigen::PartialPivLU<Matrix> lu(m);
    if (!(lu.rcond() > 1e-14)) {
        std::ostringstream msg;
        msg << "matching matrix singular at z_max = " << z << " (rcond " << lu.rcond() << ")";
        fail(ErrorKind::DegenerateBoundary, msg.str());
    }
    const Vector outgoing = lu.solve(jp - y_end * j);

    result.amplitudes.resize(static_cast<std::size_t>(n));
    result.probabilities.resize(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) {
        const Channel& ch = basis[static_cast<std::size_t>(i)];
        const auto si = static_cast<std::size_t>(i);
        if (ch.open) {
            result.amplitudes[si] = outgoing[i] * std::polar(1.0, -ch.k_z() * z);
            result.probabilities[si] = std::norm(result.amplitudes[si]) * ch.k_z() / k_in;
        } else {
            result.amplitudes[si] = outgoing[i];
            result.probabilities[si] = 0.0;
        }
    }
    if (absorbing) {
        const Vector psi_end = j + outgoing;
        const Vector psi_in = t.template cast<cplx>() * psi_end;
        result.loss = -std::imag(psi_in.dot(inner_y * psi_in)) / k_in;
    }
    return result;
}

double max_difference(const RunResult& a, const RunResult& b) {
    double diff = std::abs(a.loss - b.loss);
    for (std::size_t i = 0; i < a.probabilities.size(); ++i)
        diff = std::max(diff, std::abs(a.probabilities[i] - b.probabilities[i]));
    return diff;
}

double max_amplitude_difference(const RunResult& a, const RunResult& b) {
    double diff = 0.0;
    for (std::size_t i = 0; i < a.probabilities.size(); ++i)
        if (a.probabilities[i] > 0.0) diff = std::max(diff, std::abs(a.amplitudes[i] - b.amplitudes[i]));
    return diff;
}

}  // namespace

DiffractionPattern solve(const SolveRequest& request) {
    request.validate();
    const CouplingMatrixField& field = request.field;
    const double energy = request.incident.normal_energy();
    const bool absorbing = request.loss_model == LossModel::AbsorbingInnerBoundary;

    Matrix inner_y;
    if (absorbing) inner_y = absorbing_boundary(field, energy, request.z_min);
    const bool real_field = field.constant_part().imag().isZero(0.0) && field.decay1().imag().isZero(0.0) &&
                            field.decay2().imag().isZero(0.0);
    const bool real_boundary = !absorbing || inner_y.imag().isZero(0.0);
    const bool use_real = real_field && real_boundary;

    constexpr std::size_t step_limit = 50'000'000;
    auto run_at = [&](double factor) {
        return use_real ? run<double>(request, factor, inner_y, step_limit)
                        : run<cplx>(request, factor, inner_y, step_limit);
    };

    // Halve the step until two successive runs agree; the O(h^4) scheme makes the
    // finer run's error about 1/15 of the difference.
    double factor = 0.2;
    RunResult coarse = run_at(factor);
    RunResult fine;
    double error = 0.0;
    double amplitude_error = 0.0;
    for (;;) {
        factor *= 0.5;
        fine = run_at(factor);
        error = max_difference(coarse, fine) / 15.0;
        amplitude_error = max_amplitude_difference(coarse, fine) / 15.0;
        if (error <= request.tolerance) break;
        if (fine.smallest_step < 2e-9 || 2 * fine.steps > step_limit) {
            std::ostringstream msg;
            msg << "no convergence to tolerance " << request.tolerance << ": error estimate " << error
                << " with " << fine.steps << " steps (smallest " << fine.smallest_step << ")";
            fail(ErrorKind::Stiffness, msg.str());
        }
        coarse = std::move(fine);
    }

    DiffractionPattern pattern;
    pattern.model = field.basis().model;
    pattern.channels = field.basis().channels;
    pattern.nu_max = field.basis().nu_max;
    pattern.incident_index = field.basis().incident_index;
    pattern.amplitudes = std::move(fine.amplitudes);
    pattern.probabilities = std::move(fine.probabilities);
    pattern.loss = fine.loss;
    pattern.error_estimate = error;
    pattern.amplitude_error = amplitude_error;
    pattern.steps = fine.steps;
    pattern.z_min = request.z_min;
    pattern.z_max = request.z_max;
    pattern.loss_model = request.loss_model;
    double total = pattern.loss;
    for (double p : pattern.probabilities) total += p;
    pattern.flux_sum = total;
    if (std::abs(total - 1.0) > 10.0 * request.tolerance) {
        std::ostringstream msg;
        msg << "flux sum " << total << " deviates from unity by more than 10x tolerance";
        fail(ErrorKind::AccuracyFailure, msg.str());
    }
    return pattern;
}

}  // namespace ewg
