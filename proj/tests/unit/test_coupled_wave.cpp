#include <doctest.h>

#include <cmath>
#include <optional>
#include <random>

#include "ewg/coupled_wave.hpp"
#include "ewg/errors.hpp"
#include "ewg/scalar_models.hpp"

using namespace ewg;

namespace {

DiffractionPattern solve_one_level(const GratingConfig& g, const IncidentState& inc, int nu_max,
                                   SolverOptions opts = {}) {
    return solve(assemble_system(Model::OneLevel, g, inc, nu_max, opts));
}

SolverOptions options(double tolerance, LossModel loss = LossModel::AbsorbingInnerBoundary,
                      std::optional<double> z_max = std::nullopt) {
    SolverOptions o;
    o.tolerance = tolerance;
    o.loss_model = loss;
    o.z_max = z_max;
    return o;
}

ErrorKind kind_of(auto&& action) {
    try {
        action();
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("no error raised");
    return ErrorKind::InvalidParameter;
}

}  // namespace

TEST_CASE("flat barrier: pure specular reflection with the analytic phase") {
    const auto g = GratingConfig::scalar(0.8, 1600.0, 0.0);
    const IncidentState inc{0.0, 20.0};
    const auto p = solve_one_level(g, inc, 4, options(1e-8));
    CHECK(p.probability(0) == doctest::Approx(1.0).epsilon(1e-7));
    CHECK(p.nonspecular() < 1e-12);
    CHECK(p.loss < 1e-12);
    // Probabilities converge at once here, so the phase is only as good as the reported amplitude error.
    const double phase_error = std::abs(p.amplitudes[p.incident_index] - flat_barrier_reflection(20.0, 1600.0));
    CHECK(phase_error <= 1.5 * p.amplitude_error + 1e-10);
    CHECK(p.amplitude_error < 1e-3);
}

TEST_CASE("weak grating agrees with first-order perturbation theory") {
    const auto g = GratingConfig::scalar(0.8, 1600.0, 0.01);
    const IncidentState inc{0.0, 20.0};
    const auto p = solve_one_level(g, inc, auto_nu_max(Model::OneLevel, g, inc));
    const auto dwba = dwba_first_order(g, inc);
    CHECK(p.probability(2) == doctest::Approx(dwba.probability(2)).epsilon(0.1));
    // Normal incidence: mirror symmetry of the pattern.
    CHECK(std::abs(p.probability(2) - p.probability(-2)) < 1e-8);
    CHECK(std::abs(p.flux_sum - 1.0) < 1e-6);
}

TEST_CASE("basis truncation and window convergence") {
    const auto g = GratingConfig::scalar(1.0, 1600.0, 0.1);
    const IncidentState inc{3.0, 20.0};
    const int nu = auto_nu_max(Model::OneLevel, g, inc);
    const auto base = solve_one_level(g, inc, nu, options(1e-8));
    const auto wider = solve_one_level(g, inc, nu + 4, options(1e-8));
    for (int order = -6; order <= 6; order += 2)
        CHECK(std::abs(base.probability(order) - wider.probability(order)) < 1e-4);

    const auto longer = solve_one_level(g, inc, nu, options(1e-8, LossModel::AbsorbingInnerBoundary, 2.0 * base.z_max));
    for (int order = -6; order <= 6; order += 2)
        CHECK(std::abs(base.probability(order) - longer.probability(order)) < 1e-6);
}

TEST_CASE("auto truncation rule") {
    const auto g = GratingConfig::scalar(1.0, 1600.0, 0.1);
    CHECK(auto_nu_max(Model::OneLevel, g, {0.0, 20.0}) >= 20);
    CHECK(auto_nu_max(Model::OneLevel, g, {0.0, 1.0}) >= 2);
    CHECK(auto_nu_max(Model::OneLevel, g, {0.0, 200.0}) <= 24);
    CHECK(auto_nu_max(Model::OneLevel, g, {0.0, 20.0}, 4, 12) <= 12);
    CHECK_THROWS_AS(auto_nu_max(Model::OneLevel, g, {0.0, 20.0}, 4, 1), Error);
}

TEST_CASE("flux conservation over random one-level configurations") {
    std::mt19937_64 rng(2718);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 8; ++trial) {
        const double k = 2.0 + 8.0 * u(rng);
        const auto g = GratingConfig::scalar(0.5 + u(rng), k * k * (2.0 + 8.0 * u(rng)), u(rng));
        const IncidentState inc{10.0 * (u(rng) - 0.5), k};
        const auto p = solve_one_level(g, inc, auto_nu_max(Model::OneLevel, g, inc));
        CAPTURE(trial);
        CHECK(std::abs(p.flux_sum - 1.0) < 1e-6);
        for (std::size_t i = 0; i < p.probabilities.size(); ++i) {
            CHECK(p.probabilities[i] >= 0.0);
            if (!p.channels[i].open) CHECK(p.probabilities[i] == 0.0);
        }
    }
}

TEST_CASE("loss models") {
    const auto g = GratingConfig::scalar(1.0, 400.0, 0.3);
    const IncidentState inc{0.0, 10.0};
    const auto wall = solve_one_level(g, inc, 8, options(1e-6, LossModel::HardTruncation));
    CHECK(wall.loss == 0.0);
    CHECK(std::abs(wall.flux_sum - 1.0) < 1e-6);
    const auto absorbing = solve_one_level(g, inc, 8);
    CHECK(absorbing.loss >= 0.0);
    CHECK(absorbing.loss < 1e-6);
    for (int order = -4; order <= 4; order += 2)
        CHECK(std::abs(wall.probability(order) - absorbing.probability(order)) < 1e-5);
}

TEST_CASE("two-level standing wave at grazing incidence loses most atoms to the surface") {
    // Detuning equal to the Doppler shift, full contrast.
    const double doppler = 400.0;
    const auto g = GratingConfig::scalar(1.0, 200.0, 1.0, doppler);
    const IncidentState inc{doppler / 2.0, 8.0};
    const auto p = solve(assemble_system(Model::TwoLevel, g, inc, auto_nu_max(Model::TwoLevel, g, inc)));
    CHECK(std::abs(p.flux_sum - 1.0) < 1e-6);
    CHECK(p.loss > p.probability(0));

    // At fixed detuning a higher barrier only translates the potentials in z.
    const auto higher = solve(assemble_system(Model::TwoLevel, g.with_v_max(800.0), inc, auto_nu_max(Model::TwoLevel, g, inc)));
    CHECK(higher.loss == doctest::Approx(p.loss).epsilon(1e-5));
    for (std::size_t i = 0; i < p.probabilities.size(); ++i)
        CHECK(std::abs(higher.probabilities[i] - p.probabilities[i]) < 1e-5);
}

TEST_CASE("J = 1/2 atom without the TE wave keeps its sublevel") {
    FieldPair f{SphericalVector::sigma_minus(1.0), SphericalVector{}};
    const auto g = GratingConfig::from_fields(1.0, 4000.0, 0.0, f);
    const IncidentState inc{100.0, 15.0, InternalState::sublevel(1)};
    const auto p = solve(assemble_system(Model::Multilevel, g, inc, 2));
    CHECK(p.probability(-2, InternalState::sublevel(-1)) < 1e-12);
    CHECK(p.probability(0, InternalState::sublevel(1)) == doctest::Approx(1.0).epsilon(1e-6));
    CHECK_THROWS_AS(p.probability(0), Error);
}

TEST_CASE("solver error paths") {
    const auto g = GratingConfig::scalar(1.0, 400.0, 0.3);
    const IncidentState inc{0.0, 10.0};
    auto request = assemble_system(Model::OneLevel, g, inc, 4);

    auto bad_window = request;
    bad_window.z_max = bad_window.z_min;
    CHECK(kind_of([&] { solve(bad_window); }) == ErrorKind::InvalidParameter);

    auto bad_tolerance = request;
    bad_tolerance.tolerance = 0.0;
    CHECK(kind_of([&] { solve(bad_tolerance); }) == ErrorKind::InvalidParameter);
    bad_tolerance.tolerance = 1e-2;
    CHECK(kind_of([&] { solve(bad_tolerance); }) == ErrorKind::InvalidParameter);

    auto mismatched = request;
    mismatched.incident = inc.with_k_zi(11.0);
    CHECK(kind_of([&] { solve(mismatched); }) == ErrorKind::InvalidParameter);

    CHECK(kind_of([&] { assemble_system(Model::OneLevel, g, {0.0, -1.0}, 4); }) == ErrorKind::InvalidParameter);
    CHECK(loss_model_from_string("hard-truncation") == LossModel::HardTruncation);
    CHECK(kind_of([] { loss_model_from_string("sponge"); }) == ErrorKind::InvalidParameter);
}
