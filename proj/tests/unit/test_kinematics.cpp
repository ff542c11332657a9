#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "ewg/errors.hpp"
#include "ewg/kinematics.hpp"
#include "ewg/units.hpp"

using namespace ewg;

namespace {

const Channel& channel(const ChannelSet& set, int order, InternalState internal = InternalState::ground()) {
    return set[*set.find(order, internal)];
}

}  // namespace

TEST_CASE("normal wavevector of diffraction orders") {
    const auto grating = GratingConfig::scalar(1.0, 100.0, 0.1);

    SUBCASE("normal incidence, first order") {
        const auto set = build_channels({0.0, 50.0}, grating, 2, Model::OneLevel);
        const Channel& ch = channel(set, 2);
        CHECK(ch.k_z_sq == 2496.0);
        CHECK(ch.open);
    }
    SUBCASE("grazing incidence, backward order gains normal energy") {
        const auto set = build_channels({1000.0, 10.0}, grating, 2, Model::OneLevel);
        const Channel& ch = channel(set, -2);
        CHECK(ch.k_z_sq == 4096.0);
        CHECK(ch.k_z() == doctest::Approx(64.0).epsilon(1e-15));
    }
    SUBCASE("specular order keeps the incident wavevector exactly") {
        const IncidentState inc{12.5, 7.25};
        const auto set = build_channels(inc, grating, 6, Model::OneLevel);
        CHECK(channel(set, 0).k_z_sq == inc.k_zi * inc.k_zi);
    }
}

TEST_CASE("channel basis layout") {
    const auto grating = GratingConfig::scalar(1.0, 100.0, 0.1, 50.0);
    const IncidentState inc{3.0, 8.0};

    const auto one = build_channels(inc, grating, 4, Model::OneLevel);
    REQUIRE(one.size() == 5);
    CHECK(one[0].order == -4);
    CHECK(one[4].order == 4);

    const auto two = build_channels(inc, grating, 4, Model::TwoLevel);
    REQUIRE(two.size() == 9);
    for (std::size_t i = 0; i < two.size(); ++i) {
        const bool odd = two[i].order % 2 != 0;
        CHECK(two[i].internal.kind == (odd ? InternalState::Kind::Excited : InternalState::Kind::Ground));
    }

    const auto multi = build_channels({3.0, 8.0, InternalState::sublevel(1)}, grating, 4, Model::Multilevel);
    CHECK(multi.size() == 10);
    CHECK(multi[multi.incident_index].internal == InternalState::sublevel(1));
    CHECK(multi[multi.incident_index].order == 0);

    CHECK_THROWS_AS(build_channels(inc, grating, 0, Model::OneLevel), Error);
    CHECK_THROWS_AS(build_channels({3.0, 8.0, InternalState::sublevel(1)}, grating, 2, Model::OneLevel), Error);
}

TEST_CASE("zero normal energy counts as closed") {
    // k_zi^2 = nu^2 Q^2 at normal incidence with Q = 1, nu = 4.
    const auto set = build_channels({0.0, 4.0}, GratingConfig::scalar(1.0, 100.0, 0.1), 4, Model::OneLevel);
    CHECK(channel(set, 4).k_z_sq == 0.0);
    CHECK_FALSE(channel(set, 4).open);
    CHECK(channel(set, 2).open);
}

TEST_CASE("excited channels carry the detuning in their energy balance") {
    const double delta = 40.0;
    const auto grating = GratingConfig::scalar(1.0, 100.0, 0.5, delta);
    const IncidentState inc{5.0, 6.0};
    const auto set = build_channels(inc, grating, 3, Model::TwoLevel);
    const Channel& ch = channel(set, 1, InternalState::excited());
    const double kx = inc.k_xi + grating.big_q();
    CHECK(ch.k_z_sq == doctest::Approx(inc.k_zi * inc.k_zi + delta - (kx * kx - inc.k_xi * inc.k_xi)));
    CHECK(set.internal_offset(*set.find(1, InternalState::excited())) == -delta);
    CHECK(conservation_check(set, inc).ok());
}

TEST_CASE("diffraction angles") {
    Channel ch;
    ch.k_x = 0.0;
    ch.k_z_sq = 25.0;
    ch.open = true;
    CHECK(diffraction_angle(ch) == 0.0);
    ch.k_x = 5.0;
    CHECK(diffraction_angle(ch) == doctest::Approx(std::numbers::pi / 4));

    const auto set = build_channels({0.0, 100.0}, GratingConfig::scalar(1.0, 1e4, 0.1), 2, Model::OneLevel);
    CHECK(diffraction_angle(channel(set, 2)) == doctest::Approx(0.02).epsilon(1e-3));

    ch.k_z_sq = -1.0;
    ch.open = false;
    try {
        diffraction_angle(ch);
        FAIL("closed channel accepted");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::ClosedChannel);
    }
}

TEST_CASE("Doppler shift") {
    const auto grating = GratingConfig::scalar(1.0, 100.0, 0.1);
    CHECK(doppler_shift({0.0, 1.0}, grating) == 0.0);
    CHECK(doppler_shift({3260.0, 1.0}, grating) == 6520.0);
    CHECK(doppler_shift({-3.0, 1.0}, grating) < 0.0);
}

TEST_CASE("conservation check flags a corrupted channel") {
    const IncidentState inc{2.0, 30.0};
    auto set = build_channels(inc, GratingConfig::scalar(0.7, 100.0, 0.2), 6, Model::OneLevel);
    CHECK(conservation_check(set, inc).max_violation() < 1e-12);
    set.channels[2].k_z_sq += 1e-6 * std::abs(set.channels[2].k_z_sq);
    const auto report = conservation_check(set, inc);
    CHECK_FALSE(report.ok());
    REQUIRE(report.flagged.size() == 1);
    CHECK(report.flagged[0] == 2);
}

TEST_CASE("channel kinematics properties over random configurations") {
    std::mt19937_64 rng(20240611);
    std::uniform_real_distribution<double> q_dist(0.1, 3.0), k_dist(-500.0, 500.0), kz_dist(0.5, 200.0);
    for (int trial = 0; trial < 200; ++trial) {
        const auto grating = GratingConfig::scalar(q_dist(rng), 100.0, 0.3, 20.0);
        const IncidentState inc{k_dist(rng), kz_dist(rng)};
        for (Model model : {Model::OneLevel, Model::TwoLevel}) {
            const auto set = build_channels(inc, grating, 8, model);
            CHECK(conservation_check(set, inc).max_violation() < 1e-12);
            for (std::size_t i = 0; i + 1 < set.size(); ++i) {
                const double dk = set[i + 1].k_x - set[i].k_x;
                CHECK(dk == doctest::Approx((set[i + 1].order - set[i].order) * grating.big_q()).epsilon(1e-12));
            }
        }
        // Second difference of the parabola in nu (one-level orders step by 2).
        const auto set = build_channels(inc, grating, 8, Model::OneLevel);
        const double q2 = grating.big_q() * grating.big_q();
        for (std::size_t i = 1; i + 1 < set.size(); ++i) {
            const double second = set[i + 1].k_z_sq - 2.0 * set[i].k_z_sq + set[i - 1].k_z_sq;
            const double scale = std::max({1.0, std::abs(set[i + 1].k_z_sq), std::abs(set[i - 1].k_z_sq)});
            CHECK(std::abs(second + 8.0 * q2) <= 1e-12 * scale);
        }
        const auto normal = build_channels({0.0, inc.k_zi}, grating, 8, Model::OneLevel);
        for (int nu = 2; nu <= 8; nu += 2) CHECK(channel(normal, nu).k_z_sq == channel(normal, -nu).k_z_sq);
    }
}

TEST_CASE("dimensionless units") {
    const double mass = 1.443160648e-25;  // rubidium-87
    const double kappa = 1.2e7;
    const units::UnitSystem u(mass, kappa);
    CHECK(u.wavevector(kappa) == doctest::Approx(1.0));
    CHECK(u.energy(units::hbar * units::hbar * kappa * kappa / (2.0 * mass)) == doctest::Approx(1.0));
    // Q v_xi = 6520 recoil frequencies
    const double big_q = kappa;
    const double v_xi = 6520.0 * u.frequency_unit() / big_q;
    const double k_xi = u.wavevector(mass * v_xi / units::hbar);
    CHECK(doppler_shift({k_xi, 1.0}, GratingConfig::scalar(1.0, 1.0, 0.0)) == doctest::Approx(6520.0).epsilon(1e-12));

    CHECK_THROWS_AS(units::UnitSystem(0.0, kappa), Error);
    CHECK_THROWS_AS(units::UnitSystem(mass, -1.0), Error);

    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> scale(0.1, 10.0);
    for (int trial = 0; trial < 50; ++trial) {
        units::PhysicalGrating raw;
        raw.mass_kg = mass * scale(rng);
        raw.kappa_per_m = kappa * scale(rng);
        raw.big_q_per_m = raw.kappa_per_m * scale(rng);
        raw.v_max_joule = 1e-28 * scale(rng);
        raw.contrast = 0.5;
        raw.detuning_rad_s = 1e9 * scale(rng);
        const auto g = units::to_dimensionless(raw);
        const auto back = units::from_dimensionless(g, units::UnitSystem(raw.mass_kg, raw.kappa_per_m));
        CHECK(back.big_q_per_m == doctest::Approx(raw.big_q_per_m).epsilon(1e-12));
        CHECK(back.v_max_joule == doctest::Approx(raw.v_max_joule).epsilon(1e-12));
        CHECK(back.detuning_rad_s == doctest::Approx(raw.detuning_rad_s).epsilon(1e-12));
        CHECK(back.contrast == doctest::Approx(raw.contrast).epsilon(1e-12));
    }
}
