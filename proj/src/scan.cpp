#include "ewg/scan.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <sstream>
#include <thread>

#include <Eigen/Eigenvalues>

namespace ewg {

int ProblemSpec::resolved_nu_max() const {
    return nu_max ? *nu_max : auto_nu_max(model, grating, incident);
}

SolveRequest ProblemSpec::request() const {
    return assemble_system(model, grating, incident, resolved_nu_max(), solver);
}

namespace {

double largest_change(const DiffractionPattern& coarse, const DiffractionPattern& fine) {
    double change = std::abs(fine.loss - coarse.loss);
    for (std::size_t i = 0; i < coarse.channels.size(); ++i) {
        const Channel& ch = coarse.channels[i];
        const auto j = fine.index_of(ch.order, ch.internal);
        if (!j || !(ch.open || fine.channels[*j].open)) continue;
        change = std::max(change, std::abs(fine.probabilities[*j] - coarse.probabilities[i]));
    }
    return change;
}

}  // namespace

DiffractionPattern solve_problem(const ProblemSpec& spec) {
    if (spec.nu_max) return solve(spec.request());

    int nu = spec.resolved_nu_max();
    const int last = std::max(adaptive_nu_cap, nu + 2);
    DiffractionPattern coarse = solve(assemble_system(spec.model, spec.grating, spec.incident, nu, spec.solver));
    while (true) {
        nu += 2;
        DiffractionPattern fine = solve(assemble_system(spec.model, spec.grating, spec.incident, nu, spec.solver));
        fine.truncation_change = largest_change(coarse, fine);
        if (*fine.truncation_change < spec.solver.tolerance || nu + 2 > last) return fine;
        coarse = std::move(fine);
    }
}

QuadratureRule gauss_hermite_normal(int n) {
    require(n >= 1, ErrorKind::InvalidParameter, "Gauss-Hermite rule needs at least one node");
    // Golub-Welsch: Jacobi matrix of the probabilists' Hermite polynomials.
    Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(n, n);
    for (int i = 1; i < n; ++i) jacobi(i, i - 1) = jacobi(i - 1, i) = std::sqrt(static_cast<double>(i));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(jacobi);
    QuadratureRule rule;
    for (int i = 0; i < n; ++i) {
        rule.nodes.push_back(eig.eigenvalues()[i]);
        const double v = eig.eigenvectors()(0, i);
        rule.weights.push_back(v * v);
    }
    // The rule is symmetric; enforce it exactly.
    for (int i = 0; i < n / 2; ++i) {
        const auto a = static_cast<std::size_t>(i);
        const auto b = static_cast<std::size_t>(n - 1 - i);
        const double x = 0.5 * (rule.nodes[b] - rule.nodes[a]);
        const double w = 0.5 * (rule.weights[a] + rule.weights[b]);
        rule.nodes[a] = -x;
        rule.nodes[b] = x;
        rule.weights[a] = rule.weights[b] = w;
    }
    if (n % 2 == 1) rule.nodes[static_cast<std::size_t>(n / 2)] = 0.0;
    return rule;
}

DiffractionPattern solve_with_energy_spread(const ProblemSpec& spec, double energy_width, int nodes) {
    require(std::isfinite(energy_width) && energy_width >= 0.0, ErrorKind::InvalidParameter,
            "energy width must be non-negative");
    if (energy_width == 0.0) return solve_problem(spec);

    const QuadratureRule rule = gauss_hermite_normal(nodes);
    const double energy = spec.incident.normal_energy();
    const double lowest = energy + energy_width * rule.nodes.front();
    if (!(lowest > 0.0)) {
        std::ostringstream msg;
        msg << "energy spread " << energy_width << " reaches non-positive normal energy " << lowest;
        fail(ErrorKind::InvalidParameter, msg.str());
    }

    // One basis for all nodes so that channel indices line up.  Without a fixed
    // nu_max the fastest node, which needs the most orders, chooses it.
    auto at_node = [&](std::size_t j) {
        ProblemSpec node = spec;
        node.incident = spec.incident.with_k_zi(std::sqrt(energy + energy_width * rule.nodes[j]));
        return node;
    };
    const std::size_t fastest = rule.nodes.size() - 1;
    std::optional<DiffractionPattern> fastest_pattern;
    ProblemSpec fixed = spec;
    if (!spec.nu_max) {
        fastest_pattern = solve_problem(at_node(fastest));
        fixed.nu_max = fastest_pattern->nu_max;
    }

    DiffractionPattern mean;
    for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
        ProblemSpec node = at_node(j);
        node.nu_max = fixed.nu_max;
        const DiffractionPattern p = j == fastest && fastest_pattern ? *fastest_pattern : solve_problem(node);
        const double w = rule.weights[j];
        if (j == 0) {
            mean = p;
            mean.amplitudes.clear();
            std::fill(mean.probabilities.begin(), mean.probabilities.end(), 0.0);
            mean.loss = mean.flux_sum = mean.error_estimate = mean.amplitude_error = 0.0;
            mean.steps = 0;
            mean.truncation_change = fastest_pattern ? fastest_pattern->truncation_change : std::nullopt;
        }
        for (std::size_t c = 0; c < p.probabilities.size(); ++c) mean.probabilities[c] += w * p.probabilities[c];
        mean.loss += w * p.loss;
        mean.flux_sum += w * p.flux_sum;
        mean.error_estimate = std::max(mean.error_estimate, p.error_estimate);
        mean.steps += p.steps;
    }
    mean.channels = build_channels(spec.incident, spec.grating, *fixed.nu_max, spec.model).channels;
    return mean;
}

std::string_view to_string(ScanAxis axis) {
    switch (axis) {
        case ScanAxis::None: return "none";
        case ScanAxis::Detuning: return "detuning";
        case ScanAxis::VelocityZ: return "v_zi";
        case ScanAxis::Contrast: return "contrast";
    }
    return "unknown";
}

ScanAxis scan_axis_from_string(std::string_view text) {
    if (text == "none") return ScanAxis::None;
    if (text == "detuning") return ScanAxis::Detuning;
    if (text == "v_zi") return ScanAxis::VelocityZ;
    if (text == "contrast") return ScanAxis::Contrast;
    fail(ErrorKind::InvalidParameter, "unknown scan axis '" + std::string(text) + "'");
}

ProblemSpec at_coordinate(const ProblemSpec& base, ScanAxis axis, double value, bool fixed_intensity) {
    ProblemSpec spec = base;
    switch (axis) {
        case ScanAxis::None: break;
        case ScanAxis::Detuning:
            spec.grating = fixed_intensity ? base.grating.with_detuning_at_fixed_intensity(value)
                                           : base.grating.with_detuning(value);
            break;
        case ScanAxis::VelocityZ: spec.incident = base.incident.with_k_zi(value); break;
        case ScanAxis::Contrast: spec.grating = base.grating.with_contrast(value); break;
    }
    return spec;
}

std::vector<ScanPoint> run_points(std::span<const double> grid,
                                  const std::function<DiffractionPattern(double)>& point, unsigned jobs) {
    std::vector<ScanPoint> out(grid.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < grid.size(); i = next++) {
            ScanPoint& p = out[i];
            p.index = i;
            p.coordinate = grid[i];
            try {
                p.pattern = point(grid[i]);
            } catch (const Error& e) {
                p.error = e;
            } catch (const std::exception& e) {
                p.error = Error(ErrorKind::NumericalFailure, e.what());
            }
        }
    };
    if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
    jobs = static_cast<unsigned>(std::min<std::size_t>(jobs, std::max<std::size_t>(grid.size(), 1)));
    if (jobs <= 1) {
        worker();
        return out;
    }
    std::vector<std::jthread> pool;
    pool.reserve(jobs);
    for (unsigned j = 0; j < jobs; ++j) pool.emplace_back(worker);
    pool.clear();
    return out;
}

std::vector<ScanPoint> scan(const ProblemSpec& base, ScanAxis axis, std::span<const double> grid,
                            const ScanOptions& options) {
    require(axis != ScanAxis::None || grid.size() <= 1, ErrorKind::InvalidParameter, "a grid needs a scan axis");
    for (std::size_t i = 1; i < grid.size(); ++i)
        require(grid[i] > grid[i - 1], ErrorKind::InvalidParameter, "scan grid must be strictly increasing");
    auto point = [&](double value) {
        return solve_with_energy_spread(at_coordinate(base, axis, value, options.fixed_intensity),
                                        options.energy_width, options.spread_nodes);
    };
    return run_points(grid, point, options.jobs);
}

std::vector<ScanPoint> detuning_scan(const ProblemSpec& base, std::span<const double> detunings,
                                     const ScanOptions& options) {
    return scan(base, ScanAxis::Detuning, detunings, options);
}

std::vector<ScanPoint> velocity_scan(const ProblemSpec& base, std::span<const double> v_zi,
                                     const ScanOptions& options) {
    return scan(base, ScanAxis::VelocityZ, v_zi, options);
}

std::vector<double> linear_grid(double first, double last, std::size_t n) {
    require(n >= 1, ErrorKind::InvalidParameter, "grid needs at least one point");
    if (n == 1) return {first};
    require(last > first, ErrorKind::InvalidParameter, "grid end must exceed its start");
    std::vector<double> g(n);
    for (std::size_t i = 0; i < n; ++i)
        g[i] = i + 1 == n ? last : first + (last - first) * static_cast<double>(i) / static_cast<double>(n - 1);
    return g;
}

}  // namespace ewg
