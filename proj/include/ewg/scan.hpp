#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "ewg/coupled_wave.hpp"
#include "ewg/errors.hpp"

namespace ewg {

// Everything needed to set up one coupled-wave solve.
struct ProblemSpec {
    Model model = Model::OneLevel;
    GratingConfig grating = GratingConfig::scalar(1.0, 1.0, 0.0);
    IncidentState incident;
    std::optional<int> nu_max;  // adaptive truncation when empty
    SolverOptions solver;

    // The fixed nu_max, or the starting point of the adaptive search.
    int resolved_nu_max() const;
    SolveRequest request() const;
};

// Largest basis the adaptive truncation will try.
inline constexpr int adaptive_nu_cap = 24;

// With a fixed nu_max this is a single solve.  Otherwise the search starts at
// auto_nu_max and raises nu_max by 2 until no open-channel probability and not
// the loss move by more than the solver tolerance, up to adaptive_nu_cap (one
// step beyond it when the start is already there).  The larger basis is
// returned; truncation_change says whether the search converged.
DiffractionPattern solve_problem(const ProblemSpec& spec);

// Average over a Gaussian spread of the incident normal energy with standard
// deviation `energy_width`, using Gauss-Hermite nodes.  The result carries
// averaged probabilities, loss and flux; amplitudes are left empty because an
// incoherent average has no phase.  Width 0 is a plain solve.
DiffractionPattern solve_with_energy_spread(const ProblemSpec& spec, double energy_width, int nodes = 9);

// Nodes and weights of the standard normal distribution (weights sum to 1).
struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};
QuadratureRule gauss_hermite_normal(int n);

enum class ScanAxis { None, Detuning, VelocityZ, Contrast };

std::string_view to_string(ScanAxis axis);
ScanAxis scan_axis_from_string(std::string_view text);

struct ScanOptions {
    unsigned jobs = 0;           // worker threads; 0 = hardware concurrency
    double energy_width = 0.0;   // Gaussian spread of the incident normal energy
    int spread_nodes = 9;
    bool fixed_intensity = true;  // detuning scans keep the laser intensity fixed
};

struct ScanPoint {
    std::size_t index = 0;
    double coordinate = 0.0;
    std::optional<DiffractionPattern> pattern;
    std::optional<Error> error;
};

// The problem at one grid coordinate: detuning, normal velocity (k_zi in recoil
// units) or contrast replaced in the base problem.
ProblemSpec at_coordinate(const ProblemSpec& base, ScanAxis axis, double value, bool fixed_intensity = true);

// Evaluates `point` for every grid value on a worker pool.  Results are ordered
// by grid index; a failing point records its error and the scan continues.
std::vector<ScanPoint> run_points(std::span<const double> grid,
                                  const std::function<DiffractionPattern(double)>& point, unsigned jobs);

std::vector<ScanPoint> scan(const ProblemSpec& base, ScanAxis axis, std::span<const double> grid,
                            const ScanOptions& options = {});
std::vector<ScanPoint> detuning_scan(const ProblemSpec& base, std::span<const double> detunings,
                                     const ScanOptions& options = {});
std::vector<ScanPoint> velocity_scan(const ProblemSpec& base, std::span<const double> v_zi,
                                     const ScanOptions& options = {});

// Increasing grid of n points from first to last.
std::vector<double> linear_grid(double first, double last, std::size_t n);

}  // namespace ewg
