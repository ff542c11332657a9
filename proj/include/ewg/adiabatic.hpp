#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "ewg/potentials.hpp"

namespace ewg {

struct AdiabaticLandscape {
    std::vector<double> z_grid;
    // surfaces[t][i] is the energy of track t at z_grid[i].
    std::vector<std::vector<double>> surfaces;
    // Channel index (into the field's basis) that track t connects to at the largest z.
    std::vector<std::size_t> labels;
    bool include_kinetic = true;
    CouplingMatrixField field;

    std::size_t track_of_channel(std::size_t channel) const;
};

struct AvoidedCrossing {
    double z_c = 0.0;
    std::array<std::size_t, 2> surface_pair{};  // channel labels of the two tracks
    double gap = 0.0;
    double slope_diff = 0.0;
};

std::vector<double> uniform_grid(double z_min, double z_max, std::size_t points = 2000);

// Eigenvalue tracks continued by maximal eigenvector overlap (threshold 0.5),
// bisecting grid intervals where the matching is ambiguous.
AdiabaticLandscape adiabatic_landscape(const CouplingMatrixField& field, std::vector<double> z_grid,
                                       bool include_kinetic = true);

std::vector<AvoidedCrossing> find_avoided_crossings(const AdiabaticLandscape& landscape, double gap_threshold);

}  // namespace ewg
