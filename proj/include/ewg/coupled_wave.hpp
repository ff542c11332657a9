#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "ewg/kinematics.hpp"
#include "ewg/potentials.hpp"

namespace ewg {

enum class LossModel { HardTruncation, AbsorbingInnerBoundary };

std::string_view to_string(LossModel model);
LossModel loss_model_from_string(std::string_view text);

struct SolveRequest {
    CouplingMatrixField field;
    IncidentState incident;
    double z_min = 0.0;
    double z_max = 0.0;
    double tolerance = 1e-6;
    LossModel loss_model = LossModel::AbsorbingInnerBoundary;

    void validate() const;
};

struct DiffractionPattern {
    Model model = Model::OneLevel;
    std::vector<Channel> channels;
    std::vector<cplx> amplitudes;
    std::vector<double> probabilities;
    std::size_t incident_index = 0;
    double loss = 0.0;
    double flux_sum = 0.0;
    double error_estimate = 0.0;   // estimated absolute error of the probabilities and the loss
    double amplitude_error = 0.0;  // estimated absolute error of the open-channel amplitudes
    std::size_t steps = 0;        // propagation steps of the finest accepted run
    int nu_max = 0;
    // Largest change of an open-channel probability or the loss when nu_max was
    // last raised by 2; empty when the basis size was fixed by the caller.
    std::optional<double> truncation_change;
    double z_min = 0.0;
    double z_max = 0.0;
    LossModel loss_model = LossModel::AbsorbingInnerBoundary;

    std::optional<std::size_t> index_of(int order, InternalState internal) const;
    // Probability of the channel with this order; for the multilevel model the
    // sublevel must be given explicitly.
    double probability(int order) const;
    double probability(int order, InternalState internal) const;
    // Summed probability of all channels except the incident one.
    double nonspecular() const;
};

struct IntegrationWindow {
    double z_turn = 0.0;
    double z_min = 0.0;
    double z_max = 0.0;
};

// Classical turning point of the incident state on its mean potential, the inner
// edge where the tunnelling attenuation through the weakest part of the barrier
// reaches e^-40 (but no deeper than 3 length units inside the turning point), and
// the outer edge where every coupling element has fallen below 1e-10 of the
// incident normal energy.
IntegrationWindow default_window(const CouplingMatrixField& field, const IncidentState& incident);

// Basis truncation: the smaller of (a) the order keeping `closed_extra` closed
// orders beyond the last open one on each side and (b) on each side the first
// order whose asymptotic normal energy differs from the incident energy E by at
// least energy_margin * E.  At least 2 and at most `cap`.
int auto_nu_max(Model model, const GratingConfig& grating, const IncidentState& incident, int closed_extra = 4,
                int cap = 24, double energy_margin = 16.0);

struct SolverOptions {
    double tolerance = 1e-6;
    std::optional<double> z_min;
    std::optional<double> z_max;
    LossModel loss_model = LossModel::AbsorbingInnerBoundary;
};

SolveRequest assemble_system(Model model, const GratingConfig& grating, const IncidentState& incident, int nu_max,
                             const SolverOptions& options = {});

DiffractionPattern solve(const SolveRequest& request);

}  // namespace ewg
