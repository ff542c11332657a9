#pragma once

#include <Eigen/Dense>

#include "ewg/fields.hpp"
#include "ewg/kinematics.hpp"

namespace ewg {

using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

// Potential felt by the incident internal state, used to place the integration
// window: U(z) = (sqrt(d^2 + 4 W e^{-2z}) - d)/2 for a dressed two-level atom and
// U(z) = W e^{-2z} otherwise, with W the mean or the minimal weight over x.
struct IncidentBarrier {
    double mean_weight = 0.0;
    double min_weight = 0.0;
    bool dressed = false;
    double detuning = 0.0;

    double mean(double z) const;
    double minimum(double z) const;
};

// V(z) = C + D1 e^{-z} + D2 e^{-2z} over a channel basis.  Tangential kinetic
// offsets are kept separate; evaluate_with_kinetic adds them on the diagonal.
class CouplingMatrixField {
public:
    CouplingMatrixField(ChannelSet basis, Matrix constant, Matrix decay1, Matrix decay2, IncidentBarrier barrier);

    const ChannelSet& basis() const { return basis_; }
    Eigen::Index size() const { return constant_.rows(); }
    const Matrix& constant_part() const { return constant_; }
    const Matrix& decay1() const { return decay1_; }
    const Matrix& decay2() const { return decay2_; }
    const IncidentBarrier& barrier() const { return barrier_; }
    const Eigen::VectorXd& kinetic_offsets() const { return kinetic_; }

    Matrix evaluate(double z) const;
    Matrix evaluate_with_kinetic(double z) const;
    Matrix derivative(double z) const;
    // Largest |element| of the position-dependent part at z.
    double coupling_magnitude(double z) const;
    double max_hermiticity_defect(double z) const;

private:
    ChannelSet basis_;
    Matrix constant_;
    Matrix decay1_;
    Matrix decay2_;
    IncidentBarrier barrier_;
    Eigen::VectorXd kinetic_;
    double max_decay1_;
    double max_decay2_;
};

double scalar_potential(double x, double z, const GratingConfig& grating);

// V_max (1 + eps cos 2Qx) e^{-2z} expanded in the even-order channels.
CouplingMatrixField one_level_matrix(const GratingConfig& grating, const ChannelSet& channels);

// Ground (even nu) and excited (odd nu) channels coupled by -d E_{+-} e^{-z}.
// The coupling strength follows from v_max = d^2 (|E_+|^2 + |E_-|^2) / delta.
CouplingMatrixField two_level_matrix(const GratingConfig& grating, const ChannelSet& channels);

// Far-detuned J_g = 1/2 -> J_e = 3/2 ground-state light-shift operator.  The
// prefactor d^2/delta is fixed by v_max = d^2 (|E_+|^2 + |E_-|^2) / delta.
CouplingMatrixField multilevel_matrix(const GratingConfig& grating, const ChannelSet& channels);

CouplingMatrixField coupling_field(Model model, const GratingConfig& grating, const ChannelSet& channels);

}  // namespace ewg
