#pragma once

#include <Eigen/Dense>

#include <utility>
#include <vector>

#include "fastslow/model.hpp"

namespace fastslow {

/// First-order emergent Hamiltonian for the slow variables: every switch term
/// contributes sign * (pi/2) / (L_i L_j) times its generator embedded on the
/// pair, the identity for unit terms.
struct EffectiveHamiltonian {
    Eigen::MatrixXcd matrix;
    /// Switch-term indices contributing to entry (r, c), row-major.
    std::vector<std::vector<int>> provenance;

    int dim() const { return static_cast<int>(matrix.rows()); }
    const std::vector<int>& contributors(int r, int c) const {
        return provenance[r * dim() + c];
    }
};

EffectiveHamiltonian effective_hamiltonian(const ModelSpec& model);

/// exp(-i H t) psi0 via exact eigendecomposition; rejects non-Hermitian H.
Eigen::VectorXcd evolve_effective(const Eigen::MatrixXcd& h, const Eigen::VectorXcd& psi0,
                                  double t);

/// exp(-i H t) as a matrix.
Eigen::MatrixXcd effective_propagator(const Eigen::MatrixXcd& h, double t);

/// Contract the fast indices against the uniform unit vector (N-vector out).
Eigen::VectorXcd project_ground(const Eigen::VectorXcd& psi, const ModelSpec& model);

/// Tensor an N-vector with the uniform fast state (D-vector out).
Eigen::VectorXcd embed_ground(const Eigen::VectorXcd& phi, const ModelSpec& model);

/// P U^t E: the exact evolution sandwiched between ground projections.
/// Sub-unitary in general; leakage into excited fast modes shows up as
/// column-norm deficit.
Eigen::MatrixXcd projected_propagator(const ModelSpec& model, long t);

struct DeviationCurve {
    std::vector<std::pair<long, double>> points;  // (t, ||P U^t E - exp(-i H t)||_2)
    double max_deviation = 0;
};

DeviationCurve deviation_curve(const ModelSpec& model, long horizon);

struct QuasiEnergySpectrum {
    std::vector<double> eigenphases;  // sorted ascending in [0, 2pi)
};

/// Eigenphases of a unitary; rejects non-unitary input.
QuasiEnergySpectrum quasi_energy_spectrum(const Eigen::MatrixXcd& u);

struct LadderReport {
    bool regular = false;
    double spacing = 0;       // common spacing of distinct phases
    double max_residual = 0;  // worst deviation from the arithmetic ladder
    std::vector<double> distinct_phases;
};

/// Checks whether the sorted distinct phases form an arithmetic progression.
LadderReport ladder_report(const QuasiEnergySpectrum& spectrum, double merge_tol = 1e-9);

/// Operator 2-norm (largest singular value).
double operator_norm(const Eigen::MatrixXcd& m);

}  // namespace fastslow
