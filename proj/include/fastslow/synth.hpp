#pragma once

#include <Eigen/Dense>

#include <vector>

#include "fastslow/model.hpp"

namespace fastslow {

/// Integer multiplicities realized on one slow pair. Signs are carried by the
/// sign of each count; |count| switch terms are emitted per generator.
struct PairMultiplicities {
    int i = 1, j = 2;      // 1-based slow pair
    long r_sigma1 = 0;     // real off-diagonal part
    long r_sigma2 = 0;     // imaginary off-diagonal part
    long r_sigma3 = 0;     // diagonal difference (chain pairs only)
    long r_unit = 0;       // diagonal sum (chain pairs only)
};

/// A compiled switch program: the realized model, its emergent Hamiltonian,
/// and the multiplicities it was built from.
struct SwitchProgram {
    ModelSpec model;
    Eigen::MatrixXcd realized;
    std::vector<PairMultiplicities> multiplicities;
};

/// Coupling grid step pi/2 / (L_i L_j) for a slow pair (1-based).
double grid_step(const TorusLattice& lattice, int i, int j);

/// Compile a Hermitian target into a switch program whose emergent
/// Hamiltonian matches it up to the lattice quantization of couplings.
/// Off-diagonals use sigma1/sigma2 on their own pair; diagonals are solved
/// over the chain (1,2),(2,3),... with sigma3 and unit terms.
SwitchProgram synthesize(const Eigen::MatrixXcd& target, const TorusLattice& lattice);

struct QuantizationError {
    Eigen::MatrixXd residual_abs;  // |realized - target| per component
    Eigen::MatrixXd bound;         // half-grid bound per component
    double max_abs = 0;
};

QuantizationError quantization_error(const Eigen::MatrixXcd& target,
                                     const SwitchProgram& program);

/// Round to nearest with ties to even.
long round_half_even(double x);

}  // namespace fastslow
