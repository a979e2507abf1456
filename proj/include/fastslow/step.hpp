#pragma once

#include <Eigen/Dense>

#include <utility>
#include <vector>

#include "fastslow/model.hpp"

namespace fastslow {

/// Advance every fast coordinate by one site on its ring.
FastConfig shift_step(const FastConfig& config, const TorusLattice& lattice);

/// True iff both gating fast variables sit at the term's firing point.
bool coincidence_fires(const SwitchTerm& term, const FastConfig& config, const ModelSpec& model);

/// The 2x2 evolution operator applied to the pair when a term fires:
/// sign * (-i) * G, with G the Pauli matrix or the identity for unit.
Eigen::Matrix2cd switch_action(Generator generator, int sign);

/// Apply a fired term's action to (slow, phase) in place. Callers are
/// responsible for checking the coincidence and pair membership.
void apply_switch(const SwitchTerm& term, int& slow, Phase& phase);

/// Per-step diagnostics: switch terms that fired while sharing a slow index
/// with an earlier firing in the same step (outcome is list-order dependent).
struct StepDiagnostics {
    long overlapping_firings = 0;
};

/// One tick of the exact classical law: apply every fired switch in declared
/// order, then shift the fast variables.
OntBasisState classical_step(const OntBasisState& state, const ModelSpec& model,
                             StepDiagnostics* diag = nullptr);

/// Exact inverse of classical_step.
OntBasisState inverse_classical_step(const OntBasisState& state, const ModelSpec& model);

/// One-step evolution stored as a signed permutation: column b maps to row
/// target[b] with entry i^phase_quarter[b].
struct SignedPermutation {
    std::vector<long> target;
    std::vector<int> phase_quarter;

    long dimension() const { return static_cast<long>(target.size()); }
    Eigen::VectorXcd apply(const Eigen::VectorXcd& v) const;
    Eigen::VectorXcd apply_inverse(const Eigen::VectorXcd& v) const;
    Eigen::MatrixXcd dense() const;
};

/// Sparse form of the one-step unitary, valid for any model size.
SignedPermutation build_step_permutation(const ModelSpec& model);

inline constexpr long kDefaultDenseBudget = 4096;

/// Effective dense budget: kDefaultDenseBudget unless the environment
/// variable FASTSLOW_DENSE_BUDGET overrides it.
long dense_budget();

/// Dense one-step unitary; refuses dimensions above the dense budget.
Eigen::MatrixXcd build_step_unitary(const ModelSpec& model, long budget = dense_budget());

struct RecurrenceTimes {
    long fast_period = 1;                                  // lcm of all periods
    std::vector<std::pair<std::pair<int, int>, long>> pair_periods;  // ((i,j), lcm(L_i,L_j))
};

RecurrenceTimes recurrence_times(const ModelSpec& model);

}  // namespace fastslow
