#include "fastslow/step.hpp"

#include <cstdlib>
#include <numeric>
#include <set>
#include <string>

namespace fastslow {

FastConfig shift_step(const FastConfig& config, const TorusLattice& lattice) {
    config.validate(lattice);
    FastConfig next = config;
    for (std::size_t k = 0; k < next.positions.size(); ++k)
        next.positions[k] = (next.positions[k] + 1) % lattice.periods[k];
    return next;
}

bool coincidence_fires(const SwitchTerm& term, const FastConfig& config, const ModelSpec& model) {
    const long xi = config.positions[model.fast_index(term.i) - 1];
    const long xj = config.positions[model.fast_index(term.j) - 1];
    return xi == term.loc_i && xj == term.loc_j;
}

Eigen::Matrix2cd switch_action(Generator generator, int sign) {
    const cplx i(0, 1);
    Eigen::Matrix2cd g;
    switch (generator) {
        case Generator::Sigma1: g << 0, 1, 1, 0; break;
        case Generator::Sigma2: g << 0, -i, i, 0; break;
        case Generator::Sigma3: g << 1, 0, 0, -1; break;
        case Generator::Unit: g << 1, 0, 0, 1; break;
    }
    return double(sign) * (-i) * g;
}

// Phase bookkeeping in powers of i: -i = i^3, +i = i^1, -1 = i^2.
// sign -1 contributes i^2.
void apply_switch(const SwitchTerm& term, int& slow, Phase& phase) {
    const int sign_quarters = term.sign == -1 ? 2 : 0;
    switch (term.generator) {
        case Generator::Sigma1:
            // -i sigma1: |i> -> -i|j>, |j> -> -i|i>
            slow = slow == term.i ? term.j : term.i;
            phase = phase.times_i_pow(3 + sign_quarters);
            break;
        case Generator::Sigma2:
            // -i sigma2: |i> -> |j>, |j> -> -|i>
            if (slow == term.i) {
                slow = term.j;
                phase = phase.times_i_pow(sign_quarters);
            } else {
                slow = term.i;
                phase = phase.times_i_pow(2 + sign_quarters);
            }
            break;
        case Generator::Sigma3:
            // -i sigma3: |i> -> -i|i>, |j> -> +i|j>
            phase = phase.times_i_pow((slow == term.i ? 3 : 1) + sign_quarters);
            break;
        case Generator::Unit:
            phase = phase.times_i_pow(3 + sign_quarters);
            break;
    }
}

OntBasisState classical_step(const OntBasisState& state, const ModelSpec& model,
                             StepDiagnostics* diag) {
    state.validate(model);
    OntBasisState next = state;
    bool acted = false;
    for (const SwitchTerm& term : model.switches) {
        if (!coincidence_fires(term, state.fast, model)) continue;
        if (next.slow != term.i && next.slow != term.j) continue;
        if (acted && diag != nullptr) ++diag->overlapping_firings;
        apply_switch(term, next.slow, next.phase);
        acted = true;
    }
    next.fast = shift_step(next.fast, model.lattice);
    return next;
}

OntBasisState inverse_classical_step(const OntBasisState& state, const ModelSpec& model) {
    OntBasisState prev = state;
    for (std::size_t k = 0; k < prev.fast.positions.size(); ++k) {
        const long L = model.lattice.periods[k];
        prev.fast.positions[k] = (prev.fast.positions[k] - 1 + L) % L;
    }
    // Undo fired switches in reverse declared order.
    for (auto it = model.switches.rbegin(); it != model.switches.rend(); ++it) {
        const SwitchTerm& term = *it;
        if (!coincidence_fires(term, prev.fast, model)) continue;
        if (prev.slow != term.i && prev.slow != term.j) continue;
        // The switch actions are fourth roots of -1 on the pair: applying a
        // term three more times composes to its inverse.
        apply_switch(term, prev.slow, prev.phase);
        apply_switch(term, prev.slow, prev.phase);
        apply_switch(term, prev.slow, prev.phase);
    }
    return prev;
}

Eigen::VectorXcd SignedPermutation::apply(const Eigen::VectorXcd& v) const {
    Eigen::VectorXcd out = Eigen::VectorXcd::Zero(v.size());
    for (long b = 0; b < dimension(); ++b)
        out[target[b]] += Phase{phase_quarter[b]}.value() * v[b];
    return out;
}

Eigen::VectorXcd SignedPermutation::apply_inverse(const Eigen::VectorXcd& v) const {
    Eigen::VectorXcd out = Eigen::VectorXcd::Zero(v.size());
    for (long b = 0; b < dimension(); ++b)
        out[b] = std::conj(Phase{phase_quarter[b]}.value()) * v[target[b]];
    return out;
}

Eigen::MatrixXcd SignedPermutation::dense() const {
    Eigen::MatrixXcd U = Eigen::MatrixXcd::Zero(dimension(), dimension());
    for (long b = 0; b < dimension(); ++b)
        U(target[b], b) = Phase{phase_quarter[b]}.value();
    return U;
}

SignedPermutation build_step_permutation(const ModelSpec& model) {
    model.validate();
    const long D = model.dimension();
    SignedPermutation perm;
    perm.target.resize(D);
    perm.phase_quarter.resize(D);
    for (long b = 0; b < D; ++b) {
        OntBasisState state = basis_state_from_index(b, model);
        OntBasisState next = classical_step(state, model);
        perm.target[b] = basis_index(next, model);
        perm.phase_quarter[b] = next.phase.quarter;
    }
    return perm;
}

long dense_budget() {
    if (const char* env = std::getenv("FASTSLOW_DENSE_BUDGET")) {
        const long v = std::atol(env);
        if (v > 0) return v;
    }
    return kDefaultDenseBudget;
}

Eigen::MatrixXcd build_step_unitary(const ModelSpec& model, long budget) {
    const long D = model.dimension();
    if (D > budget)
        throw CapacityError("dense unitary needs D=" + std::to_string(D) +
                            " > budget " + std::to_string(budget) +
                            "; use the sparse trajectory path instead");
    return build_step_permutation(model).dense();
}

RecurrenceTimes recurrence_times(const ModelSpec& model) {
    model.validate();
    RecurrenceTimes rec;
    for (long L : model.lattice.periods) rec.fast_period = std::lcm(rec.fast_period, L);

    std::set<std::pair<int, int>> pairs;
    for (const SwitchTerm& term : model.switches) pairs.insert({term.i, term.j});
    if (pairs.empty())
        for (int i = 1; i <= model.n_slow; ++i)
            for (int j = i + 1; j <= model.n_slow; ++j) pairs.insert({i, j});
    for (auto [i, j] : pairs) {
        const long Li = model.period_of_slow(i);
        const long Lj = model.period_of_slow(j);
        rec.pair_periods.push_back({{i, j}, std::lcm(Li, Lj)});
    }
    return rec;
}

}  // namespace fastslow
