#include "fastslow/ensemble.hpp"

#include <boost/math/distributions/chi_squared.hpp>

#include <algorithm>
#include <limits>
#include <set>
#include <string>

#include "fastslow/emergent.hpp"
#include "fastslow/step.hpp"

namespace fastslow {

std::uint64_t counter_rng(std::uint64_t seed, std::uint64_t counter) {
    // splitmix64 of (seed + counter * golden gamma)
    std::uint64_t z = seed + counter * 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

long bounded_draw(std::uint64_t word, long bound) {
    return static_cast<long>((static_cast<unsigned __int128>(word) *
                              static_cast<unsigned __int128>(bound)) >> 64);
}

TrajectoryRecord run_trajectory(const ModelSpec& model, const OntBasisState& initial, long horizon,
                                std::span<const long> probe_times) {
    if (horizon < 0) throw ValidationError("trajectory horizon must be >= 0");
    initial.validate(model);
    TrajectoryRecord record;
    record.initial = initial.fast;
    record.slow0 = initial.slow;
    record.probe_slow.reserve(probe_times.size());

    OntBasisState state = initial;
    for (long t = 0; t <= horizon; ++t) {
        for (long probe : probe_times)
            if (probe == t) record.probe_slow.push_back(state.slow);
        if (t == horizon) break;
        // Inline the step so firings can be logged without matrices.
        OntBasisState next = state;
        for (std::size_t k = 0; k < model.switches.size(); ++k) {
            const SwitchTerm& term = model.switches[k];
            if (!coincidence_fires(term, state.fast, model)) continue;
            if (next.slow != term.i && next.slow != term.j) continue;
            const int before = next.slow;
            apply_switch(term, next.slow, next.phase);
            record.firings.push_back({t, static_cast<int>(k), before, next.slow});
        }
        next.fast = shift_step(state.fast, model.lattice);
        state = next;
    }
    record.final_slow = state.slow;
    record.final_phase = state.phase;
    return record;
}

namespace {

FastConfig sampled_config(const ModelSpec& model, std::uint64_t seed, long sample_index) {
    FastConfig config;
    const std::size_t m = model.lattice.periods.size();
    config.positions.resize(m);
    for (std::size_t k = 0; k < m; ++k) {
        const std::uint64_t word =
            counter_rng(seed, static_cast<std::uint64_t>(sample_index) * m + k);
        config.positions[k] = bounded_draw(word, model.lattice.periods[k]);
    }
    return config;
}

template <typename Visit>
void for_each_initial(const ModelSpec& model, const EnsembleMode& mode, Visit&& visit) {
    if (mode.kind == EnsembleMode::Exhaustive) {
        const long F = model.fast_count();
        if (F > kExhaustiveBudget)
            throw CapacityError("exhaustive ensemble needs " + std::to_string(F) +
                                " trajectories, budget is " + std::to_string(kExhaustiveBudget));
        for (long f = 0; f < F; ++f)
            visit(f, fast_from_linear_index(f, model.lattice));
    } else {
        for (long s = 0; s < mode.samples; ++s) {
            FastConfig config = sampled_config(model, mode.seed, s);
            visit(fast_linear_index(config, model.lattice), config);
        }
    }
}

}  // namespace

Histogram run_ensemble(const ModelSpec& model, int slow0, long horizon,
                       const EnsembleMode& mode) {
    model.validate();
    if (slow0 < 1 || slow0 > model.n_slow) throw ValidationError("slow0 out of range");
    Histogram hist;
    hist.counts.assign(model.n_slow, 0);
    for_each_initial(model, mode, [&](long, const FastConfig& config) {
        OntBasisState state{config, slow0, Phase{}};
        for (long t = 0; t < horizon; ++t) state = classical_step(state, model);
        ++hist.counts[state.slow - 1];
        ++hist.total;
    });
    return hist;
}

double density_matrix_check(const ModelSpec& model, int slow0, long horizon) {
    model.validate();
    const long D = model.dimension();
    if (D > dense_budget())
        throw CapacityError("density matrix check needs dense D=" + std::to_string(D));
    const long F = model.fast_count();

    const Histogram classical = run_ensemble(model, slow0, horizon, EnsembleMode::exhaustive());

    // rho0 = uniform mixture over fast configs at slow0; evolve its diagonal
    // through the dense unitary.
    const Eigen::MatrixXcd u = build_step_unitary(model);
    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(D, D);
    for (long f = 0; f < F; ++f) rho((slow0 - 1) * F + f, (slow0 - 1) * F + f) = 1.0 / double(F);
    for (long t = 0; t < horizon; ++t) rho = u * rho * u.adjoint();

    double max_dev = 0;
    for (int s = 0; s < model.n_slow; ++s) {
        double weight = 0;
        for (long f = 0; f < F; ++f) weight += rho(s * F + f, s * F + f).real();
        max_dev = std::max(max_dev, std::abs(weight - classical.frequency(s)));
    }
    return max_dev;
}

BornGapReport born_gap(const ModelSpec& model, int slow0, long horizon) {
    const Histogram classical = run_ensemble(model, slow0, horizon, EnsembleMode::exhaustive());
    const Eigen::MatrixXcd prop = projected_propagator(model, horizon);
    const Eigen::VectorXcd column = prop.col(slow0 - 1);
    const double norm2 = column.squaredNorm();

    BornGapReport report;
    report.leakage = 1.0 - norm2;
    for (int s = 0; s < model.n_slow; ++s) {
        report.classical_frequencies.push_back(classical.frequency(s));
        report.quantum_probabilities.push_back(norm2 > 0 ? std::norm(column[s]) / norm2 : 0.0);
        report.gap = std::max(report.gap, std::abs(report.classical_frequencies.back() -
                                                   report.quantum_probabilities.back()));
    }
    return report;
}

void ExperimentSpec::validate(const ModelSpec& model) const {
    if (slits.size() != 2 || slits[0] == slits[1])
        throw ValidationError("experiment needs two distinct slit labels");
    if (screen.empty()) throw ValidationError("experiment needs at least one screen bin");
    std::set<int> roles;
    auto add_role = [&](int s, const char* what) {
        if (s < 1 || s > model.n_slow)
            throw ValidationError(std::string(what) + " slow index out of range");
        if (!roles.insert(s).second)
            throw ValidationError("experiment roles must be disjoint slow states");
    };
    add_role(source, "source");
    for (int s : slits) add_role(s, "slit");
    for (int s : screen) add_role(s, "screen");
    if (t_slit < 0 || t_slit >= t_screen)
        throw ValidationError("experiment requires 0 <= t_slit < t_screen");
}

namespace {

ChiSquareStat marginal_uniformity(const std::vector<long>& config_counts, const ModelSpec& model,
                                  int coordinate) {
    const long L = model.lattice.periods[coordinate - 1];
    std::vector<long> marginal(L, 0);
    long total = 0;
    for (std::size_t f = 0; f < config_counts.size(); ++f) {
        const FastConfig config = fast_from_linear_index(static_cast<long>(f), model.lattice);
        marginal[config.positions[coordinate - 1]] += config_counts[f];
        total += config_counts[f];
    }
    ChiSquareStat stat;
    stat.coordinate = coordinate;
    stat.dof = L - 1;
    if (total == 0 || L < 2) return stat;
    const double expected = double(total) / double(L);
    for (long v = 0; v < L; ++v) {
        const double d = double(marginal[v]) - expected;
        stat.statistic += d * d / expected;
    }
    boost::math::chi_squared dist(double(stat.dof));
    stat.critical_99 = boost::math::quantile(dist, 0.99);
    stat.fails_uniformity = stat.statistic > stat.critical_99;
    return stat;
}

}  // namespace

InterferenceResult run_interference(const ModelSpec& model, const ExperimentSpec& spec,
                                    const EnsembleMode& mode) {
    model.validate();
    spec.validate(model);
    const long F = model.fast_count();
    const int n_classes = 3;  // slit A, slit B, neither
    const long probes[2] = {spec.t_slit, spec.t_screen};

    InterferenceResult result;
    result.full_screen.counts.assign(model.n_slow, 0);
    for (int c = 0; c < n_classes; ++c) {
        SlitClassReport report;
        report.label = c == 0   ? "slit_" + std::to_string(spec.slits[0])
                       : c == 1 ? "slit_" + std::to_string(spec.slits[1])
                                : "neither";
        report.screen_histogram.counts.assign(model.n_slow, 0);
        report.initial_config_counts.assign(F, 0);
        result.classes.push_back(std::move(report));
    }

    for_each_initial(model, mode, [&](long f, const FastConfig& config) {
        const TrajectoryRecord traj =
            run_trajectory(model, {config, spec.source, Phase{}}, spec.t_screen, probes);
        const int at_slit = traj.probe_slow.at(0);
        const int at_screen = traj.probe_slow.at(1);
        const int cls = at_slit == spec.slits[0] ? 0 : at_slit == spec.slits[1] ? 1 : 2;
        ++result.full_screen.counts[at_screen - 1];
        ++result.full_screen.total;
        ++result.classes[cls].screen_histogram.counts[at_screen - 1];
        ++result.classes[cls].screen_histogram.total;
        ++result.classes[cls].initial_config_counts[f];
    });

    for (SlitClassReport& report : result.classes)
        for (std::size_t k = 1; k <= model.lattice.size(); ++k)
            report.uniformity.push_back(
                marginal_uniformity(report.initial_config_counts, model, static_cast<int>(k)));

    long max_count = 0, min_count = std::numeric_limits<long>::max();
    for (int s : spec.screen) {
        max_count = std::max(max_count, result.full_screen.counts[s - 1]);
        min_count = std::min(min_count, result.full_screen.counts[s - 1]);
    }
    if (max_count + min_count > 0)
        result.fringe_visibility = double(max_count - min_count) / double(max_count + min_count);
    return result;
}

std::pair<std::vector<TrajectoryRecord>, Histogram> postselect(
    const std::vector<TrajectoryRecord>& records, int n_slow,
    const std::function<bool(const TrajectoryRecord&)>& predicate) {
    std::vector<TrajectoryRecord> kept;
    Histogram hist;
    hist.counts.assign(n_slow, 0);
    for (const TrajectoryRecord& record : records) {
        if (!predicate(record)) continue;
        kept.push_back(record);
        ++hist.counts[record.final_slow - 1];
        ++hist.total;
    }
    return {std::move(kept), std::move(hist)};
}

}  // namespace fastslow
