#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "fastslow/model.hpp"

namespace fastslow {

/// One deterministic classical run, reproducible bit-exactly from
/// (model, initial state, horizon).
struct TrajectoryRecord {
    FastConfig initial;
    int slow0 = 1;
    int final_slow = 1;
    Phase final_phase;
    struct Firing {
        long step = 0;
        int term = 0;  // index into model.switches
        int slow_before = 1;
        int slow_after = 1;
    };
    std::vector<Firing> firings;
    std::vector<int> probe_slow;  // slow index at each requested probe time
};

TrajectoryRecord run_trajectory(const ModelSpec& model, const OntBasisState& initial, long horizon,
                                std::span<const long> probe_times = {});

/// Outcome counts per slow state (index 0 .. N-1).
struct Histogram {
    std::vector<long> counts;
    long total = 0;

    double frequency(int slow_zero_based) const {
        return total == 0 ? 0.0 : double(counts[slow_zero_based]) / double(total);
    }
};

struct EnsembleMode {
    enum Kind { Exhaustive, Sampled } kind = Exhaustive;
    long samples = 0;
    std::uint64_t seed = 0;

    static EnsembleMode exhaustive() { return {}; }
    static EnsembleMode sampled(long n, std::uint64_t seed) { return {Sampled, n, seed}; }
};

inline constexpr long kExhaustiveBudget = 1'000'000;

/// Evolve every (exhaustive) or sampled initial fast configuration from
/// slow0 for T steps and histogram the final slow states.
Histogram run_ensemble(const ModelSpec& model, int slow0, long horizon, const EnsembleMode& mode);

/// Exact identity check: exhaustive classical frequencies against the slow
/// marginal of U^T rho0 U^T-dagger with rho0 uniform over fast configs.
/// Returns the max absolute deviation.
double density_matrix_check(const ModelSpec& model, int slow0, long horizon);

struct BornGapReport {
    std::vector<double> classical_frequencies;
    std::vector<double> quantum_probabilities;  // renormalized column of P U^T E
    double leakage = 0;                         // 1 - column norm^2 before renormalization
    double gap = 0;                             // max abs difference
};

/// Classical ensemble frequencies against ground-projected quantum
/// probabilities. The gap is reported, not thresholded.
BornGapReport born_gap(const ModelSpec& model, int slow0, long horizon);

/// Two-slit experiment roles and probe times.
struct ExperimentSpec {
    int source = 1;
    std::vector<int> slits;   // two disjoint slow labels
    std::vector<int> screen;  // ordered screen bins
    long t_slit = 0;
    long t_screen = 0;

    void validate(const ModelSpec& model) const;
};

struct ChiSquareStat {
    int coordinate = 1;  // fast variable (1-based)
    double statistic = 0;
    long dof = 0;
    double critical_99 = 0;
    bool fails_uniformity = false;  // statistic exceeds the 99th percentile
};

struct SlitClassReport {
    std::string label;
    Histogram screen_histogram;
    std::vector<long> initial_config_counts;  // over all fast configs
    std::vector<ChiSquareStat> uniformity;    // per fast coordinate
};

struct InterferenceResult {
    Histogram full_screen;                  // all trajectories binned at t_screen
    std::vector<SlitClassReport> classes;   // slit A, slit B, neither
    double fringe_visibility = 0;           // (max-min)/(max+min) over screen bins
};

InterferenceResult run_interference(const ModelSpec& model, const ExperimentSpec& spec,
                                    const EnsembleMode& mode);

/// Filter a recorded ensemble and histogram the final slow states.
std::pair<std::vector<TrajectoryRecord>, Histogram> postselect(
    const std::vector<TrajectoryRecord>& records, int n_slow,
    const std::function<bool(const TrajectoryRecord&)>& predicate);

/// Counter-based generator used by sampled mode (splitmix64 of seed + counter).
std::uint64_t counter_rng(std::uint64_t seed, std::uint64_t counter);

/// Unbiased-enough deterministic mapping of a 64-bit word onto [0, bound).
long bounded_draw(std::uint64_t word, long bound);

}  // namespace fastslow
