// Acceptance gate: one line per criterion, nonzero exit if any fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <vector>

#include "fastslow/cbit.hpp"
#include "fastslow/emergent.hpp"
#include "fastslow/ensemble.hpp"
#include "fastslow/model_io.hpp"
#include "fastslow/step.hpp"
#include "fastslow/synth.hpp"

using namespace fastslow;
using std::numbers::pi;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

void report(int criterion, bool ok, const std::string& what) {
    std::printf("%s criterion %d: %s\n", ok ? "PASS" : "FAIL", criterion, what.c_str());
    if (!ok) ++g_failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

ModelSpec random_model(std::mt19937& rng) {
    static const long period_choices[] = {3, 5, 7, 9, 11};
    ModelSpec model;
    for (;;) {
        model.n_slow = std::uniform_int_distribution<int>(1, 4)(rng);
        model.lattice.periods.clear();
        model.lattice.strict_coprime = false;
        for (int k = 0; k < model.n_slow; ++k)
            model.lattice.periods.push_back(
                period_choices[std::uniform_int_distribution<int>(0, 4)(rng)]);
        if (model.dimension() <= kDefaultDenseBudget) break;
    }
    model.switches.clear();
    if (model.n_slow >= 2) {
        const int n_switch = std::uniform_int_distribution<int>(0, 6)(rng);
        std::set<std::tuple<int, int, long, long>> used;
        for (int k = 0; k < n_switch; ++k) {
            SwitchTerm term;
            term.i = std::uniform_int_distribution<int>(1, model.n_slow - 1)(rng);
            term.j = std::uniform_int_distribution<int>(term.i + 1, model.n_slow)(rng);
            term.generator = static_cast<Generator>(std::uniform_int_distribution<int>(0, 3)(rng));
            term.loc_i =
                std::uniform_int_distribution<long>(0, model.period_of_slow(term.i) - 1)(rng);
            term.loc_j =
                std::uniform_int_distribution<long>(0, model.period_of_slow(term.j) - 1)(rng);
            term.sign = std::uniform_int_distribution<int>(0, 1)(rng) ? +1 : -1;
            if (used.insert({term.i, term.j, term.loc_i, term.loc_j}).second)
                model.switches.push_back(term);
        }
    }
    return model;
}

ModelSpec two_state_model(std::vector<SwitchTerm> switches, std::vector<long> periods) {
    ModelSpec model;
    model.n_slow = 2;
    model.lattice.periods = std::move(periods);
    model.switches = std::move(switches);
    return model;
}

// 1. Signed-permutation unitarity on randomized models.
void criterion_1() {
    const auto t0 = std::chrono::steady_clock::now();
    std::mt19937 rng(20240817);
    bool ok = true;
    for (int trial = 0; trial < 50 && ok; ++trial) {
        const ModelSpec model = random_model(rng);
        const Eigen::MatrixXcd u = build_step_unitary(model);
        const long D = model.dimension();
        std::vector<long> row_of(D, -1);
        std::vector<cplx> value_of(D);
        for (long c = 0; c < D && ok; ++c) {
            int nonzero = 0;
            for (long r = 0; r < D; ++r) {
                const cplx z = u(r, c);
                if (z == cplx(0, 0)) continue;
                ++nonzero;
                if (z != cplx(1, 0) && z != cplx(-1, 0) && z != cplx(0, 1) && z != cplx(0, -1))
                    ok = false;
                row_of[c] = r;
                value_of[c] = z;
            }
            if (nonzero != 1) ok = false;
        }
        if (!ok) break;
        // Gram deviation max |(U'U)(a,b) - delta_ab| without the dense product:
        // with one nonzero per column, (U'U)(a,b) = conj(z_a) z_b [row_a = row_b].
        double unitarity = 0;
        std::vector<std::vector<long>> by_row(D);
        for (long c = 0; c < D; ++c) by_row[row_of[c]].push_back(c);
        for (long r = 0; r < D; ++r)
            for (long a : by_row[r])
                for (long b : by_row[r]) {
                    const double entry = std::abs(std::conj(value_of[a]) * value_of[b] -
                                                  (a == b ? cplx(1, 0) : cplx(0, 0)));
                    unitarity = std::max(unitarity, entry);
                }
        if (unitarity > 1e-12) ok = false;
    }
    const double elapsed = seconds_since(t0);
    if (elapsed >= 5.0) ok = false;
    std::ostringstream what;
    what << "50 random one-step operators are signed permutations with unitarity <= 1e-12 ("
         << elapsed << " s)";
    report(1, ok, what.str());
}

// 2. Switch-free quasi-energy ladder.
void criterion_2(const fs::path& models) {
    const ModelFile file = parse_model((models / "noswitch_2x3.model").string());
    const auto spectrum = quasi_energy_spectrum(build_step_unitary(file.model));
    bool ok = spectrum.eigenphases.size() == 12;
    for (std::size_t k = 0; ok && k < spectrum.eigenphases.size(); ++k)
        if (std::abs(spectrum.eigenphases[k] - double(k / 2) * pi / 3) > 1e-9) ok = false;
    const LadderReport ladder = ladder_report(spectrum);
    if (!ladder.regular || ladder.max_residual > 1e-9 ||
        std::abs(ladder.spacing - pi / 3) > 1e-9 || ladder.distinct_phases.size() != 6)
        ok = false;
    report(2, ok, "switch-free L=(2,3) spectrum is a pi/3 ladder, multiplicity 2, residual <= 1e-9");
}

// 3. Full-period certainty for a single switch.
void criterion_3(const fs::path& models) {
    bool ok = true;
    for (const char* name : {"single_sigma1_5x7.model", "single_sigma2_5x7.model"}) {
        const ModelFile file = parse_model((models / name).string());
        const Eigen::MatrixXcd p = projected_propagator(file.model, 35);
        if (std::abs(std::norm(p(1, 0)) - 1.0) > 1e-9) ok = false;

        const Eigen::MatrixXcd h = effective_hamiltonian(file.model).matrix;
        const Eigen::MatrixXcd predicted = effective_propagator(h, 35.0);
        if ((p - predicted).cwiseAbs().maxCoeff() > 1e-9) ok = false;

        const Histogram classical = run_ensemble(file.model, 1, 35, EnsembleMode::exhaustive());
        if (classical.frequency(1) != 1.0) ok = false;
    }
    report(3, ok,
           "single-switch flip probability at t=35 is 1 +- 1e-9 and classical flip frequency "
           "is exactly 1");
}

// 4. Perturbative convergence with frozen baselines.
void criterion_4(const fs::path& models) {
    const auto t0 = std::chrono::steady_clock::now();
    constexpr long kHorizon = 20;
    constexpr double kBaselineCoarse = 0.91575298266142147;  // L=(5,7)
    constexpr double kBaselineFine = 0.27181011494415186;    // L=(11,13)

    const ModelFile coarse = parse_model((models / "noncommuting_5x7.model").string());
    const ModelFile fine = parse_model((models / "noncommuting_11x13.model").string());
    const double dev_coarse = deviation_curve(coarse.model, kHorizon).max_deviation;
    const double dev_fine = deviation_curve(fine.model, kHorizon).max_deviation;

    bool ok = dev_fine < dev_coarse;
    if (std::abs(dev_coarse - kBaselineCoarse) > 0.05 * kBaselineCoarse) ok = false;
    if (std::abs(dev_fine - kBaselineFine) > 0.05 * kBaselineFine) ok = false;
    const double elapsed = seconds_since(t0);
    if (elapsed >= 60.0) ok = false;
    std::ostringstream what;
    what << "horizon-20 max deviation " << dev_fine << " (11x13) < " << dev_coarse
         << " (5x7), both within 5% of frozen baselines (" << elapsed << " s)";
    report(4, ok, what.str());
}

// 5. Classical frequencies equal evolved density-matrix weights on all demos.
void criterion_5(const fs::path& models) {
    bool ok = true;
    int checked = 0;
    for (const auto& entry : fs::directory_iterator(models)) {
        if (entry.path().extension() != ".model") continue;
        const ModelFile file = parse_model(entry.path().string());
        if (file.model.dimension() > 2000) continue;
        ++checked;
        if (density_matrix_check(file.model, 1, 35) > 1e-12) ok = false;
    }
    if (checked == 0) ok = false;
    std::ostringstream what;
    what << "density_matrix_check <= 1e-12 on " << checked << " shipped demos with D <= 2000";
    report(5, ok, what.str());
}

// 6. Synthesis round trip on random Hermitian targets.
void criterion_6() {
    std::mt19937 rng(424242);
    std::normal_distribution<double> gauss(0.0, pi / 60);
    const TorusLattice lattice{{3, 5, 7, 11}, true};
    bool ok = true;
    for (int trial = 0; trial < 100 && ok; ++trial) {
        Eigen::MatrixXcd a(4, 4);
        for (int r = 0; r < 4; ++r)
            for (int c = 0; c < 4; ++c) a(r, c) = cplx(gauss(rng), gauss(rng));
        const Eigen::MatrixXcd target = 0.5 * (a + a.adjoint().eval());

        const SwitchProgram program = synthesize(target, lattice);
        const QuantizationError err = quantization_error(target, program);
        for (int r = 0; r < 4; ++r)
            for (int c = 0; c < 4; ++c)
                if (err.residual_abs(r, c) > err.bound(r, c) + 1e-12) ok = false;

        // On-grid: the realized matrix re-synthesizes exactly.
        const SwitchProgram exact = synthesize(program.realized, lattice);
        if ((exact.realized - program.realized).cwiseAbs().maxCoeff() > 1e-12) ok = false;

        // ModelFile round trip: identical text, identical re-synthesis.
        std::ostringstream text;
        write_model(text, {program.model, std::nullopt});
        std::istringstream in(text.str());
        const ModelFile back = parse_model(in, "roundtrip");
        std::ostringstream text2;
        write_model(text2, back);
        if (text.str() != text2.str()) ok = false;
        const Eigen::MatrixXcd h = effective_hamiltonian(back.model).matrix;
        if ((h - program.realized).cwiseAbs().maxCoeff() > 1e-12) ok = false;
    }
    report(6, ok,
           "100 random Hermitian targets: residuals within the half-grid bound, on-grid exact, "
           "model files round trip");
}

// 7. Two-slit interference demo.
void criterion_7(const fs::path& models) {
    const auto t0 = std::chrono::steady_clock::now();
    constexpr double kFrozenVisibility = 0.5208333333333334;

    const ModelFile file = parse_model((models / "twoslit_31x37.model").string());
    bool ok = file.experiment.has_value();
    const InterferenceResult result =
        run_interference(file.model, *file.experiment, EnsembleMode::exhaustive());

    if (result.full_screen.total != 1147) ok = false;

    // (a) exact partition of the full histogram by slit class.
    long class_total = 0;
    for (int s = 0; s < file.model.n_slow; ++s) {
        long merged = 0;
        for (const auto& cls : result.classes) merged += cls.screen_histogram.counts[s];
        if (merged != result.full_screen.counts[s]) ok = false;
    }
    for (const auto& cls : result.classes) class_total += cls.screen_histogram.total;
    if (class_total != result.full_screen.total) ok = false;

    // (b) each slit class's initial-configuration distribution is demonstrably
    // non-uniform at the 99th percentile on at least one fast coordinate.
    for (int c = 0; c < 2; ++c) {
        bool fails_somewhere = false;
        for (const ChiSquareStat& stat : result.classes[c].uniformity)
            if (stat.fails_uniformity) fails_somewhere = true;
        if (!fails_somewhere) ok = false;
    }

    // (c) frozen fringe visibility.
    if (std::abs(result.fringe_visibility - kFrozenVisibility) > 1e-12) ok = false;

    const double elapsed = seconds_since(t0);
    if (elapsed >= 30.0) ok = false;
    std::ostringstream what;
    what << "1147-trajectory two-slit run: exact partition, slit classes fail uniformity at "
            "the 99th percentile, visibility "
         << result.fringe_visibility << " (" << elapsed << " s)";
    report(7, ok, what.str());
}

// 8. c-bit group order and pulse identities.
void criterion_8() {
    const auto group = enumerate_ontological_group();
    const PulseIdentityReport pulses = pulse_identities_check();
    const bool ok = group.size() == 48 && pulses.passed &&
                    pulses.max_half_pulse_error <= 1e-12 && pulses.max_full_pulse_error <= 1e-12;
    report(8, ok, "ontological group has order 48 and pulse identities hold to 1e-12");
}

}  // namespace

int main(int argc, char** argv) {
    if (argc != 2) {
        std::fprintf(stderr, "usage: %s <models-dir>\n", argv[0]);
        return 2;
    }
    const fs::path models(argv[1]);
    try {
        criterion_1();
        criterion_2(models);
        criterion_3(models);
        criterion_4(models);
        criterion_5(models);
        criterion_6();
        criterion_7(models);
        criterion_8();
    } catch (const std::exception& e) {
        std::fprintf(stderr, "acceptance run aborted: %s\n", e.what());
        return 2;
    }
    return g_failures == 0 ? 0 : 1;
}
