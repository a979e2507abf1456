// Command-line front end: model files in, deterministic CSV/text out.
#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include "fastslow/cbit.hpp"
#include "fastslow/emergent.hpp"
#include "fastslow/ensemble.hpp"
#include "fastslow/model_io.hpp"
#include "fastslow/step.hpp"
#include "fastslow/synth.hpp"

namespace {

using namespace fastslow;

struct Options {
    std::string model_path;
    std::string target_path;
    std::string out_path;
    std::string mode = "exhaustive";
    std::vector<long> periods;
    long horizon = 0;
    long samples = 1000;
    std::uint64_t seed = 0;
    int slow0 = 1;
};

std::ostream& open_out(const Options& opt, std::ofstream& file) {
    if (opt.out_path.empty()) return std::cout;
    file.open(opt.out_path);
    if (!file) throw ValidationError("cannot open output file " + opt.out_path);
    return file;
}

EnsembleMode parse_mode(const Options& opt) {
    if (opt.mode == "exhaustive") return EnsembleMode::exhaustive();
    if (opt.mode == "sampled") return EnsembleMode::sampled(opt.samples, opt.seed);
    throw ValidationError("--mode must be exhaustive or sampled");
}

int cmd_validate(const Options& opt) {
    const ModelFile file = parse_model(opt.model_path);
    std::ofstream sink;
    std::ostream& out = open_out(opt, sink);

    out << "model: ok (n_slow=" << file.model.n_slow << ", dim=" << file.model.dimension()
        << ")\n";

    // One-step evolution must be an exact signed permutation: targets form a
    // bijection and phases are fourth roots of unity.
    const SignedPermutation perm = build_step_permutation(file.model);
    std::vector<bool> hit(perm.target.size(), false);
    for (std::size_t b = 0; b < perm.target.size(); ++b) {
        const long image = perm.target[b];
        if (image < 0 || image >= perm.dimension() || hit[image])
            throw ToleranceError("one-step map is not a permutation");
        hit[image] = true;
        if (perm.phase_quarter[b] < 0 || perm.phase_quarter[b] > 3)
            throw ToleranceError("one-step phase is not a fourth root of unity");
    }
    out << "step permutation: bijective on " << file.model.dimension() << " states\n";

    const Eigen::MatrixXcd h = effective_hamiltonian(file.model).matrix;
    if ((h - h.adjoint()).cwiseAbs().maxCoeff() > 1e-14)
        throw ToleranceError("effective Hamiltonian is not Hermitian");
    out << "effective hamiltonian: hermitian\n";

    const PulseIdentityReport pulses = pulse_identities_check();
    if (!pulses.passed) throw ToleranceError("pulse identities failed");
    out << "pulse identities: ok (half-pulse err " << format_double(pulses.max_half_pulse_error)
        << ")\n";

    const auto group = enumerate_ontological_group();
    if (group.size() != 48) throw ToleranceError("ontological group order != 48");
    out << "ontological group: order 48\n";

    if (file.experiment) out << "experiment: ok\n";
    return 0;
}

int cmd_spectrum(const Options& opt) {
    const ModelFile file = parse_model(opt.model_path);
    const auto spectrum = quasi_energy_spectrum(build_step_unitary(file.model));
    const LadderReport ladder = ladder_report(spectrum);
    std::ofstream sink;
    std::ostream& out = open_out(opt, sink);
    out << "index,eigenphase\n";
    for (std::size_t k = 0; k < spectrum.eigenphases.size(); ++k)
        out << k << "," << format_double(spectrum.eigenphases[k]) << "\n";
    std::cerr << "ladder: " << (ladder.regular ? "regular" : "irregular") << " spacing "
              << format_double(ladder.spacing) << " max residual "
              << format_double(ladder.max_residual) << "\n";
    return 0;
}

int cmd_effective(const Options& opt) {
    const ModelFile file = parse_model(opt.model_path);
    std::ofstream sink;
    std::ostream& out = open_out(opt, sink);
    write_matrix(out, effective_hamiltonian(file.model).matrix);
    return 0;
}

int cmd_synth(const Options& opt) {
    const Eigen::MatrixXcd target = parse_matrix(opt.target_path);
    if (opt.periods.empty())
        throw ValidationError("synth needs --periods, one fast period per slow state");
    TorusLattice lattice;
    lattice.periods = opt.periods;
    const SwitchProgram program = synthesize(target, lattice);
    const QuantizationError err = quantization_error(target, program);

    std::ofstream sink;
    std::ostream& out = open_out(opt, sink);
    write_model(out, {program.model, std::nullopt});
    std::cerr << "synthesized " << program.model.switches.size()
              << " switch terms, max quantization residual " << format_double(err.max_abs)
              << "\n";
    return 0;
}

int cmd_evolve(const Options& opt) {
    const ModelFile file = parse_model(opt.model_path);
    const ModelSpec& model = file.model;
    if (opt.slow0 < 1 || opt.slow0 > model.n_slow)
        throw ValidationError("--slow0 out of range");

    std::ofstream sink;
    std::ostream& out = open_out(opt, sink);
    out << "t";
    for (int s = 1; s <= model.n_slow; ++s) out << ",p_slow" << s;
    out << "\n";

    // Exact evolution of the fast-uniform initial state; probabilities are the
    // slow marginals, so they sum to one at every t.
    Eigen::VectorXcd phi0 = Eigen::VectorXcd::Zero(model.n_slow);
    phi0(opt.slow0 - 1) = 1.0;
    Eigen::VectorXcd psi = embed_ground(phi0, model);
    const SignedPermutation perm = build_step_permutation(model);
    const long F = model.fast_count();
    for (long t = 0; t <= opt.horizon; ++t) {
        out << t;
        for (int s = 0; s < model.n_slow; ++s) {
            const double p = psi.segment(s * F, F).squaredNorm();
            out << "," << format_double(p);
        }
        out << "\n";
        if (t < opt.horizon) psi = perm.apply(psi);
    }
    return 0;
}

int cmd_deviation(const Options& opt) {
    const ModelFile file = parse_model(opt.model_path);
    const DeviationCurve curve = deviation_curve(file.model, opt.horizon);
    std::ofstream sink;
    std::ostream& out = open_out(opt, sink);
    out << "t,deviation\n";
    for (const auto& [t, v] : curve.points) out << t << "," << format_double(v) << "\n";
    std::cerr << "max deviation " << format_double(curve.max_deviation) << "\n";
    return 0;
}

int cmd_ensemble(const Options& opt) {
    const ModelFile file = parse_model(opt.model_path);
    const Histogram hist = run_ensemble(file.model, opt.slow0, opt.horizon, parse_mode(opt));
    std::ofstream sink;
    std::ostream& out = open_out(opt, sink);
    out << "slow,count,frequency\n";
    for (int s = 0; s < file.model.n_slow; ++s)
        out << s + 1 << "," << hist.counts[s] << "," << format_double(hist.frequency(s))
            << "\n";
    return 0;
}

int cmd_interfere(const Options& opt) {
    const ModelFile file = parse_model(opt.model_path);
    if (!file.experiment)
        throw ValidationError("interfere needs an [experiment] section in the model file");
    const InterferenceResult result =
        run_interference(file.model, *file.experiment, parse_mode(opt));

    std::ofstream sink;
    std::ostream& out = open_out(opt, sink);
    out << "quantity,class,key,value\n";
    for (int s = 0; s < file.model.n_slow; ++s)
        out << "screen_count,all," << s + 1 << "," << result.full_screen.counts[s] << "\n";
    for (const auto& cls : result.classes) {
        for (int s = 0; s < file.model.n_slow; ++s)
            out << "screen_count," << cls.label << "," << s + 1 << ","
                << cls.screen_histogram.counts[s] << "\n";
        for (const ChiSquareStat& stat : cls.uniformity) {
            out << "chi_square," << cls.label << ",x" << stat.coordinate << ","
                << format_double(stat.statistic) << "\n";
            out << "chi_square_critical_99," << cls.label << ",x" << stat.coordinate << ","
                << format_double(stat.critical_99) << "\n";
            out << "fails_uniformity," << cls.label << ",x" << stat.coordinate << ","
                << (stat.fails_uniformity ? 1 : 0) << "\n";
        }
    }
    out << "fringe_visibility,all,," << format_double(result.fringe_visibility) << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"deterministic fast/slow lattice model toolkit"};
    app.require_subcommand(1);
    Options opt;

    auto add_model = [&](CLI::App* sub) {
        sub->add_option("--model", opt.model_path, "model file")->required();
    };
    auto add_out = [&](CLI::App* sub) {
        sub->add_option("--out", opt.out_path, "output file (default stdout)");
    };
    auto add_mode = [&](CLI::App* sub) {
        sub->add_option("--mode", opt.mode, "exhaustive|sampled");
        sub->add_option("--samples", opt.samples, "sample count for sampled mode");
        sub->add_option("--seed", opt.seed, "seed for sampled mode");
    };

    CLI::App* validate = app.add_subcommand("validate", "check a model and core identities");
    add_model(validate), add_out(validate);

    CLI::App* spectrum = app.add_subcommand("spectrum", "quasi-energy eigenphases CSV");
    add_model(spectrum), add_out(spectrum);

    CLI::App* effective = app.add_subcommand("effective", "emergent slow Hamiltonian matrix");
    add_model(effective), add_out(effective);

    CLI::App* synth = app.add_subcommand("synth", "compile a Hermitian target into switches");
    synth->add_option("--target", opt.target_path, "matrix file")->required();
    synth->add_option("--periods", opt.periods, "fast periods, one per slow state")
        ->required()
        ->delimiter(',');
    add_out(synth);

    CLI::App* evolve = app.add_subcommand("evolve", "slow-state probabilities over time");
    add_model(evolve), add_out(evolve);
    evolve->add_option("--horizon", opt.horizon, "number of steps")->required();
    evolve->add_option("--slow0", opt.slow0, "initial slow state (1-based)");

    CLI::App* deviation = app.add_subcommand("deviation", "emergent-vs-exact deviation CSV");
    add_model(deviation), add_out(deviation);
    deviation->add_option("--horizon", opt.horizon, "number of steps")->required();

    CLI::App* ensemble = app.add_subcommand("ensemble", "classical trajectory histogram");
    add_model(ensemble), add_out(ensemble), add_mode(ensemble);
    ensemble->add_option("--horizon", opt.horizon, "number of steps")->required();
    ensemble->add_option("--slow0", opt.slow0, "initial slow state (1-based)");

    CLI::App* interfere = app.add_subcommand("interfere", "two-slit experiment statistics");
    add_model(interfere), add_out(interfere), add_mode(interfere);

    CLI11_PARSE(app, argc, argv);

    try {
        if (validate->parsed()) return cmd_validate(opt);
        if (spectrum->parsed()) return cmd_spectrum(opt);
        if (effective->parsed()) return cmd_effective(opt);
        if (synth->parsed()) return cmd_synth(opt);
        if (evolve->parsed()) return cmd_evolve(opt);
        if (deviation->parsed()) return cmd_deviation(opt);
        if (ensemble->parsed()) return cmd_ensemble(opt);
        if (interfere->parsed()) return cmd_interfere(opt);
    } catch (const CapacityError& e) {
        std::cerr << "capacity error: " << e.what() << "\n";
        return 3;
    } catch (const ToleranceError& e) {
        std::cerr << "tolerance error: " << e.what() << "\n";
        return 4;
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
