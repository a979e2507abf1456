#include "fastslow/emergent.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>

#include "fastslow/step.hpp"

namespace fastslow {

namespace {
const double kPi = std::acos(-1.0);
}

EffectiveHamiltonian effective_hamiltonian(const ModelSpec& model) {
    model.validate();
    const int n = model.n_slow;
    EffectiveHamiltonian h;
    h.matrix = Eigen::MatrixXcd::Zero(n, n);
    h.provenance.assign(static_cast<std::size_t>(n) * n, {});

    auto touch = [&](int r, int c, cplx value, int term_idx) {
        h.matrix(r, c) += value;
        h.provenance[r * n + c].push_back(term_idx);
    };

    for (std::size_t t = 0; t < model.switches.size(); ++t) {
        const SwitchTerm& term = model.switches[t];
        const long Li = model.period_of_slow(term.i);
        const long Lj = model.period_of_slow(term.j);
        const double c = term.sign * (kPi / 2) / double(Li * Lj);
        const int r = term.i - 1, s = term.j - 1;
        const int idx = static_cast<int>(t);
        switch (term.generator) {
            case Generator::Sigma1:
                touch(r, s, c, idx);
                touch(s, r, c, idx);
                break;
            case Generator::Sigma2:
                touch(r, s, cplx(0, -c), idx);
                touch(s, r, cplx(0, c), idx);
                break;
            case Generator::Sigma3:
                touch(r, r, c, idx);
                touch(s, s, -c, idx);
                break;
            case Generator::Unit:
                touch(r, r, c, idx);
                touch(s, s, c, idx);
                break;
        }
    }
    return h;
}

Eigen::MatrixXcd effective_propagator(const Eigen::MatrixXcd& h, double t) {
    if ((h - h.adjoint()).cwiseAbs().maxCoeff() > 1e-12)
        throw ValidationError("effective propagator requires a Hermitian matrix");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
    Eigen::VectorXcd phases(h.rows());
    for (long k = 0; k < h.rows(); ++k)
        phases[k] = std::exp(cplx(0, -es.eigenvalues()[k] * t));
    return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

Eigen::VectorXcd evolve_effective(const Eigen::MatrixXcd& h, const Eigen::VectorXcd& psi0,
                                  double t) {
    if (psi0.size() != h.rows())
        throw ValidationError("state dimension does not match Hamiltonian");
    return effective_propagator(h, t) * psi0;
}

Eigen::VectorXcd project_ground(const Eigen::VectorXcd& psi, const ModelSpec& model) {
    const long F = model.fast_count();
    if (psi.size() != model.dimension())
        throw ValidationError("state dimension does not match model");
    const double w = 1.0 / std::sqrt(double(F));
    Eigen::VectorXcd out = Eigen::VectorXcd::Zero(model.n_slow);
    for (int s = 0; s < model.n_slow; ++s)
        out[s] = w * psi.segment(static_cast<long>(s) * F, F).sum();
    return out;
}

Eigen::VectorXcd embed_ground(const Eigen::VectorXcd& phi, const ModelSpec& model) {
    const long F = model.fast_count();
    if (phi.size() != model.n_slow)
        throw ValidationError("slow vector dimension does not match model");
    const double w = 1.0 / std::sqrt(double(F));
    Eigen::VectorXcd out(model.dimension());
    for (int s = 0; s < model.n_slow; ++s)
        out.segment(static_cast<long>(s) * F, F).setConstant(w * phi[s]);
    return out;
}

Eigen::MatrixXcd projected_propagator(const ModelSpec& model, long t) {
    if (t < 0) throw ValidationError("projected propagator requires t >= 0");
    const SignedPermutation step = build_step_permutation(model);
    const int n = model.n_slow;
    Eigen::MatrixXcd result(n, n);
    for (int s = 0; s < n; ++s) {
        Eigen::VectorXcd basis = Eigen::VectorXcd::Zero(n);
        basis[s] = 1;
        Eigen::VectorXcd col = embed_ground(basis, model);
        for (long k = 0; k < t; ++k) col = step.apply(col);
        result.col(s) = project_ground(col, model);
    }
    return result;
}

double operator_norm(const Eigen::MatrixXcd& m) {
    return Eigen::JacobiSVD<Eigen::MatrixXcd>(m).singularValues()[0];
}

DeviationCurve deviation_curve(const ModelSpec& model, long horizon) {
    if (horizon < 0) throw ValidationError("horizon must be >= 0");
    const SignedPermutation step = build_step_permutation(model);
    const EffectiveHamiltonian h = effective_hamiltonian(model);
    const int n = model.n_slow;

    // Evolve the N embedded ground columns incrementally.
    std::vector<Eigen::VectorXcd> cols(n);
    for (int s = 0; s < n; ++s) {
        Eigen::VectorXcd basis = Eigen::VectorXcd::Zero(n);
        basis[s] = 1;
        cols[s] = embed_ground(basis, model);
    }

    DeviationCurve curve;
    for (long t = 0; t <= horizon; ++t) {
        Eigen::MatrixXcd exact(n, n);
        for (int s = 0; s < n; ++s) exact.col(s) = project_ground(cols[s], model);
        const double dev = operator_norm(exact - effective_propagator(h.matrix, double(t)));
        curve.points.push_back({t, dev});
        curve.max_deviation = std::max(curve.max_deviation, dev);
        if (t < horizon)
            for (int s = 0; s < n; ++s) cols[s] = step.apply(cols[s]);
    }
    return curve;
}

QuasiEnergySpectrum quasi_energy_spectrum(const Eigen::MatrixXcd& u) {
    const long d = u.rows();
    if (u.cols() != d) throw ValidationError("spectrum input must be square");
    const double unitarity =
        (u.adjoint() * u - Eigen::MatrixXcd::Identity(d, d)).cwiseAbs().maxCoeff();
    if (unitarity > 1e-10)
        throw ValidationError("spectrum input is not unitary (||U^dag U - I|| = " +
                              std::to_string(unitarity) + ")");
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(u, false);
    QuasiEnergySpectrum spectrum;
    spectrum.eigenphases.reserve(d);
    for (long k = 0; k < d; ++k) {
        double phase = std::arg(es.eigenvalues()[k]);
        if (phase < 0) phase += 2 * kPi;
        if (phase >= 2 * kPi) phase -= 2 * kPi;
        spectrum.eigenphases.push_back(phase);
    }
    std::sort(spectrum.eigenphases.begin(), spectrum.eigenphases.end());
    return spectrum;
}

LadderReport ladder_report(const QuasiEnergySpectrum& spectrum, double merge_tol) {
    if (spectrum.eigenphases.empty())
        throw ValidationError("ladder report requires a nonempty spectrum");
    LadderReport report;
    for (double p : spectrum.eigenphases) {
        if (report.distinct_phases.empty() || p - report.distinct_phases.back() > merge_tol)
            report.distinct_phases.push_back(p);
    }
    const std::size_t m = report.distinct_phases.size();
    if (m <= 1) {
        report.regular = true;
        return report;
    }
    std::vector<double> diffs(m - 1);
    for (std::size_t k = 0; k + 1 < m; ++k)
        diffs[k] = report.distinct_phases[k + 1] - report.distinct_phases[k];
    std::vector<double> sorted = diffs;
    std::sort(sorted.begin(), sorted.end());
    report.spacing = sorted[sorted.size() / 2];  // median spacing
    for (double d : diffs)
        report.max_residual = std::max(report.max_residual, std::abs(d - report.spacing));
    report.regular = report.max_residual <= merge_tol;
    return report;
}

}  // namespace fastslow
