#include "fastslow/cbit.hpp"

#include <Eigen/Eigenvalues>

#include <deque>
#include <set>

namespace fastslow {

RealDoubledVector to_real_doubled(const Eigen::VectorXcd& v) {
    RealDoubledVector out(2 * v.size());
    for (long k = 0; k < v.size(); ++k) {
        out[2 * k] = v[k].real();
        out[2 * k + 1] = v[k].imag();
    }
    return out;
}

Eigen::VectorXcd from_real_doubled(const RealDoubledVector& v) {
    if (v.size() % 2 != 0)
        throw ValidationError("real-doubled vector must have even dimension");
    Eigen::VectorXcd out(v.size() / 2);
    for (long k = 0; k < out.size(); ++k) out[k] = cplx(v[2 * k], v[2 * k + 1]);
    return out;
}

Eigen::MatrixXd real_doubled_matrix(const Eigen::MatrixXcd& m) {
    Eigen::MatrixXd out(2 * m.rows(), 2 * m.cols());
    for (long r = 0; r < m.rows(); ++r)
        for (long c = 0; c < m.cols(); ++c) {
            const cplx z = m(r, c);
            out(2 * r, 2 * c) = z.real();
            out(2 * r, 2 * c + 1) = -z.imag();
            out(2 * r + 1, 2 * c) = z.imag();
            out(2 * r + 1, 2 * c + 1) = z.real();
        }
    return out;
}

Eigen::Matrix2cd pauli(Generator a) {
    const cplx i(0, 1);
    Eigen::Matrix2cd g;
    switch (a) {
        case Generator::Sigma1: g << 0, 1, 1, 0; break;
        case Generator::Sigma2: g << 0, -i, i, 0; break;
        case Generator::Sigma3: g << 1, 0, 0, -1; break;
        case Generator::Unit: g << 1, 0, 0, 1; break;
    }
    return g;
}

Eigen::Matrix4d real_switch_generator(Generator a) {
    const cplx i(0, 1);
    const Eigen::Matrix2cd m = a == Generator::Unit
                                   ? (i * Eigen::Matrix2cd::Identity()).eval()
                                   : (i * pauli(a)).eval();
    return real_doubled_matrix(m);
}

namespace {

Eigen::Matrix2cd hermitian_exp(const Eigen::Matrix2cd& h, double scale) {
    // exp(i * scale * h) for Hermitian h, by eigendecomposition.
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(h);
    Eigen::Vector2cd phases;
    for (int k = 0; k < 2; ++k) phases[k] = std::exp(cplx(0, scale * es.eigenvalues()[k]));
    return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace

PulseIdentityReport pulse_identities_check() {
    PulseIdentityReport report;
    const double pi = std::acos(-1.0);
    const cplx i(0, 1);
    for (Generator a : {Generator::Sigma1, Generator::Sigma2, Generator::Sigma3}) {
        const Eigen::Matrix2cd sigma = pauli(a);
        const double half = (hermitian_exp(sigma, pi / 2) - i * sigma).norm();
        const double full = (hermitian_exp(sigma, pi) + Eigen::Matrix2cd::Identity()).norm();
        report.max_half_pulse_error = std::max(report.max_half_pulse_error, half);
        report.max_full_pulse_error = std::max(report.max_full_pulse_error, full);
        if (half > 1e-12)
            report.failures.push_back(std::string("exp(i pi/2 ") + to_string(a) + ") != i*" +
                                      to_string(a));
        if (full > 1e-12)
            report.failures.push_back(std::string("exp(i pi ") + to_string(a) + ") != -1");
    }
    report.passed = report.failures.empty();
    return report;
}

Eigen::Matrix4i OntologicalOp::matrix() const {
    // P * C^b with C = diag(1,-1,1,-1): column k carries -1 when it is an
    // Im column (odd k) and conjugation is set.
    Eigen::Matrix4i m = Eigen::Matrix4i::Zero();
    for (int k = 0; k < 4; ++k)
        m(perm[k], k) = (conjugation && k % 2 == 1) ? -1 : 1;
    return m;
}

OntologicalOp OntologicalOp::compose(const OntologicalOp& other) const {
    OntologicalOp out;
    for (int k = 0; k < 4; ++k) out.perm[k] = perm[other.perm[k]];
    out.conjugation = conjugation != other.conjugation;
    return out;
}

std::vector<OntologicalOp> enumerate_ontological_group() {
    std::vector<OntologicalOp> generators;
    for (int k = 0; k < 3; ++k) {  // adjacent transpositions generate S4
        OntologicalOp t;
        std::swap(t.perm[k], t.perm[k + 1]);
        generators.push_back(t);
    }
    OntologicalOp conj;
    conj.conjugation = true;
    generators.push_back(conj);

    std::set<OntologicalOp> seen;
    std::deque<OntologicalOp> frontier;
    seen.insert(OntologicalOp{});
    frontier.push_back(OntologicalOp{});
    while (!frontier.empty()) {
        OntologicalOp op = frontier.front();
        frontier.pop_front();
        for (const OntologicalOp& g : generators) {
            OntologicalOp next = g.compose(op);
            if (seen.insert(next).second) frontier.push_back(next);
        }
    }
    return {seen.begin(), seen.end()};
}

bool group_contains_up_to_component_sign(const std::vector<OntologicalOp>& group,
                                         const Eigen::Matrix4d& m) {
    for (int s1 : {1, -1})
        for (int s2 : {1, -1}) {
            Eigen::Matrix4d scaled = m;
            scaled.col(0) *= s1;
            scaled.col(1) *= s1;
            scaled.col(2) *= s2;
            scaled.col(3) *= s2;
            for (const OntologicalOp& op : group)
                if ((scaled - op.matrix().cast<double>()).cwiseAbs().maxCoeff() < 1e-12)
                    return true;
        }
    return false;
}

}  // namespace fastslow
