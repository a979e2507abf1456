#include <doctest.h>

#include <cmath>
#include <numbers>

#include "fastslow/emergent.hpp"
#include "fastslow/step.hpp"

using namespace fastslow;
using std::numbers::pi;

namespace {

ModelSpec pair_model(std::vector<SwitchTerm> switches, std::vector<long> periods = {5, 7}) {
    ModelSpec model;
    model.n_slow = 2;
    model.lattice.periods = std::move(periods);
    model.switches = std::move(switches);
    return model;
}

}  // namespace

TEST_CASE("effective hamiltonian of a single sigma1 term") {
    const ModelSpec model = pair_model({{1, 2, Generator::Sigma1, 0, 0, +1}});
    const EffectiveHamiltonian h = effective_hamiltonian(model);
    REQUIRE(h.dim() == 2);
    const double c = pi / 2.0 / 35.0;
    CHECK(std::abs(h.matrix(0, 1) - cplx(c, 0)) <= 1e-15);
    CHECK(std::abs(h.matrix(1, 0) - cplx(c, 0)) <= 1e-15);
    CHECK(std::abs(h.matrix(0, 0)) == 0.0);
    CHECK(h.contributors(0, 1) == std::vector<int>{0});
    CHECK(h.contributors(0, 0).empty());
}

TEST_CASE("effective hamiltonian generator conventions") {
    const double c = pi / 2.0 / 35.0;

    auto h = effective_hamiltonian(pair_model({{1, 2, Generator::Sigma2, 0, 0, +1}}));
    CHECK(std::abs(h.matrix(0, 1) - cplx(0, -c)) <= 1e-15);
    CHECK(std::abs(h.matrix(1, 0) - cplx(0, c)) <= 1e-15);

    h = effective_hamiltonian(pair_model({{1, 2, Generator::Sigma3, 0, 0, -1}}));
    CHECK(std::abs(h.matrix(0, 0) - cplx(-c, 0)) <= 1e-15);
    CHECK(std::abs(h.matrix(1, 1) - cplx(c, 0)) <= 1e-15);

    h = effective_hamiltonian(pair_model({{1, 2, Generator::Unit, 0, 0, +1}}));
    CHECK(std::abs(h.matrix(0, 0) - cplx(c, 0)) <= 1e-15);
    CHECK(std::abs(h.matrix(1, 1) - cplx(c, 0)) <= 1e-15);

    // Opposite-sign terms at distinct locations cancel exactly.
    h = effective_hamiltonian(pair_model(
        {{1, 2, Generator::Sigma1, 0, 0, +1}, {1, 2, Generator::Sigma1, 1, 1, -1}}));
    CHECK(h.matrix.cwiseAbs().maxCoeff() == 0.0);
    CHECK(h.contributors(0, 1) == std::vector<int>{0, 1});
}

TEST_CASE("effective evolution flips with period 2 L_i L_j") {
    const ModelSpec model = pair_model({{1, 2, Generator::Sigma1, 0, 0, +1}});
    const Eigen::MatrixXcd h = effective_hamiltonian(model).matrix;
    Eigen::VectorXcd psi0(2);
    psi0 << 1, 0;

    // One full pass through the coincidence point: t = L_i L_j = 35 gives a
    // quarter-pulse with flip probability sin^2(pi/2) ... the coupling is
    // pi/2/35, so H*35 = (pi/2) sigma1: a perfect flip.
    Eigen::VectorXcd psi = evolve_effective(h, psi0, 35.0);
    CHECK(std::abs(std::abs(psi(1)) - 1.0) <= 1e-12);
    CHECK(std::abs(psi(0)) <= 1e-12);

    // Half that time: equal superposition.
    psi = evolve_effective(h, psi0, 17.5);
    CHECK(std::abs(std::norm(psi(0)) - 0.5) <= 1e-12);
    CHECK(std::abs(std::norm(psi(1)) - 0.5) <= 1e-12);

    // Propagator is unitary.
    const Eigen::MatrixXcd u = effective_propagator(h, 12.3);
    CHECK((u.adjoint() * u - Eigen::MatrixXcd::Identity(2, 2)).cwiseAbs().maxCoeff() <= 1e-12);

    Eigen::MatrixXcd bad = h;
    bad(0, 1) += cplx(0, 0.1);
    CHECK_THROWS_AS(evolve_effective(bad, psi0, 1.0), ValidationError);
}

TEST_CASE("ground projection and embedding") {
    const ModelSpec model = pair_model({{1, 2, Generator::Sigma1, 0, 0, +1}});
    Eigen::VectorXcd phi(2);
    phi << cplx(0.6, 0), cplx(0, 0.8);
    const Eigen::VectorXcd psi = embed_ground(phi, model);
    REQUIRE(psi.size() == 70);
    CHECK(std::abs(psi.norm() - 1.0) <= 1e-12);                      // isometry
    CHECK((project_ground(psi, model) - phi).cwiseAbs().maxCoeff() <= 1e-12);  // P E = 1
    CHECK(std::abs(psi(0) - cplx(0.6, 0) / std::sqrt(35.0)) <= 1e-15);
}

TEST_CASE("projected propagator of the switch-free model is the identity") {
    const ModelSpec model = pair_model({}, {2, 3});
    for (long t : {0L, 1L, 5L, 6L}) {
        const Eigen::MatrixXcd p = projected_propagator(model, t);
        CHECK((p - Eigen::MatrixXcd::Identity(2, 2)).cwiseAbs().maxCoeff() <= 1e-12);
    }
}

TEST_CASE("projected propagator flips after one pass, like the emergent law") {
    for (Generator g : {Generator::Sigma1, Generator::Sigma2}) {
        const ModelSpec model = pair_model({{1, 2, g, 0, 0, +1}});
        const Eigen::MatrixXcd p = projected_propagator(model, 35);
        CHECK(std::abs(std::norm(p(1, 0)) - 1.0) <= 1e-9);
        CHECK(std::norm(p(0, 0)) <= 1e-9);
    }
}

TEST_CASE("single-switch deviation vanishes after one full pass") {
    for (Generator g : {Generator::Sigma1, Generator::Sigma2, Generator::Sigma3}) {
        const ModelSpec model = pair_model({{1, 2, g, 0, 0, +1}});
        const DeviationCurve d = deviation_curve(model, 35);
        REQUIRE(d.points.size() == 36);
        CHECK(d.points.front().second <= 1e-12);
        CHECK(d.points.back().second <= 1e-9);  // t = L_i L_j: kick == pulse
    }

    // Switch-free: identically zero.
    const DeviationCurve none = deviation_curve(pair_model({}, {2, 3}), 6);
    CHECK(none.max_deviation <= 1e-12);
}

TEST_CASE("deviation at fixed horizon shrinks as the fast lattices grow") {
    // Same two-term non-commuting layout on an increasing lattice ladder,
    // compared over a common absolute horizon.
    const std::vector<std::vector<long>> ladder = {{5, 7}, {7, 11}, {11, 13}};
    double previous = -1;
    for (const auto& periods : ladder) {
        const ModelSpec model = pair_model(
            {{1, 2, Generator::Sigma1, 0, 0, +1}, {1, 2, Generator::Sigma2, 1, 3, +1}},
            periods);
        const DeviationCurve d = deviation_curve(model, 20);
        CHECK(d.max_deviation > 0.0);
        if (previous >= 0) CHECK(d.max_deviation < previous);
        previous = d.max_deviation;
    }
}

TEST_CASE("quasi-energy spectrum of the plain shift") {
    ModelSpec model;
    model.n_slow = 1;
    model.lattice.periods = {3};
    const auto spectrum = quasi_energy_spectrum(build_step_unitary(model));
    REQUIRE(spectrum.eigenphases.size() == 3);
    CHECK(std::abs(spectrum.eigenphases[0] - 0.0) <= 1e-12);
    CHECK(std::abs(spectrum.eigenphases[1] - 2 * pi / 3) <= 1e-12);
    CHECK(std::abs(spectrum.eigenphases[2] - 4 * pi / 3) <= 1e-12);

    CHECK_THROWS_AS(quasi_energy_spectrum(2.0 * Eigen::MatrixXcd::Identity(2, 2)),
                    ValidationError);
}

TEST_CASE("switch-free two-variable spectrum is a pi/3 ladder of multiplicity 2") {
    const ModelSpec model = pair_model({}, {2, 3});
    const auto spectrum = quasi_energy_spectrum(build_step_unitary(model));
    REQUIRE(spectrum.eigenphases.size() == 12);
    // Phases 2pi(n1/2 + n2/3) mod 2pi: multiples of pi/3, each from two slow copies.
    for (std::size_t k = 0; k < spectrum.eigenphases.size(); ++k) {
        const double expected = (k / 2) * pi / 3.0;
        CHECK(std::abs(spectrum.eigenphases[k] - expected) <= 1e-9);
    }

    const LadderReport ladder = ladder_report(spectrum);
    CHECK(ladder.regular);
    CHECK(ladder.distinct_phases.size() == 6);
    CHECK(std::abs(ladder.spacing - pi / 3.0) <= 1e-9);
    CHECK(ladder.max_residual <= 1e-9);
}

TEST_CASE("ladder report flags irregular spacing") {
    QuasiEnergySpectrum s;
    s.eigenphases = {0.0, 1.0, 2.5};
    CHECK_FALSE(ladder_report(s).regular);
}

TEST_CASE("operator norm") {
    Eigen::MatrixXcd m(2, 2);
    m << cplx(3, 0), 0, 0, cplx(0, -4);
    CHECK(std::abs(operator_norm(m) - 4.0) <= 1e-12);
}
