#include "fastslow/synth.hpp"

#include <cmath>
#include <map>
#include <sstream>

#include "fastslow/emergent.hpp"

namespace fastslow {

namespace {
const double kPi = std::acos(-1.0);
constexpr long kParityScanLimit = 64;
}  // namespace

long round_half_even(double x) {
    const double f = std::floor(x);
    const double diff = x - f;
    const long lf = static_cast<long>(f);
    if (diff > 0.5) return lf + 1;
    if (diff < 0.5) return lf;
    return lf % 2 == 0 ? lf : lf + 1;
}

double grid_step(const TorusLattice& lattice, int i, int j) {
    return (kPi / 2) / double(lattice.periods[i - 1] * lattice.periods[j - 1]);
}

namespace {

long parity_nearest(double x, long parity) {
    // Nearest integer to x with the requested parity (mod 2).
    const long lo = static_cast<long>(std::floor(x));
    long best = 0;
    double best_dist = -1;
    for (long cand = lo - 2; cand <= lo + 3; ++cand) {
        if (((cand % 2) + 2) % 2 != ((parity % 2) + 2) % 2) continue;
        const double dist = std::abs(x - double(cand));
        if (best_dist < 0 || dist < best_dist) {
            best = cand;
            best_dist = dist;
        }
    }
    return best;
}

long parity_of(long v) { return ((v % 2) + 2) % 2; }

struct DiagonalSolution {
    std::vector<long> sigma3;  // per chain pair (k, k+1)
    std::vector<long> unit;
};

// Solve the diagonal system over the chain pairs (1,2),(2,3),...  Entry k
// receives r_{k-1} q_{k-1} + p_k q_k; the last entry receives r_{P-1} q_{P-1}.
// All p, r are integers with p_c == r_c (mod 2) so that sigma3/unit counts
// (p-r)/2 and (p+r)/2 are integral.
DiagonalSolution solve_diagonal(const Eigen::VectorXd& diag, const TorusLattice& lattice) {
    const int n = static_cast<int>(diag.size());
    DiagonalSolution sol;
    if (n == 1) {
        if (std::abs(diag[0]) > 1e-12)
            throw ValidationError("infeasible diagonal system: a single slow state has no "
                                  "pair to realize diagonal residual " +
                                  std::to_string(diag[0]));
        return sol;
    }
    const int pairs = n - 1;
    std::vector<double> q(pairs);
    for (int c = 0; c < pairs; ++c) q[c] = grid_step(lattice, c + 1, c + 2);

    std::vector<long> p(pairs), r(pairs);
    auto solve_p = [&](int c, long r_prev) {
        const double carry = c == 0 ? 0.0 : double(r_prev) * q[c - 1];
        return round_half_even((diag[c] - carry) / q[c]);
    };

    for (int c = 0; c < pairs; ++c) {
        p[c] = solve_p(c, c == 0 ? 0 : r[c - 1]);
        if (c < pairs - 2) {
            r[c] = parity_of(p[c]);
        } else if (c == pairs - 2) {
            // Lookahead: choose r so that the final pair can round freely.
            long best_r = parity_of(p[c]);
            double best_score = -1;
            for (long m = 0; m <= kParityScanLimit; ++m) {
                for (int dir : {+1, -1}) {
                    if (m == 0 && dir < 0) continue;
                    const long cand = parity_of(p[c]) + dir * 2 * m;
                    const long p_next = solve_p(c + 1, cand);
                    const long r_final = parity_nearest(diag[n - 1] / q[pairs - 1],
                                                       parity_of(p_next));
                    const double res_mid = std::abs(diag[c + 1] -
                                                    (double(cand) * q[c] +
                                                     double(p_next) * q[c + 1]));
                    const double res_end =
                        std::abs(diag[n - 1] - double(r_final) * q[pairs - 1]);
                    const double score = std::max(res_mid, res_end);
                    if (best_score < 0 || score < best_score - 1e-15) {
                        best_score = score;
                        best_r = cand;
                    }
                }
            }
            r[c] = best_r;
            p[c + 1] = solve_p(c + 1, r[c]);
        } else {
            // c == pairs - 1: final pair, r constrained by the last entry.
            r[c] = parity_nearest(diag[n - 1] / q[c], parity_of(p[c]));
        }
    }

    sol.sigma3.resize(pairs);
    sol.unit.resize(pairs);
    for (int c = 0; c < pairs; ++c) {
        sol.sigma3[c] = (p[c] - r[c]) / 2;
        sol.unit[c] = (p[c] + r[c]) / 2;
    }
    return sol;
}

}  // namespace

SwitchProgram synthesize(const Eigen::MatrixXcd& target, const TorusLattice& lattice) {
    lattice.validate();
    const int n = static_cast<int>(target.rows());
    if (target.cols() != n) throw ValidationError("synthesis target must be square");
    if (static_cast<int>(lattice.size()) != n)
        throw ValidationError("synthesis requires one fast variable per slow state");
    if ((target - target.adjoint()).cwiseAbs().maxCoeff() > 1e-12)
        throw ValidationError("synthesis target must be Hermitian to 1e-12");

    SwitchProgram program;
    program.model.n_slow = n;
    program.model.lattice = lattice;

    std::map<std::pair<int, int>, PairMultiplicities> mult;
    auto at = [&](int i, int j) -> PairMultiplicities& {
        auto [it, inserted] = mult.try_emplace({i, j});
        if (inserted) {
            it->second.i = i;
            it->second.j = j;
        }
        return it->second;
    };

    for (int i = 1; i <= n; ++i)
        for (int j = i + 1; j <= n; ++j) {
            const double q = grid_step(lattice, i, j);
            const long r1 = round_half_even(target(i - 1, j - 1).real() / q);
            const long r2 = round_half_even(-target(i - 1, j - 1).imag() / q);
            if (r1 != 0) at(i, j).r_sigma1 = r1;
            if (r2 != 0) at(i, j).r_sigma2 = r2;
        }

    const DiagonalSolution diag = solve_diagonal(target.diagonal().real(), lattice);
    for (std::size_t c = 0; c < diag.sigma3.size(); ++c) {
        const int i = static_cast<int>(c) + 1, j = i + 1;
        if (diag.sigma3[c] != 0) at(i, j).r_sigma3 = diag.sigma3[c];
        if (diag.unit[c] != 0) at(i, j).r_unit = diag.unit[c];
    }

    // Emit terms, row-major location assignment per pair.
    for (auto& [key, pm] : mult) {
        const long Li = lattice.periods[pm.i - 1];
        const long Lj = lattice.periods[pm.j - 1];
        const long needed = std::abs(pm.r_sigma1) + std::abs(pm.r_sigma2) +
                            std::abs(pm.r_sigma3) + std::abs(pm.r_unit);
        if (needed > Li * Lj) {
            std::ostringstream msg;
            msg << "pair (" << pm.i << "," << pm.j << ") needs " << needed
                << " distinct firing locations but only " << Li * Lj << " exist";
            throw CapacityError(msg.str());
        }
        long loc = 0;
        auto emit = [&](Generator g, long count) {
            const int sign = count >= 0 ? +1 : -1;
            for (long k = 0; k < std::abs(count); ++k, ++loc)
                program.model.switches.push_back(
                    {pm.i, pm.j, g, loc / Lj, loc % Lj, sign});
        };
        emit(Generator::Sigma1, pm.r_sigma1);
        emit(Generator::Sigma2, pm.r_sigma2);
        emit(Generator::Sigma3, pm.r_sigma3);
        emit(Generator::Unit, pm.r_unit);
        program.multiplicities.push_back(pm);
    }

    program.model.validate();
    program.realized = effective_hamiltonian(program.model).matrix;
    return program;
}

QuantizationError quantization_error(const Eigen::MatrixXcd& target,
                                     const SwitchProgram& program) {
    const int n = static_cast<int>(target.rows());
    if (program.realized.rows() != n)
        throw ValidationError("quantization error: dimension mismatch");
    QuantizationError err;
    // Componentwise residual: the real and imaginary parts quantize on
    // independent grids, so each is bounded separately.
    const Eigen::MatrixXcd delta = program.realized - target;
    err.residual_abs = delta.real().cwiseAbs().cwiseMax(delta.imag().cwiseAbs());
    err.max_abs = err.residual_abs.maxCoeff();
    err.bound.resize(n, n);
    const TorusLattice& lattice = program.model.lattice;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (i != j) {
                err.bound(i, j) = grid_step(lattice, std::min(i, j) + 1,
                                            std::max(i, j) + 1) / 2;
            } else {
                // Diagonal entries are realized on their chain pair.
                const int c = std::min(i, n - 2);
                err.bound(i, j) = n == 1 ? 0.0 : grid_step(lattice, c + 1, c + 2) / 2;
            }
        }
    return err;
}

}  // namespace fastslow
