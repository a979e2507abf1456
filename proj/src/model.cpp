#include "fastslow/model.hpp"

#include <numeric>
#include <set>
#include <sstream>
#include <tuple>

namespace fastslow {

const char* to_string(Generator g) {
    switch (g) {
        case Generator::Sigma1: return "sigma1";
        case Generator::Sigma2: return "sigma2";
        case Generator::Sigma3: return "sigma3";
        case Generator::Unit: return "unit";
    }
    return "?";
}

std::optional<Generator> generator_from_string(std::string_view s) {
    if (s == "sigma1") return Generator::Sigma1;
    if (s == "sigma2") return Generator::Sigma2;
    if (s == "sigma3") return Generator::Sigma3;
    if (s == "unit") return Generator::Unit;
    return std::nullopt;
}

long TorusLattice::total_configs() const {
    long total = 1;
    for (long L : periods) total *= L;
    return total;
}

void TorusLattice::validate() const {
    if (periods.empty())
        throw ValidationError("lattice must have at least one fast variable");
    for (long L : periods)
        if (L < 1) throw ValidationError("every period must be >= 1");
    if (strict_coprime) {
        for (std::size_t a = 0; a < periods.size(); ++a)
            for (std::size_t b = a + 1; b < periods.size(); ++b)
                if (std::gcd(periods[a], periods[b]) != 1) {
                    std::ostringstream msg;
                    msg << "strict_coprime violated: gcd(L_" << a + 1 << "=" << periods[a]
                        << ", L_" << b + 1 << "=" << periods[b] << ") != 1";
                    throw ValidationError(msg.str());
                }
    }
}

void FastConfig::validate(const TorusLattice& lattice) const {
    if (positions.size() != lattice.periods.size())
        throw ValidationError("fast config has wrong number of coordinates");
    for (std::size_t k = 0; k < positions.size(); ++k)
        if (positions[k] < 0 || positions[k] >= lattice.periods[k])
            throw ValidationError("fast coordinate " + std::to_string(k + 1) + " out of range");
}

int ModelSpec::fast_index(int slow) const {
    const int m = static_cast<int>(lattice.periods.size());
    return (slow - 1) % m + 1;
}

long ModelSpec::period_of_slow(int slow) const {
    return lattice.periods[fast_index(slow) - 1];
}

void ModelSpec::validate() const {
    if (n_slow < 1) throw ValidationError("n_slow must be positive");
    lattice.validate();
    std::set<std::tuple<int, int, long, long>> seen;
    for (const SwitchTerm& term : switches) {
        if (term.i < 1 || term.j > n_slow || term.i >= term.j)
            throw ValidationError("switch pair must satisfy 1 <= i < j <= n_slow");
        if (term.sign != 1 && term.sign != -1)
            throw ValidationError("switch sign must be +1 or -1");
        const long Li = period_of_slow(term.i);
        const long Lj = period_of_slow(term.j);
        if (term.loc_i < 0 || term.loc_i >= Li || term.loc_j < 0 || term.loc_j >= Lj)
            throw ValidationError("switch location out of range for its fast variables");
        auto key = std::make_tuple(term.i, term.j, term.loc_i, term.loc_j);
        if (!seen.insert(key).second) {
            std::ostringstream msg;
            msg << "duplicate switch location (" << term.loc_i << "," << term.loc_j
                << ") on pair (" << term.i << "," << term.j
                << "): every term on a pair needs a distinct firing point";
            throw ValidationError(msg.str());
        }
    }
}

cplx Phase::value() const {
    static const cplx table[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    return table[((quarter % 4) + 4) % 4];
}

void OntBasisState::validate(const ModelSpec& model) const {
    fast.validate(model.lattice);
    if (slow < 1 || slow > model.n_slow)
        throw ValidationError("slow index out of range");
}

long fast_linear_index(const FastConfig& config, const TorusLattice& lattice) {
    long f = 0;
    for (std::size_t k = 0; k < lattice.periods.size(); ++k)
        f = f * lattice.periods[k] + config.positions[k];
    return f;
}

FastConfig fast_from_linear_index(long f, const TorusLattice& lattice) {
    FastConfig config;
    config.positions.assign(lattice.periods.size(), 0);
    for (std::size_t k = lattice.periods.size(); k-- > 0;) {
        config.positions[k] = f % lattice.periods[k];
        f /= lattice.periods[k];
    }
    return config;
}

long basis_index(const OntBasisState& state, const ModelSpec& model) {
    return (state.slow - 1) * model.fast_count() + fast_linear_index(state.fast, model.lattice);
}

OntBasisState basis_state_from_index(long b, const ModelSpec& model) {
    const long F = model.fast_count();
    OntBasisState state;
    state.slow = static_cast<int>(b / F) + 1;
    state.fast = fast_from_linear_index(b % F, model.lattice);
    return state;
}

}  // namespace fastslow
