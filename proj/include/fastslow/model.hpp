#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace fastslow {

using cplx = std::complex<double>;

/// Raised when a model, state, or file fails structural validation.
struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Raised when a dense-matrix or enumeration budget is exceeded.
struct CapacityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Raised when a numerical identity fails its stated tolerance.
struct ToleranceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class Generator { Sigma1, Sigma2, Sigma3, Unit };

const char* to_string(Generator g);
std::optional<Generator> generator_from_string(std::string_view s);

/// Periodic rings the fast variables live on.
struct TorusLattice {
    std::vector<long> periods;
    bool strict_coprime = true;

    std::size_t size() const { return periods.size(); }
    long total_configs() const;
    void validate() const;
};

/// One position per fast variable, 0 <= x_k < L_k.
struct FastConfig {
    std::vector<long> positions;

    void validate(const TorusLattice& lattice) const;
    bool operator==(const FastConfig&) const = default;
};

/// One classical interaction: when the gating fast variables of slow
/// states i and j sit at (loc_i, loc_j), the pair (i, j) is acted on.
struct SwitchTerm {
    int i = 1;
    int j = 2;
    Generator generator = Generator::Sigma1;
    long loc_i = 0;
    long loc_j = 0;
    int sign = +1;
};

/// Complete classical law: slow-state count, lattice, ordered switch list.
struct ModelSpec {
    int n_slow = 1;
    TorusLattice lattice;
    std::vector<SwitchTerm> switches;

    long fast_count() const { return lattice.total_configs(); }
    long dimension() const { return n_slow * fast_count(); }

    /// Gating fast variable for a slow state (both 1-based). With one fast
    /// variable per slow state this is the identity; with fewer fast
    /// variables the mapping wraps around.
    int fast_index(int slow) const;
    long period_of_slow(int slow) const;

    void validate() const;
};

/// Fourth root of unity carried on a basis state, stored as a power of i.
struct Phase {
    int quarter = 0;  // phase = i^quarter, quarter in 0..3

    cplx value() const;
    Phase times_i_pow(int k) const { return Phase{((quarter + k) % 4 + 4) % 4}; }
    bool operator==(const Phase&) const = default;
};

/// Ontological basis label: fast positions, slow index, c-bit phase.
struct OntBasisState {
    FastConfig fast;
    int slow = 1;  // 1-based
    Phase phase;

    void validate(const ModelSpec& model) const;
};

/// Mixed-radix linear index of a fast configuration (first coordinate slowest).
long fast_linear_index(const FastConfig& config, const TorusLattice& lattice);
FastConfig fast_from_linear_index(long f, const TorusLattice& lattice);

/// Index into the D = N * prod(L) basis: (slow-1)*F + f.
long basis_index(const OntBasisState& state, const ModelSpec& model);
OntBasisState basis_state_from_index(long b, const ModelSpec& model);

}  // namespace fastslow
