#pragma once

#include <Eigen/Dense>

#include <array>
#include <string>
#include <vector>

#include "fastslow/model.hpp"

namespace fastslow {

/// Real-doubled amplitude vector: entries (2k, 2k+1) hold (Re, Im) of
/// complex amplitude k.
using RealDoubledVector = Eigen::VectorXd;

RealDoubledVector to_real_doubled(const Eigen::VectorXcd& v);
Eigen::VectorXcd from_real_doubled(const RealDoubledVector& v);

/// Real-doubled form of a complex matrix: each entry becomes the 2x2 block
/// [[Re,-Im],[Im,Re]] acting on (Re, Im) pairs.
Eigen::MatrixXd real_doubled_matrix(const Eigen::MatrixXcd& m);

/// 4x4 real form of i*sigma_a (or i itself for unit) on the
/// (spinor x c-bit) space, states ordered (Re+, Im+, Re-, Im-).
Eigen::Matrix4d real_switch_generator(Generator a);

/// The complex Pauli matrix sigma_a (identity for unit).
Eigen::Matrix2cd pauli(Generator a);

struct PulseIdentityReport {
    bool passed = true;
    std::vector<std::string> failures;
    double max_half_pulse_error = 0;  // ||exp(i pi sigma/2) - i sigma||
    double max_full_pulse_error = 0;  // ||exp(i pi sigma) + 1||
};

/// Verifies exp(i pi sigma_a / 2) = i sigma_a and exp(i pi sigma_a) = -1
/// for a = 1, 2, 3, to 1e-12.
PulseIdentityReport pulse_identities_check();

/// One of the 48 ontological operations: a permutation of the four
/// (c-bit x two-state) basis states, optionally composed with complex
/// conjugation (sign flip of the Im components).
struct OntologicalOp {
    std::array<int, 4> perm{{0, 1, 2, 3}};  // state k maps to perm[k]
    bool conjugation = false;

    Eigen::Matrix4i matrix() const;
    OntologicalOp compose(const OntologicalOp& other) const;  // this after other
    bool operator==(const OntologicalOp&) const = default;
    bool operator<(const OntologicalOp& o) const {
        return std::tie(perm, conjugation) < std::tie(o.perm, o.conjugation);
    }
};

/// Closure of the 24 basis permutations and conjugation; exactly 48 elements.
std::vector<OntologicalOp> enumerate_ontological_group();

/// Membership test modulo the unphysical per-component sign: true if
/// m * diag(s1,s1,s2,s2) is an ontological operation for some s1, s2 = +-1.
bool group_contains_up_to_component_sign(const std::vector<OntologicalOp>& group,
                                         const Eigen::Matrix4d& m);

}  // namespace fastslow
