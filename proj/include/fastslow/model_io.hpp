#pragma once

#include <Eigen/Dense>

#include <iosfwd>
#include <optional>
#include <string>

#include "fastslow/ensemble.hpp"
#include "fastslow/model.hpp"

namespace fastslow {

/// Parse failure with file/line context already formatted into the message.
struct ParseError : ValidationError {
    using ValidationError::ValidationError;
};

struct ModelFile {
    ModelSpec model;
    std::optional<ExperimentSpec> experiment;
};

/// Parse the plain-text model format:
///   [model] with n_slow, periods, strict_coprime;
///   repeated [switch] blocks with pair, generator, location, sign;
///   optional [experiment] block with source, slits, screen, t_slit, t_screen.
/// Unknown keys are errors. The parsed model is validated.
ModelFile parse_model(const std::string& path);
ModelFile parse_model(std::istream& in, const std::string& name = "<stream>");

void write_model(std::ostream& out, const ModelFile& file);
void write_model(const std::string& path, const ModelFile& file);

/// Matrix file: first line N, then N rows of N "re,im" tokens.
Eigen::MatrixXcd parse_matrix(const std::string& path);
Eigen::MatrixXcd parse_matrix(std::istream& in, const std::string& name = "<stream>");

void write_matrix(std::ostream& out, const Eigen::MatrixXcd& m);
void write_matrix(const std::string& path, const Eigen::MatrixXcd& m);

/// Shortest round-trippable decimal form of a double.
std::string format_double(double v);

}  // namespace fastslow
