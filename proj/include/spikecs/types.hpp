#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace spikecs {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using IntMatrix = Eigen::MatrixXi;
using Index = Eigen::Index;

/// Thrown when a configuration is rejected before any work starts.
/// The CLI maps this to exit code 2.
struct ConfigRefusal : std::runtime_error {
  explicit ConfigRefusal(const std::string& what) : std::runtime_error(what) {}
};

/// Thrown when the LP solver gives up (iteration cap, lost pivot).
struct SolverFailure : std::runtime_error {
  explicit SolverFailure(const std::string& what) : std::runtime_error(what) {}
};

inline constexpr const char* kVersionString = "spikecs 0.1.0";

}  // namespace spikecs
