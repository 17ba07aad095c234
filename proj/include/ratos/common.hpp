#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

namespace ratos {

using Complex = std::complex<double>;
using SparseOperator = Eigen::SparseMatrix<Complex>;

// Envelope speed of light; lengths are measured in c/gamma_ref and times in
// 1/gamma_ref, so this stays 1. Kept symbolic so formulas read like the
// physics.
inline constexpr double kSpeedOfLight = 1.0;

inline constexpr Complex kImag{0.0, 1.0};

/// Thrown when a simulation produces NaN/Inf or violates a numerical gate
/// (CFL condition, norm drift). Distinct from std::invalid_argument so the
/// CLI can map it to its own exit code.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace ratos
