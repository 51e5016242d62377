// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace langsim::ldft {

/// Argument outside the mathematical domain of an operation (e.g. RH <= 0
/// passed to the chemical potential, or a matrix entry outside [0, 1]).
class DomainError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

class ShapeError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// The porous matrix has no pore capacity at all (every m_i == 1).
class NoPoreError : public std::invalid_argument {
  public:
    NoPoreError() : std::invalid_argument("no pore sites") {}
};

/// Damped Picard iteration hit its iteration cap.
class ConvergenceError : public std::runtime_error {
  public:
    ConvergenceError(double residual, std::size_t iterations,
                     std::optional<double> rh = std::nullopt);

    double residual() const noexcept { return residual_; }
    std::size_t iterations() const noexcept { return iterations_; }
    std::optional<double> rh() const noexcept { return rh_; }

    /// Same failure, annotated with the RH at which the sweep stalled.
    ConvergenceError at_rh(double rh) const;

  private:
    double residual_;
    std::size_t iterations_;
    std::optional<double> rh_;
};

}  // namespace langsim::ldft
