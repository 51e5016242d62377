// SPDX-License-Identifier: Apache-2.0
#include "langsim/ldft/lattice.hpp"

#include <fmt/format.h>

#include <cmath>
#include <numeric>

#include "langsim/ldft/errors.hpp"

namespace langsim::ldft {

ConvergenceError::ConvergenceError(double residual, std::size_t iterations,
                                   std::optional<double> rh)
    : std::runtime_error(
          rh ? fmt::format("no convergence at RH={:g}% after {} iterations (residual {:.3e})",
                           *rh, iterations, residual)
             : fmt::format("no convergence after {} iterations (residual {:.3e})", iterations,
                           residual)),
      residual_(residual),
      iterations_(iterations),
      rh_(rh) {}

ConvergenceError ConvergenceError::at_rh(double rh) const {
    return ConvergenceError(residual_, iterations_, rh);
}

PorousMatrix::PorousMatrix(std::size_t rows, std::size_t cols, std::vector<double> cells)
    : rows_(rows), cols_(cols), cells_(std::move(cells)) {
    if (rows_ == 0 || cols_ == 0) {
        throw ShapeError("porous matrix must have at least one row and one column");
    }
    if (rows_ * cols_ != cells_.size()) {
        throw ShapeError(fmt::format("porous matrix {}x{} needs {} cells, got {}", rows_, cols_,
                                     rows_ * cols_, cells_.size()));
    }
    for (std::size_t i = 0; i < cells_.size(); ++i) {
        double v = cells_[i];
        if (!(v >= 0.0 && v <= 1.0)) {
            throw DomainError(fmt::format("matrix entry {} at ({}, {}) is outside [0, 1]", v,
                                          i / cols_, i % cols_));
        }
    }
}

PorousMatrix PorousMatrix::filled(std::size_t rows, std::size_t cols, double value) {
    return PorousMatrix(rows, cols, std::vector<double>(rows * cols, value));
}

double PorousMatrix::total_pore_capacity() const {
    double total = 0.0;
    for (double m : cells_) total += 1.0 - m;
    return total;
}

DensityField::DensityField(std::size_t rows, std::size_t cols, std::vector<double> values)
    : rows_(rows), cols_(cols), values_(std::move(values)) {
    if (rows_ * cols_ != values_.size() || values_.empty()) {
        throw ShapeError(fmt::format("density field {}x{} needs {} values, got {}", rows_,
                                     cols_, rows_ * cols_, values_.size()));
    }
}

DensityField DensityField::uniform(std::size_t rows, std::size_t cols, double value) {
    return DensityField(rows, cols, std::vector<double>(rows * cols, value));
}

}  // namespace langsim::ldft
