// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace langsim::ldft {

/// Solid-occupancy grid of a 2D porous medium, row-major.
///
/// Each cell holds m_i in [0, 1]: 0 is open pore, 1 is solid. The pore
/// capacity of a cell is eta_i = 1 - m_i, so continuous entries describe
/// partially filled pixels that both exclude volume and attract fluid.
class PorousMatrix {
  public:
    /// Throws ShapeError on a size mismatch or an empty grid and DomainError
    /// on an entry outside [0, 1].
    PorousMatrix(std::size_t rows, std::size_t cols, std::vector<double> cells);

    static PorousMatrix filled(std::size_t rows, std::size_t cols, double value);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    std::size_t size() const noexcept { return cells_.size(); }

    double operator()(std::size_t r, std::size_t c) const { return cells_[r * cols_ + c]; }
    std::span<const double> cells() const noexcept { return cells_; }

    double pore_capacity(std::size_t i) const { return 1.0 - cells_[i]; }
    double total_pore_capacity() const;
    bool simulatable() const { return total_pore_capacity() > 0.0; }

    friend bool operator==(const PorousMatrix&, const PorousMatrix&) = default;

  private:
    std::size_t rows_;
    std::size_t cols_;
    std::vector<double> cells_;
};

/// Fluid density rho_i per pixel, same layout as its PorousMatrix.
class DensityField {
  public:
    DensityField(std::size_t rows, std::size_t cols, std::vector<double> values);

    static DensityField uniform(std::size_t rows, std::size_t cols, double value);
    static DensityField zeros(std::size_t rows, std::size_t cols) { return uniform(rows, cols, 0.0); }
    static DensityField zeros_like(const PorousMatrix& m) { return zeros(m.rows(), m.cols()); }

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    std::size_t size() const noexcept { return values_.size(); }

    double operator()(std::size_t r, std::size_t c) const { return values_[r * cols_ + c]; }
    double operator[](std::size_t i) const { return values_[i]; }
    std::span<const double> values() const noexcept { return values_; }
    std::span<double> values() noexcept { return values_; }

    bool same_shape(const PorousMatrix& m) const { return rows_ == m.rows() && cols_ == m.cols(); }

    friend bool operator==(const DensityField&, const DensityField&) = default;

  private:
    std::size_t rows_;
    std::size_t cols_;
    std::vector<double> values_;
};

}  // namespace langsim::ldft
