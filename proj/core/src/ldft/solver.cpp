// SPDX-License-Identifier: Apache-2.0
#include "langsim/ldft/solver.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "langsim/ldft/errors.hpp"

namespace langsim::ldft {

namespace {

constexpr std::size_t no_site = std::numeric_limits<std::size_t>::max();

using NeighbourTable = std::vector<std::array<std::size_t, coordination_number>>;

NeighbourTable build_neighbours(std::size_t rows, std::size_t cols, Boundary boundary) {
    NeighbourTable table(rows * cols);
    bool periodic = boundary == Boundary::periodic;
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < cols; ++c) {
            auto at = [&](std::size_t rr, std::size_t cc) { return rr * cols + cc; };
            auto& nn = table[at(r, c)];
            // up, down, left, right
            nn[0] = r > 0 ? at(r - 1, c) : (periodic ? at(rows - 1, c) : no_site);
            nn[1] = r + 1 < rows ? at(r + 1, c) : (periodic ? at(0, c) : no_site);
            nn[2] = c > 0 ? at(r, c - 1) : (periodic ? at(r, cols - 1) : no_site);
            nn[3] = c + 1 < cols ? at(r, c + 1) : (periodic ? at(r, 0) : no_site);
        }
    }
    return table;
}

double logistic(double x) {
    if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
    double e = std::exp(x);
    return e / (1.0 + e);
}

/// F(rho)_i = eta_i * sigma(beta* (mu/eps + y sum_nn m_j + sum_nn rho_j)).
/// Everything that does not depend on rho is folded into `shift_`.
class SelfConsistentMap {
  public:
    SelfConsistentMap(const PorousMatrix& m, const ThermoConditions& cond, double rh,
                      Boundary boundary)
        : neighbours_(build_neighbours(m.rows(), m.cols(), boundary)),
          beta_(cond.reduced_beta()),
          eta_(m.size()),
          shift_(m.size()) {
        double mu_reduced = chemical_potential(rh, cond) / cond.eps;
        auto cells = m.cells();
        for (std::size_t i = 0; i < m.size(); ++i) {
            eta_[i] = 1.0 - cells[i];
            double wall = 0.0;
            for (std::size_t j : neighbours_[i]) {
                if (j != no_site) wall += cells[j];
            }
            shift_[i] = mu_reduced + cond.wall_affinity * wall;
        }
    }

    /// Writes F(rho) into `out` and returns max_i |out_i - rho_i|.
    double apply(std::span<const double> rho, std::span<double> out) const {
        double residual = 0.0;
        for (std::size_t i = 0; i < rho.size(); ++i) {
            double field = shift_[i];
            for (std::size_t j : neighbours_[i]) {
                if (j != no_site) field += rho[j];
            }
            out[i] = eta_[i] * logistic(beta_ * field);
            residual = std::max(residual, std::abs(out[i] - rho[i]));
        }
        return residual;
    }

    double capacity(std::size_t i) const { return eta_[i]; }

  private:
    NeighbourTable neighbours_;
    double beta_;
    std::vector<double> eta_;
    std::vector<double> shift_;
};

void check_rh(double rh) {
    if (!(rh >= 0.0 && rh <= 100.0)) {
        throw DomainError(fmt::format("relative humidity {}% is outside [0, 100]", rh));
    }
}

}  // namespace

std::string_view to_string(Boundary b) {
    return b == Boundary::periodic ? "periodic" : "closed";
}

Boundary boundary_from_string(std::string_view s) {
    if (s == "periodic") return Boundary::periodic;
    if (s == "closed") return Boundary::closed;
    throw DomainError(fmt::format("unknown boundary '{}' (expected periodic or closed)", s));
}

void ThermoConditions::validate() const {
    if (!(temperature_kelvin > 0.0) || !std::isfinite(temperature_kelvin)) {
        throw DomainError(fmt::format("temperature must be positive, got {} K", temperature_kelvin));
    }
    if (!(eps > 0.0) || !std::isfinite(eps)) throw DomainError("eps must be positive");
    if (!(wall_affinity >= 0.0) || !std::isfinite(wall_affinity)) {
        throw DomainError("wall affinity y must be non-negative");
    }
    if (!(eps_over_kb > 0.0) || !std::isfinite(eps_over_kb)) {
        throw DomainError("eps_over_kB must be positive");
    }
    double beta = reduced_beta();
    if (!std::isfinite(beta) || !(beta > 0.0)) {
        throw DomainError("reduced inverse temperature is not finite");
    }
}

ThermoConditions ThermoConditions::at_reduced_temperature(double t_star) {
    ThermoConditions c;
    c.temperature_kelvin = t_star * c.eps_over_kb;
    return c;
}

void SolverConfig::validate() const {
    if (!(damping > 0.0 && damping <= 1.0)) {
        throw DomainError(fmt::format("damping must lie in (0, 1], got {}", damping));
    }
    if (!(tolerance > 0.0)) throw DomainError("tolerance must be positive");
    if (max_iterations < 1) throw DomainError("max_iterations must be at least 1");
}

double chemical_potential(double rh, const ThermoConditions& cond) {
    if (!(rh > 0.0)) {
        throw DomainError(fmt::format("chemical potential undefined at RH={}%", rh));
    }
    if (rh > 100.0) {
        throw DomainError(fmt::format("relative humidity {}% exceeds saturation", rh));
    }
    double half_coordination = coordination_number / 2.0;
    return -half_coordination * cond.eps + (cond.eps / cond.reduced_beta()) * std::log(rh / 100.0);
}

DensityField solve_density(const PorousMatrix& m, const ThermoConditions& cond, double rh,
                           const DensityField& init, const SolverConfig& cfg) {
    if (!init.same_shape(m)) {
        throw ShapeError(fmt::format("initial field {}x{} does not match matrix {}x{}",
                                     init.rows(), init.cols(), m.rows(), m.cols()));
    }
    if (!m.simulatable()) throw NoPoreError();
    check_rh(rh);
    cond.validate();
    cfg.validate();

    if (rh == 0.0) return DensityField::zeros_like(m);

    SelfConsistentMap map(m, cond, rh, cfg.boundary);

    std::vector<double> rho(init.values().begin(), init.values().end());
    for (std::size_t i = 0; i < rho.size(); ++i) {
        rho[i] = std::clamp(rho[i], 0.0, map.capacity(i));
    }
    std::vector<double> target(rho.size());

    double residual = 0.0;
    double keep = 1.0 - cfg.damping;
    for (std::size_t it = 0; it < cfg.max_iterations; ++it) {
        residual = map.apply(rho, target);
        if (residual <= cfg.tolerance) {
            return DensityField(m.rows(), m.cols(), std::move(rho));
        }
        for (std::size_t i = 0; i < rho.size(); ++i) {
            rho[i] = keep * rho[i] + cfg.damping * target[i];
        }
    }
    residual = map.apply(rho, target);
    if (residual <= cfg.tolerance) return DensityField(m.rows(), m.cols(), std::move(rho));
    throw ConvergenceError(residual, cfg.max_iterations, rh);
}

double fixed_point_residual(const PorousMatrix& m, const ThermoConditions& cond, double rh,
                            const DensityField& field, Boundary boundary) {
    if (!field.same_shape(m)) throw ShapeError("field does not match matrix");
    check_rh(rh);
    if (rh == 0.0) {
        double r = 0.0;
        for (double v : field.values()) r = std::max(r, std::abs(v));
        return r;
    }
    SelfConsistentMap map(m, cond, rh, boundary);
    std::vector<double> target(field.size());
    return map.apply(field.values(), target);
}

double mean_pore_density(const DensityField& field, const PorousMatrix& m) {
    if (!field.same_shape(m)) throw ShapeError("field does not match matrix");
    double capacity = m.total_pore_capacity();
    if (!(capacity > 0.0)) throw NoPoreError();
    double total = 0.0;
    for (double v : field.values()) total += v;
    return total / capacity;
}

}  // namespace langsim::ldft
