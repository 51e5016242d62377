// SPDX-License-Identifier: Apache-2.0
#include "langsim/ldft/sweep.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>

#include "langsim/ldft/errors.hpp"

namespace langsim::ldft {

void SweepSpec::validate() const {
    if (!(rh_start >= 0.0 && rh_start < rh_end && rh_end <= 100.0)) {
        throw DomainError(fmt::format("sweep requires 0 <= rh_start < rh_end <= 100, got {}..{}",
                                      rh_start, rh_end));
    }
    if (!(d_rh > 0.0) || !std::isfinite(d_rh)) {
        throw DomainError(fmt::format("RH increment must be positive, got {}", d_rh));
    }
}

std::vector<double> SweepSpec::grid() const {
    validate();
    std::vector<double> out;
    // Index-based so the grid does not accumulate rounding; values within a
    // small fraction of a step of rh_end collapse onto the endpoint.
    double slack = 1e-9 * d_rh;
    for (std::size_t k = 0;; ++k) {
        double v = rh_start + static_cast<double>(k) * d_rh;
        if (v >= rh_end - slack) break;
        out.push_back(v);
    }
    out.push_back(rh_end);
    return out;
}

double HysteresisLoop::desorption_at(std::size_t ascending_index) const {
    return desorption.points[desorption.points.size() - 1 - ascending_index].mean_density;
}

double HysteresisLoop::area() const {
    const auto& ads = adsorption.points;
    double total = 0.0;
    for (std::size_t i = 1; i < ads.size(); ++i) {
        double g0 = desorption_at(i - 1) - ads[i - 1].mean_density;
        double g1 = desorption_at(i) - ads[i].mean_density;
        total += 0.5 * (g0 + g1) * (ads[i].rh - ads[i - 1].rh);
    }
    return total;
}

double HysteresisLoop::max_gap() const {
    double gap = 0.0;
    for (std::size_t i = 0; i < adsorption.points.size(); ++i) {
        gap = std::max(gap, std::abs(desorption_at(i) - adsorption.points[i].mean_density));
    }
    return gap;
}

namespace {

/// Solves along `rhs` in order, seeding each point from the previous field.
/// Returns the final field so a following branch can start from it.
DensityField follow_path(const PorousMatrix& m, const ThermoConditions& cond,
                         const std::vector<double>& rhs, DensityField seed,
                         const SolverConfig& cfg, IsothermCurve& curve) {
    for (double rh : rhs) {
        try {
            seed = solve_density(m, cond, rh, seed, cfg);
        } catch (const ConvergenceError& e) {
            throw e.at_rh(rh);
        }
        curve.points.push_back({rh, mean_pore_density(seed, m)});
    }
    return seed;
}

}  // namespace

IsothermCurve compute_isotherm(const PorousMatrix& m, const ThermoConditions& cond,
                               const SweepSpec& sweep, const SolverConfig& cfg) {
    if (!m.simulatable()) throw NoPoreError();
    IsothermCurve curve{Branch::ascending, {}};
    follow_path(m, cond, sweep.grid(), DensityField::zeros_like(m), cfg, curve);
    return curve;
}

HysteresisLoop compute_hysteresis(const PorousMatrix& m, const ThermoConditions& cond,
                                  const SweepSpec& sweep, const SolverConfig& cfg) {
    if (!m.simulatable()) throw NoPoreError();
    auto grid = sweep.grid();
    HysteresisLoop loop;
    loop.adsorption.branch = Branch::ascending;
    loop.desorption.branch = Branch::descending;

    DensityField endpoint =
        follow_path(m, cond, grid, DensityField::zeros_like(m), cfg, loop.adsorption);

    // The saturation point is shared; descend from the adsorbed state.
    loop.desorption.points.push_back(loop.adsorption.points.back());
    std::vector<double> down(grid.rbegin() + 1, grid.rend());
    follow_path(m, cond, down, std::move(endpoint), cfg, loop.desorption);
    return loop;
}

}  // namespace langsim::ldft
