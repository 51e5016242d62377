// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "langsim/ldft/solver.hpp"

namespace langsim::ldft {

/// RH sweep in percent. The grid always ends exactly on rh_end.
struct SweepSpec {
    double rh_start = 0.0;
    double rh_end = 100.0;
    double d_rh = 2.5;

    void validate() const;
    std::vector<double> grid() const;
};

enum class Branch { ascending, descending };

struct CurvePoint {
    double rh;
    double mean_density;

    friend bool operator==(const CurvePoint&, const CurvePoint&) = default;
};

struct IsothermCurve {
    Branch branch = Branch::ascending;
    std::vector<CurvePoint> points;

    friend bool operator==(const IsothermCurve&, const IsothermCurve&) = default;
};

/// Adsorption (ascending RH) and desorption (descending RH) branches over the
/// same grid. The desorption branch is stored in sweep order, high RH first.
struct HysteresisLoop {
    IsothermCurve adsorption;
    IsothermCurve desorption;

    /// Desorption density at the i-th ascending grid point.
    double desorption_at(std::size_t ascending_index) const;
    /// Trapezoidal integral of (rho_des - rho_ads) over RH, in percent units.
    double area() const;
    double max_gap() const;

    friend bool operator==(const HysteresisLoop&, const HysteresisLoop&) = default;
};

/// Path-followed adsorption branch: each RH is seeded with the converged
/// field of the previous one, starting from the empty state.
IsothermCurve compute_isotherm(const PorousMatrix& m, const ThermoConditions& cond,
                               const SweepSpec& sweep = {}, const SolverConfig& cfg = {});

/// Adsorption branch, then the flipped grid seeded from the adsorption
/// endpoint state.
HysteresisLoop compute_hysteresis(const PorousMatrix& m, const ThermoConditions& cond,
                                  const SweepSpec& sweep = {}, const SolverConfig& cfg = {});

}  // namespace langsim::ldft
