// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <string_view>

#include "langsim/ldft/lattice.hpp"

namespace langsim::ldft {

/// Nearest-neighbour coordination of the 2D square lattice.
inline constexpr int coordination_number = 4;

enum class Boundary { periodic, closed };

std::string_view to_string(Boundary b);
/// Throws DomainError for anything other than "periodic" or "closed".
Boundary boundary_from_string(std::string_view s);

/// Thermodynamic state of the lattice gas.
///
/// Energies are in units of the fluid-fluid coupling eps; temperature is
/// mapped to reduced units as T* = temperature_kelvin / eps_over_kb. The
/// defaults put 300 K at T* = 0.8, below the mean-field critical point
/// T*_c = 1 of the square lattice.
struct ThermoConditions {
    double temperature_kelvin = 300.0;
    double eps = 1.0;
    double wall_affinity = 2.0;  ///< wall-fluid / fluid-fluid coupling ratio y
    double eps_over_kb = 375.0;

    /// Throws DomainError if any invariant is violated.
    void validate() const;

    double reduced_temperature() const { return temperature_kelvin / eps_over_kb; }
    double reduced_beta() const { return eps_over_kb / temperature_kelvin; }

    /// Conditions at a given reduced temperature, other fields defaulted.
    static ThermoConditions at_reduced_temperature(double t_star);
};

struct SolverConfig {
    double damping = 0.1;
    double tolerance = 1e-8;  ///< on max_i |rho_i - F_i(rho)|
    std::size_t max_iterations = 200000;
    Boundary boundary = Boundary::periodic;

    void validate() const;
};

/// mu = -(c/2) eps + (eps / beta*) ln(rh / 100), rh in percent.
///
/// Throws DomainError for rh <= 0 or rh > 100; the empty state at RH = 0 is
/// handled by solve_density without evaluating the logarithm.
double chemical_potential(double rh, const ThermoConditions& cond);

/// Self-consistent density of the quenched-matrix lattice gas,
///
///   rho_i = eta_i * sigma(beta* (mu/eps + sum_nn rho_j + y sum_nn m_j)),
///
/// solved by damped Picard iteration seeded from `init`. The seed is clamped
/// into [0, eta_i] per pixel first. At rh == 0 the all-zero field is returned
/// without iterating.
///
/// Throws ShapeError, NoPoreError, DomainError (rh outside [0, 100]) and
/// ConvergenceError.
DensityField solve_density(const PorousMatrix& m, const ThermoConditions& cond, double rh,
                           const DensityField& init, const SolverConfig& cfg = {});

/// max_i |rho_i - F_i(rho)| for the self-consistency map at the given state.
/// Zero for any field at rh == 0 that is identically zero.
double fixed_point_residual(const PorousMatrix& m, const ThermoConditions& cond, double rh,
                            const DensityField& field, Boundary boundary);

/// (sum_i rho_i) / (sum_i eta_i). Throws NoPoreError, ShapeError.
double mean_pore_density(const DensityField& field, const PorousMatrix& m);

}  // namespace langsim::ldft
