// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <random>

#include "../support/oracles.hpp"
#include "langsim/ldft/errors.hpp"
#include "langsim/ldft/sweep.hpp"

using namespace langsim::ldft;

TEST_SUITE("ldft") {

TEST_CASE("porous matrix rejects bad shapes and entries") {
    CHECK_THROWS_AS(PorousMatrix(0, 3, {}), ShapeError);
    CHECK_THROWS_AS(PorousMatrix(2, 2, {0, 0, 0}), ShapeError);
    CHECK_THROWS_AS(PorousMatrix(1, 2, {0, 1.5}), DomainError);
    CHECK_THROWS_AS(PorousMatrix(1, 2, {-0.1, 0}), DomainError);
    CHECK_THROWS_AS(PorousMatrix(1, 2, {std::nan(""), 0}), DomainError);
    PorousMatrix m(2, 2, {1, 0.25, 0, 1});
    CHECK(m.total_pore_capacity() == doctest::Approx(1.75));
    CHECK(m.simulatable());
    CHECK_FALSE(PorousMatrix::filled(3, 3, 1.0).simulatable());
}

TEST_CASE("chemical potential follows the lattice-gas relation") {
    ThermoConditions t;  // 300 K, T* = 0.8
    CHECK(t.reduced_temperature() == doctest::Approx(0.8));
    CHECK(chemical_potential(100.0, t) == doctest::Approx(-2.0).epsilon(1e-15));
    for (double rh : {1.0, 12.5, 50.0, 97.5}) {
        CHECK(chemical_potential(rh, t) == doctest::Approx(oracle::reduced_mu(rh, 0.8)).epsilon(1e-14));
    }
    CHECK_THROWS_AS(chemical_potential(0.0, t), DomainError);
    CHECK_THROWS_AS(chemical_potential(100.5, t), DomainError);
    CHECK_THROWS_AS(ThermoConditions{-1.0}.validate(), DomainError);
}

TEST_CASE("boundary names round-trip") {
    CHECK(boundary_from_string("closed") == Boundary::closed);
    CHECK(boundary_from_string(to_string(Boundary::periodic)) == Boundary::periodic);
    CHECK_THROWS_AS(boundary_from_string("reflective"), DomainError);
}

TEST_CASE("zero humidity is the empty state") {
    auto m = oracle::slit(4, 5);
    auto rho = solve_density(m, {}, 0.0, DensityField::uniform(4, 5, 0.7));
    for (double v : rho.values()) CHECK(v == 0.0);
}

TEST_CASE("solved fields satisfy the reference map and the bounds") {
    std::mt19937 rng(7);
    for (int trial = 0; trial < 6; ++trial) {
        bool continuous = trial % 2 == 1;
        auto m = oracle::random_matrix(rng, 6, 7, 0.35, continuous);
        for (auto b : {Boundary::periodic, Boundary::closed}) {
            SolverConfig cfg;
            cfg.boundary = b;
            for (double rh : {5.0, 60.0, 100.0}) {
                auto rho = solve_density(m, {}, rh, DensityField::zeros_like(m), cfg);
                std::vector<double> v(rho.values().begin(), rho.values().end());
                CHECK(oracle::max_residual(m, v, rh, 0.8, 2.0, b == Boundary::periodic) <= cfg.tolerance);
                CHECK(fixed_point_residual(m, {}, rh, rho, b) <= cfg.tolerance);
                for (std::size_t i = 0; i < m.size(); ++i) {
                    CHECK(rho[i] >= 0.0);
                    CHECK(rho[i] <= m.pore_capacity(i));
                    if (m.cells()[i] == 1.0) CHECK(rho[i] == 0.0);
                }
            }
        }
    }
}

TEST_CASE("single pore matches the isolated-site root") {
    PorousMatrix m(3, 3, {1, 1, 1, 1, 0, 1, 1, 1, 1});
    SolverConfig cfg;
    cfg.boundary = Boundary::closed;
    cfg.tolerance = 1e-13;
    for (double rh : SweepSpec{}.grid()) {
        if (rh == 0.0) continue;
        auto rho = solve_density(m, {}, rh, DensityField::zeros_like(m), cfg);
        CHECK(rho(1, 1) == doctest::Approx(oracle::isolated_site(rh, 0.8, 2.0, 4)).epsilon(1e-11));
    }
}

TEST_CASE("above the critical temperature the fixed point does not depend on the seed") {
    auto m = oracle::slit(6, 8);
    auto hot = ThermoConditions::at_reduced_temperature(1.5);
    for (double rh : {30.0, 70.0, 95.0}) {
        auto from_empty = solve_density(m, hot, rh, DensityField::zeros_like(m));
        auto from_full = solve_density(m, hot, rh, DensityField::uniform(6, 8, 1.0));
        for (std::size_t i = 0; i < m.size(); ++i) CHECK(std::abs(from_empty[i] - from_full[i]) < 1e-7);
    }
}

TEST_CASE("non-convergence is reported with the stalled RH") {
    auto m = oracle::slit(4, 4);
    SolverConfig cfg;
    cfg.max_iterations = 3;
    try {
        compute_isotherm(m, {}, {}, cfg);
        FAIL("expected ConvergenceError");
    } catch (const ConvergenceError& e) {
        REQUIRE(e.rh().has_value());
        CHECK(*e.rh() == 2.5);
        CHECK(e.iterations() == 3);
    }
}

TEST_CASE("solver rejects unusable inputs") {
    CHECK_THROWS_AS(solve_density(PorousMatrix::filled(2, 2, 1.0), {}, 50.0, DensityField::zeros(2, 2)), NoPoreError);
    CHECK_THROWS_AS(solve_density(PorousMatrix::filled(2, 2, 0.0), {}, 50.0, DensityField::zeros(3, 2)), ShapeError);
    CHECK_THROWS_AS(solve_density(PorousMatrix::filled(2, 2, 0.0), {}, 101.0, DensityField::zeros(2, 2)), DomainError);
    SolverConfig bad;
    bad.damping = 0.0;
    CHECK_THROWS_AS(bad.validate(), DomainError);
}

TEST_CASE("sweep grid is index based and keeps the endpoint") {
    auto g = SweepSpec{}.grid();
    REQUIRE(g.size() == 41);
    CHECK(g.front() == 0.0);
    CHECK(g[17] == 42.5);
    CHECK(g.back() == 100.0);
    auto odd = SweepSpec{0.0, 100.0, 30.0}.grid();
    CHECK(odd == std::vector<double>{0, 30, 60, 90, 100});
    CHECK(SweepSpec{0.0, 100.0, 0.1}.grid().size() == 1001);
    CHECK_THROWS_AS(SweepSpec({0.0, 100.0, 0.0}).validate(), DomainError);
    CHECK_THROWS_AS(SweepSpec({50.0, 20.0, 1.0}).validate(), DomainError);
}

TEST_CASE("hysteresis loop bookkeeping") {
    auto m = oracle::slit(6, 10);
    SweepSpec sweep{0.0, 100.0, 10.0};
    auto loop = compute_hysteresis(m, {}, sweep);
    REQUIRE(loop.adsorption.points.size() == 11);
    REQUIRE(loop.desorption.points.size() == 11);
    CHECK(loop.desorption.points.front() == loop.adsorption.points.back());
    CHECK(loop.desorption.points.back().rh == 0.0);
    CHECK(loop.desorption_at(10) == loop.adsorption.points.back().mean_density);

    // Trapezoid area recomputed by hand from the stored branches.
    double area = 0;
    for (std::size_t i = 1; i < 11; ++i) {
        double g0 = loop.desorption_at(i - 1) - loop.adsorption.points[i - 1].mean_density;
        double g1 = loop.desorption_at(i) - loop.adsorption.points[i].mean_density;
        area += 0.5 * (g0 + g1) * 10.0;
    }
    CHECK(loop.area() == doctest::Approx(area));
    CHECK(compute_isotherm(m, {}, sweep) == loop.adsorption);
}

TEST_CASE("desorption branch is the maximal fixed point on a slit") {
    // Seeding every RH from the full field converges to the largest fixed
    // point; the path-followed descending branch must agree with it.
    auto m = oracle::slit(6, 12);
    SweepSpec sweep{0.0, 100.0, 5.0};
    auto loop = compute_hysteresis(m, {}, sweep);
    auto grid = sweep.grid();
    for (std::size_t i = 1; i < grid.size(); ++i) {
        auto top = solve_density(m, {}, grid[i], DensityField::uniform(6, 12, 1.0));
        auto bottom = solve_density(m, {}, grid[i], DensityField::zeros_like(m));
        CHECK(loop.desorption_at(i) == doctest::Approx(mean_pore_density(top, m)).epsilon(1e-6));
        CHECK(loop.adsorption.points[i].mean_density == doctest::Approx(mean_pore_density(bottom, m)).epsilon(1e-6));
    }
}

TEST_CASE("an isolated pore has no hysteresis") {
    PorousMatrix m(3, 3, {1, 1, 1, 1, 0, 1, 1, 1, 1});
    SolverConfig cfg;
    cfg.boundary = Boundary::closed;
    cfg.tolerance = 1e-12;
    auto loop = compute_hysteresis(m, {}, {}, cfg);
    for (std::size_t i = 0; i < loop.adsorption.points.size(); ++i) {
        CHECK(std::abs(loop.desorption_at(i) - loop.adsorption.points[i].mean_density) < 1e-9);
    }
    CHECK(std::abs(loop.area()) < 1e-7);
}

TEST_CASE("identical inputs give bitwise identical curves") {
    std::mt19937 rng(11);
    auto m = oracle::random_matrix(rng, 8, 8, 0.3, true);
    CHECK(compute_hysteresis(m, {}) == compute_hysteresis(m, {}));
}

}
