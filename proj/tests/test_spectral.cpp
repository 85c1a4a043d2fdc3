//---------------------------------*-C++-*-----------------------------------//
// Copyright 2026 radheat developers.
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file test_spectral.cpp
//---------------------------------------------------------------------------//
#include <random>

#include <gsl/gsl_integration.h>

#include "radheat/quadrature.hpp"
#include "radheat/spectral.hpp"
#include "support.hpp"

using namespace radheat;
using radheat::test::raises;
using radheat::test::rel_err;

namespace
{
double gsl_planck(double nu, void* params)
{
    double T = *static_cast<double*>(params);
    return nu > 0 ? planck(nu, T) : 0;
}

// Adaptive semi-infinite quadrature of B_nu(T)
double planck_total(double T)
{
    gsl_integration_workspace* ws = gsl_integration_workspace_alloc(1000);
    gsl_function fn{&gsl_planck, &T};
    double result = 0;
    double err = 0;
    gsl_integration_qagiu(&fn, 0, 0, 1e-12, 1000, ws, &result, &err);
    gsl_integration_workspace_free(ws);
    return result;
}
}  // namespace

TEST_SUITE("spectral")
{
TEST_CASE("planck values")
{
    CHECK(planck(1, 0) == 0);
    CHECK(rel_err(planck(1, 1), 1.1639534137386528) < 1e-14);
    // Rayleigh-Jeans: B -> 2 nu^2 T
    CHECK(rel_err(planck(1, 1e6), 2e6) < 1e-6);
    CHECK(raises(ErrorCode::non_positive_frequency, [] { planck(0, 1); }));
    CHECK(raises(ErrorCode::non_positive_frequency, [] { planck(-1, 1); }));
}

TEST_CASE("planck temperature derivative")
{
    for (double nu : {0.1, 0.7, 3.0, 10.0})
        for (double T : {0.1, 0.9, 4.0, 10.0})
            CHECK(planck_dT(nu, T) > 0);
    double d = 1e-5;
    double fd = (planck(1, 1 + d) - planck(1, 1 - d)) / (2 * d);
    CHECK(rel_err(planck_dT(1, 1), fd) < 1e-6);
    CHECK(planck_dT(1e3, 1) < 1e-300);
    CHECK(raises(ErrorCode::non_positive_temperature, [] { planck_dT(1, 0); }));
}

TEST_CASE("stefan constant")
{
    CHECK(rel_err(stefan_sigma(), 12.98787880453365829) < 1e-15);
    for (double T : {0.5, 1.0, 2.0})
        CHECK(rel_err(planck_total(T), stefan_sigma() * T * T * T * T) < 1e-8);
}

TEST_CASE("brightness temperature")
{
    for (auto [nu, T] : {std::pair{1.0, 1.0}, {2.0, 0.5}, {0.3, 3.0}})
        CHECK(rel_err(brightness_temperature(nu, planck(nu, T)), T) < 1e-12);
    CHECK(brightness_temperature(1, 0) == 0);
    CHECK(raises(ErrorCode::negative_intensity, [] { brightness_temperature(1, -1); }));

    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0, 5);
    for (int k = 0; k < 1000; ++k)
    {
        double nu = 0.05 + u(rng);
        double a = u(rng);
        double b = u(rng);
        if (a == b)
            continue;
        if (a > b)
            std::swap(a, b);
        CHECK(brightness_temperature(nu, a) < brightness_temperature(nu, b));
    }
}

TEST_CASE("emission integral and inverse")
{
    auto grid = build_spectral(1, 64);
    AbsorptionProfile one(1.0);
    CHECK(emission_integral(one, 0, grid) == 0);
    double w1 = emission_integral(one, 1, grid);
    CHECK(rel_err(w1, stefan_sigma()) < 1e-6);
    CHECK(rel_err(emission_integral(one, 2, grid), 16 * w1) < 1e-6);

    CHECK(invert_emission(one, 0, grid) == 0);
    CHECK(std::fabs(invert_emission(one, emission_integral(one, 1.7, grid), grid) - 1.7) < 1e-9);
    CHECK(std::fabs(invert_emission(one, stefan_sigma(), grid) - 1) < 1e-8);

    SpectralGrid empty;
    CHECK(raises(ErrorCode::empty_grid, [&] { emission_integral(one, 1, empty); }));
}

TEST_CASE("emission map is increasing and capped")
{
    AbsorptionProfile tab({0.1, 1, 5, 20}, {2, 1, 0.5, 1.5}, AbsorptionProfile::Interp::linear);
    auto grid = build_spectral(1, 64);
    EmissionMap f(tab, grid, 4);
    double prev = -1;
    for (double T = 0; T <= 4; T += 0.25)
    {
        double w = f(T);
        CHECK(w > prev);
        prev = w;
        if (T > 0)
        {
            CHECK(f.derivative(T) > 0);
            CHECK(rel_err(f.inverse(w), T) < 1e-10);
        }
    }
    CHECK(raises(ErrorCode::not_bracketable, [&] { f.inverse(2 * f(4)); }));
}

TEST_CASE("absorption profiles")
{
    using I = AbsorptionProfile::Interp;
    AbsorptionProfile lin({1, 3}, {1, 3}, I::linear);
    CHECK(lin(2) == doctest::Approx(2));
    CHECK(lin(0.5) == 1);
    CHECK(lin(10) == 3);
    AbsorptionProfile step({1, 3}, {1, 3}, I::step);
    CHECK(step(2) == 1);
    CHECK(step(3) == 3);
    CHECK(AbsorptionProfile(0.0).is_zero());
    CHECK_FALSE(lin.is_constant());
    CHECK(raises(ErrorCode::invalid_argument, [] { AbsorptionProfile(-1.0); }));
    CHECK(raises(ErrorCode::invalid_argument,
                 [] { AbsorptionProfile({2, 1}, {1, 1}, I::linear); }));
}

TEST_CASE("planck tail bound dominates the tail")
{
    auto grid = build_spectral(1, 64);
    double tail = planck_total(2) - emission_integral(AbsorptionProfile(1.0), 2, grid);
    CHECK(planck_tail_bound(grid.nu_max, 2, 1) >= tail);
}
}
