//---------------------------------*-C++-*-----------------------------------//
// Copyright 2026 radheat developers.
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file test_entropy.cpp
//---------------------------------------------------------------------------//
#include <cmath>
#include <limits>
#include <random>

#include "radheat/entropy.hpp"
#include "support.hpp"

using namespace radheat;
using radheat::test::raises;
using radheat::test::rel_err;

namespace
{
BoundaryRadiance uniform_radiance(double T)
{
    BoundaryRadiance b;
    b.surface = build_surface(ConvexDomain::ball({0, 0, 0}, 1), 8, 16);
    b.angles = build_angular(8, 16);
    b.spectrum = build_spectral(1, 32);
    std::size_t P = b.surface.size(), A = b.angles.size(), F = b.spectrum.size();
    b.values.resize(P * A * F);
    for (std::size_t k = 0; k < P; ++k)
        for (std::size_t i = 0; i < A; ++i)
            for (std::size_t j = 0; j < F; ++j)
                b.values[(k * A + i) * F + j] = T > 0 ? planck(b.spectrum.nodes[j], T) : 0;
    return b;
}
}  // namespace

TEST_SUITE("entropy")
{
TEST_CASE("entropy density")
{
    CHECK(entropy_density(1, 0) == 0);
    CHECK(raises(ErrorCode::negative_intensity, [] { entropy_density(1, -1e-3); }));
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(0, 1);
    for (int k = 0; k < 1000; ++k)
    {
        double nu = 0.01 + 10 * u(rng);
        double I1 = 5 * u(rng);
        double I2 = 5 * u(rng);
        if (I1 > 0)
            CHECK(entropy_density(nu, I1) > 0);
        double mid = entropy_density(nu, 0.5 * (I1 + I2));
        CHECK(mid >= 0.5 * (entropy_density(nu, I1) + entropy_density(nu, I2)) - 1e-13);
    }
    // u = 1: 2 nu^2 (2 log 2)
    CHECK(rel_err(entropy_density(1, 2), 4 * std::log(2.0)) < 1e-14);
}

TEST_CASE("production density")
{
    CHECK(production_density(1, 1, planck(1, 1), 1) == doctest::Approx(0).scale(1));
    CHECK(std::fabs(production_density(1, 1, planck(1, 1), 1)) < 1e-15);
    double want = -0.5 * (planck(1, 1) - planck(1, 2));
    double got = production_density(1, 1, planck(1, 2), 1);
    CHECK(want > 0);
    CHECK(rel_err(got, want) < 1e-12);
    CHECK(production_density(1, 0, 1, 1) == std::numeric_limits<double>::infinity());
    CHECK(production_density(1, 1, 0, 1) == std::numeric_limits<double>::infinity());
    CHECK(production_density(1, 0, 0, 1) == 0);
    CHECK(production_density(1, 2, 0.3, 0) == 0);

    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(0, 1);
    double worst = 0;
    for (int k = 0; k < 10000; ++k)
    {
        double nu = 1e-3 + 20 * u(rng);
        double T = 1e-3 + 5 * u(rng);
        double I = 10 * u(rng) * planck(nu, 1e-3 + 5 * u(rng));
        worst = std::min(worst, production_density(nu, T, I, 1));
    }
    CHECK(worst >= -1e-15);
}

TEST_CASE("surface quadrature")
{
    auto s = build_surface(ConvexDomain::ball({0, 0, 0}, 2), 16, 32);
    double area = 0;
    for (double a : s.areas)
        area += a;
    CHECK(rel_err(area, 16 * pi) < 1e-12);
    auto e = build_surface(ConvexDomain::ellipsoid({0, 0, 0}, {2, 1, 1}), 32, 32);
    double ea = 0;
    for (double a : e.areas)
        ea += a;
    // prolate spheroid: 2 pi b^2 (1 + a/(b e) asin e)
    double ecc = std::sqrt(1 - 0.25);
    CHECK(rel_err(ea, 2 * pi * (1 + 2 / ecc * std::asin(ecc))) < 1e-6);
    for (std::size_t k = 0; k < e.size(); ++k)
        CHECK(std::fabs(norm(e.normals[k]) - 1) < 1e-14);
}

TEST_CASE("boundary flows of simple fields")
{
    auto zero = boundary_flows(uniform_radiance(0));
    CHECK(zero.phi_in == 0);
    CHECK(zero.phi_out == 0);
    CHECK(zero.i_in == 0);
    CHECK(zero.i_out == 0);

    auto eq = boundary_flows(uniform_radiance(1));
    CHECK(eq.phi_out > 0);
    CHECK(eq.phi_in < 0);
    CHECK(rel_err(eq.phi_out, -eq.phi_in) < 1e-12);
    CHECK(rel_err(eq.i_out, -eq.i_in) < 1e-12);
    // pi sigma T^4 |dOmega|, up to the hemisphere quadrature error
    CHECK(rel_err(eq.i_out, pi * stefan_sigma() * four_pi) < 5e-3);
}

TEST_CASE("maximum entropy probe")
{
    auto ang = build_angular(8, 16);
    auto spec = build_spectral(1, 32);
    auto same = max_entropy_probe(ang, spec, 10, 1, 5, 4, 0.0);
    CHECK_FALSE(same.constant_wins);
    for (double d : same.deficits)
        CHECK(std::fabs(d) <= 1e-12 * same.phi_constant);

    auto r = max_entropy_probe(ang, spec, 10, 1, 100, 4, 0.1);
    CHECK(r.constant_wins);
    CHECK(r.margin > 0);
    CHECK(r.deficits.size() == 100);

    // Deficit is second order in the amplitude
    double d1 = 0, d2 = 0;
    for (double d : max_entropy_probe(ang, spec, 10, 1, 20, 9, 0.02).deficits)
        d1 += d;
    for (double d : max_entropy_probe(ang, spec, 10, 1, 20, 9, 0.01).deficits)
        d2 += d;
    double slope = std::log(d1 / d2) / std::log(2.0);
    CHECK(std::fabs(slope - 2) <= 0.2);

    CHECK(raises(ErrorCode::invalid_argument, [&] { max_entropy_probe(ang, spec, 0, 1, 3, 1); }));
}

TEST_CASE("entropy report of an equilibrium solve")
{
    Problem p;
    p.medium.absorption = AbsorptionProfile(1.0);
    p.boundary = BoundarySource::equilibrium(1);
    p.angles = build_angular(6, 12);
    p.spectrum = build_spectral(1, 32);
    p.h = 0.2;
    auto s = solve(p, Mode::grey);
    EntropyOptions opt;
    opt.surface_polar = 8;
    opt.surface_azimuth = 16;
    auto r = entropy_report(p, s, opt);
    double scale = four_pi * stefan_sigma() * p.domain.volume();
    CHECK(std::fabs(r.production_volume_integral) <= 1e-8 * scale);
    CHECK(std::fabs(r.phi_out + r.phi_in) <= 1e-6 * r.phi_out);
    CHECK(std::fabs(r.energy_defect) <= 1e-6 * r.i_out);
}

TEST_CASE("entropy report of a two-sided beam")
{
    Problem p;
    p.medium.absorption = AbsorptionProfile(1.0);
    p.boundary = BoundarySource::two_temperature(2, 0.5, {0, 0, 1});
    p.angles = build_angular(6, 12);
    p.spectrum = build_spectral(1, 32);
    p.h = 0.2;
    auto s = solve(p, Mode::spectral);
    EntropyOptions opt;
    opt.surface_polar = 8;
    opt.surface_azimuth = 16;
    auto r = entropy_report(p, s, opt);
    CHECK(r.phi_out + r.phi_in > 0);
    CHECK(r.production_volume_integral > 0);
    CHECK(r.min_pointwise_production >= -1e-15);
}
}
