//---------------------------------*-C++-*-----------------------------------//
// Copyright 2026 radheat developers.
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file test_transport.cpp
//---------------------------------------------------------------------------//
#include <algorithm>
#include <random>

#include "radheat/transport.hpp"
#include "support.hpp"

using namespace radheat;
using radheat::test::raises;
using radheat::test::rel_err;

namespace
{
Discretization unit_ball(double h, int n_polar = 8, int n_azimuth = 16)
{
    return Discretization(ConvexDomain::ball({0, 0, 0}, 1),
                          h,
                          build_angular(n_polar, n_azimuth),
                          build_spectral(1, 64));
}
}  // namespace

TEST_SUITE("transport")
{
TEST_CASE("kernel density")
{
    CHECK(kernel_density(1, 1) == doctest::Approx(std::exp(-1.0) / four_pi).epsilon(1e-15));
    CHECK(kernel_density(2, 0.5) == doctest::Approx(2 * std::exp(-1.0) / (four_pi * 0.25)));
    CHECK(kernel_density(0, 1) == 0);
}

TEST_CASE("exponential weights are exact for linear data")
{
    double s = 1.7;
    int K = 9;
    std::vector<double> om(K + 1);
    for (double beta : {0.0, 1e-3, 0.8, 30.0})
    {
        exponential_weights(s, K, beta, om.data());
        // v(xi) = 2 + 3 xi
        double got = 0;
        for (int k = 0; k <= K; ++k)
            got += om[k] * (2 + 3 * (k * s / K));
        double want;
        if (beta == 0)
            want = 2 * s + 1.5 * s * s;
        else
        {
            // int_0^s e^{-beta(s-xi)} (2 + 3 xi) dxi
            long double b = beta;
            long double em = -std::expm1(-b * s);
            want = double(2 * em / b + 3 * (s / b - em / (b * b)));
        }
        CHECK(rel_err(got, want) < 1e-9);
    }
}

TEST_CASE("lattice interpolator")
{
    auto disc = unit_ball(0.2);
    auto const& g = disc.space;
    std::vector<double> v(g.size());
    for (std::size_t m = 0; m < g.size(); ++m)
        v[m] = 1 + g.centers[m].x - 2 * g.centers[m].z;
    auto lat = disc.lattice.extend(v);
    CHECK(lat.size() == g.lattice_size());
    for (std::size_t m = 0; m < g.size(); ++m)
        CHECK(LatticeInterpolator::eval(disc.lattice.stencil(g.centers[m]), lat.data())
              == doctest::Approx(v[m]).epsilon(1e-13));
    // Linear data is reproduced inside cells whose corners are all nodes
    Vec3 p{0.05, -0.13, 0.07};
    CHECK(LatticeInterpolator::eval(disc.lattice.stencil(p), lat.data())
          == doctest::Approx(1 + p.x - 2 * p.z).epsilon(1e-13));
}

TEST_CASE("boundary sources")
{
    Vec3 up{0, 0, 1};
    CHECK(BoundarySource::zero()(up, 1) == 0);
    CHECK(BoundarySource::constant(3)(up, 2) == 3);
    CHECK(BoundarySource::equilibrium(1)(up, 1) == doctest::Approx(planck(1, 1)));
    auto dip = BoundarySource::dipole(1, 0.5, up);
    CHECK(dip(up, 1) == doctest::Approx(1.5 * planck(1, 1)));
    CHECK(dip(-up, 1) == doctest::Approx(0.5 * planck(1, 1)));
    auto two = BoundarySource::two_temperature(2, 1, up);
    CHECK(two(up, 1) == doctest::Approx(planck(1, 2)));
    CHECK(two(-up, 1) == doctest::Approx(planck(1, 1)));
    auto tab = BoundarySource::tabulated({1, 2}, {-1, 1}, {1, 2, 3, 4}, up);
    CHECK(tab(up, 1) == doctest::Approx(2));
    CHECK(tab(Vec3{1, 0, 0}, 1.5) == doctest::Approx(2.5));
    CHECK(raises(ErrorCode::invalid_argument, [] { BoundarySource::constant(-1); }));
}

TEST_CASE("scattering kernels are normalized")
{
    auto ang = build_angular(4, 8);
    auto hg = ScatteringKernel::henyey_greenstein(ang, 0.6);
    for (std::size_t ip = 0; ip < ang.size(); ++ip)
    {
        double s = 0;
        for (std::size_t i = 0; i < ang.size(); ++i)
            s += ang.weights[i] * hg(i, ip);
        CHECK(s == doctest::Approx(1).epsilon(1e-13));
    }
    std::vector<double> vals(ang.size() * ang.size(), 1.1 / four_pi);
    auto tab = ScatteringKernel::tabulated(ang, vals);
    CHECK(tab.correction() == doctest::Approx(0.1 / 1.1));
    CHECK(tab(0, 1) == doctest::Approx(1 / four_pi));
    CHECK(ScatteringKernel::isotropic()(3, 5) == doctest::Approx(1 / four_pi));
}

TEST_CASE("formal solution along a ray")
{
    auto disc = unit_ball(0.2);
    AbsorptionProfile one(1.0);
    std::vector<double> zeros(disc.space.size(), 0.0);
    auto lat0 = disc.lattice.extend(zeros);
    Vec3 x{0.1, 0.2, -0.3};
    Vec3 n = normalized(Vec3{1, 2, 2});
    CHECK(formal_solution_absorption(x, n, 1, lat0, BoundarySource::zero(), one, disc) == 0);

    std::vector<double> T0(disc.space.size(), 1.3);
    auto lat = disc.lattice.extend(T0);
    double I = formal_solution_absorption(
        x, n, 1.0, lat, BoundarySource::equilibrium(1.3), one, disc);
    CHECK(rel_err(I, planck(1, 1.3)) < 1e-8);

    double thin = formal_solution_absorption(
        x, n, 1.0, lat, BoundarySource::constant(2), AbsorptionProfile(0.0), disc);
    CHECK(thin == 2);
}

TEST_CASE("negative divergence of the boundary flux")
{
    auto disc = unit_ball(0.2);
    AbsorptionProfile one(1.0);
    CHECK(neg_div_S({0, 0, 0}, BoundarySource::zero(), one, disc) == 0);
    double v = neg_div_S({0, 0, 0}, BoundarySource::equilibrium(1), one, disc);
    CHECK(rel_err(v, four_pi * stefan_sigma() * std::exp(-1.0)) < 1e-8);
    CHECK(v == doctest::Approx(60.041).epsilon(1e-4));

    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-1, 1);
    for (int k = 0; k < 1000; ++k)
    {
        Vec3 x{u(rng), u(rng), u(rng)};
        if (norm(x) >= 0.999)
            continue;
        auto g = BoundarySource::dipole(0.2 + std::fabs(u(rng)), 0.9 * u(rng),
                                        normalized(Vec3{u(rng), u(rng), 1}));
        CHECK(neg_div_S(x, g, one, disc) > 0);
    }
}

TEST_CASE("grey kernel on a ball")
{
    auto big = ConvexDomain::ball({0, 0, 0}, 5);
    auto grid = build_spatial(big, 0.2);
    std::vector<double> ones(grid.size(), 1.0);
    std::vector<double> zeros(grid.size(), 0.0);
    std::size_t centre = grid.node_of[grid.flat(grid.dims[0] / 2, grid.dims[1] / 2,
                                                grid.dims[2] / 2)];
    CHECK(grid.centers[centre].x == 0);
    CHECK(apply_grey_kernel(zeros, centre, grid) == 0);
    CHECK(std::fabs(apply_grey_kernel(ones, centre, grid) - (1 - std::exp(-5.0))) < 2e-2);

    auto ball = ConvexDomain::ball({0, 0, 0}, 1);
    auto g1 = build_spatial(ball, 0.2);
    std::vector<double> w1(g1.size(), 1.0);
    for (std::size_t m = 0; m < g1.size(); ++m)
        CHECK(apply_grey_kernel(w1, m, g1) < 1);
}

TEST_CASE("spectral kernel reduces to the rescaled grey kernel")
{
    double a0 = 2;
    AbsorptionProfile alpha(a0);
    auto spec = build_spectral(1, 16);
    EmissionMap f(alpha, spec, 100);
    auto small = build_spatial(ConvexDomain::ball({0, 0, 0}, 0.5), 0.125);
    auto scaled = build_spatial(ConvexDomain::ball({0, 0, 0}, 1), 0.25);
    REQUIRE(small.size() == scaled.size());
    std::vector<double> w(small.size());
    for (std::size_t m = 0; m < w.size(); ++m)
        w[m] = f(1 + 0.3 * small.centers[m].x);
    std::vector<double> zeros(w.size(), 0.0);
    for (std::size_t m = 0; m < w.size(); m += 7)
    {
        double got = apply_spectral_kernel(w, m, f, alpha, small);
        CHECK(rel_err(got, apply_grey_kernel(w, m, scaled)) < 1e-6);
        CHECK(apply_spectral_kernel(zeros, m, f, alpha, small) == 0);
    }
    std::vector<double> w0(w.size(), f(1.0));
    for (std::size_t m = 0; m < w.size(); ++m)
        CHECK(apply_spectral_kernel(w0, m, f, alpha, small) < w0[m]);
}

TEST_CASE("lattice convolver matches the direct sum")
{
    auto grid = build_spatial(ConvexDomain::ellipsoid({0, 0, 0}, {1, 0.7, 0.5}), 0.1);
    std::vector<double> u(grid.size());
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> dist(0, 1);
    for (auto& v : u)
        v = dist(rng);
    LatticeConvolver conv(grid);
    std::vector<double> fast(u.size()), slow(u.size());
    for (double beta : {1.0, 3.0})
    {
        conv.apply(beta, u.data(), fast.data());
        LatticeConvolver::apply_direct(grid, beta, u.data(), slow.data());
        double worst = 0;
        for (std::size_t m = 0; m < u.size(); ++m)
            worst = std::max(worst, std::fabs(fast[m] - slow[m]));
        CHECK(worst < 1e-12);
    }
}

TEST_CASE("Peierls kernel row masses")
{
    auto disc = unit_ball(0.1);
    LatticeConvolver conv(disc.space);
    PeierlsKernel mc(conv, disc, 1.0, SelfCellRule::mass_consistent);
    PeierlsKernel eb(conv, disc, 1.0, SelfCellRule::equivalent_ball);
    CHECK(*std::max_element(mc.row_mass().begin(), mc.row_mass().end()) < 1);
    CHECK(*std::max_element(eb.row_mass().begin(), eb.row_mass().end()) < 1);
    CHECK(*std::min_element(mc.self().begin(), mc.self().end()) >= 0);
    for (std::size_t m = 0; m < disc.space.size(); m += 97)
        CHECK(mc.row_mass()[m] == doctest::Approx(1 - mc.escape()[m]).epsilon(1e-12));
    CHECK(equivalent_ball_self(1, std::pow(0.1, 3))
          == doctest::Approx(1 - std::exp(-std::cbrt(3 * 1e-3 / four_pi))));

    // Constant input returns the row mass
    std::vector<double> ones(disc.space.size(), 1.0), out(disc.space.size());
    mc.apply(ones.data(), out.data());
    for (std::size_t m = 0; m < out.size(); m += 101)
        CHECK(out[m] == doctest::Approx(mc.row_mass()[m]).epsilon(1e-12));
}

TEST_CASE("flux moments")
{
    auto ang = build_angular(16, 32);
    SpectralGrid one;
    one.nodes = {1};
    one.weights = {1};
    one.nu_max = 1;
    RadiationField I{1, ang.size(), 1, std::vector<double>(ang.size(), 2.5)};
    CHECK(norm(flux(I, 0, ang, one)) < 1e-10 * 2.5);

    Vec3 e = normalized(Vec3{0.2, -0.5, 1});
    double c0 = 1.7;
    double total = 0;
    for (std::size_t i = 0; i < ang.size(); ++i)
    {
        I(0, i, 0) = c0 * std::max(dot(ang.nodes[i], e), 0.0);
        total += ang.weights[i] * I(0, i, 0);
    }
    Vec3 F = flux(I, 0, ang, one);
    CHECK(norm(F - (2 * pi / 3 * c0) * e) < 1e-6);
    CHECK(norm(F) <= total);
}
}
