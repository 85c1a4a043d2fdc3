//---------------------------------*-C++-*-----------------------------------//
// Copyright 2026 radheat developers.
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file test_solvers.cpp
//---------------------------------------------------------------------------//
#include <algorithm>

#include "radheat/parallel.hpp"
#include "radheat/solvers.hpp"
#include "support.hpp"

using namespace radheat;
using radheat::test::raises;
using radheat::test::rel_err;

namespace
{
Problem ball_problem(double h, Medium medium, BoundarySource g, int n_freq = 32)
{
    Problem p;
    p.domain = ConvexDomain::ball({0, 0, 0}, 1);
    p.medium = std::move(medium);
    p.boundary = std::move(g);
    p.angles = build_angular(6, 12);
    p.spectrum = build_spectral(1, n_freq);
    p.h = h;
    return p;
}

Medium absorbing(AbsorptionProfile a, double s = 0)
{
    Medium m;
    m.absorption = std::move(a);
    m.scattering = AbsorptionProfile(s);
    return m;
}

double max_dev(std::vector<double> const& v, double ref)
{
    double d = 0;
    for (double x : v)
        d = std::max(d, std::fabs(x - ref));
    return d;
}

double max_diff(std::vector<double> const& a, std::vector<double> const& b)
{
    double d = 0;
    for (std::size_t k = 0; k < a.size(); ++k)
        d = std::max(d, std::fabs(a[k] - b[k]));
    return d;
}

AbsorptionProfile tabulated_alpha()
{
    return AbsorptionProfile({0.1, 1, 5, 20}, {2, 1, 0.5, 1.5},
                             AbsorptionProfile::Interp::linear);
}
}  // namespace

TEST_SUITE("solvers")
{
TEST_CASE("mode compatibility")
{
    auto p = ball_problem(0.25, absorbing(tabulated_alpha()), BoundarySource::equilibrium(1));
    CHECK(raises(ErrorCode::config_invalid, [&] { check_mode(p, Mode::grey); }));
    try
    {
        check_mode(p, Mode::grey);
    }
    catch (Error const& e)
    {
        CHECK(std::string(e.what()).find("mode-compatibility") != std::string::npos);
    }
    CHECK_NOTHROW(check_mode(p, Mode::spectral));
    CHECK(raises(ErrorCode::config_invalid, [&] { check_mode(p, Mode::scattering); }));
    auto q = ball_problem(0.25, absorbing(AbsorptionProfile(0.0), 1), BoundarySource::zero());
    CHECK(raises(ErrorCode::config_invalid, [&] { check_mode(q, Mode::combined); }));
    CHECK_NOTHROW(check_mode(q, Mode::scattering));
    CHECK(mode_from_string("combined") == Mode::combined);
    CHECK(raises(ErrorCode::config_invalid, [] { mode_from_string("plasma"); }));
}

TEST_CASE("zero boundary data gives zero fields")
{
    auto p = ball_problem(0.25, absorbing(AbsorptionProfile(1.0)), BoundarySource::zero());
    auto g = solve_grey(p);
    CHECK(g.report.converged);
    CHECK(max_dev(g.T, 0) == 0);
    auto s = solve_spectral(p);
    CHECK(max_dev(s.w, 0) == 0);

    auto q = ball_problem(0.25, absorbing(AbsorptionProfile(0.0), 1), BoundarySource::zero());
    auto sc = solve_scattering(q);
    CHECK(max_dev(sc.mean_intensity, 0) == 0);
}

TEST_CASE("grey equilibrium and conservation")
{
    auto p = ball_problem(0.1, absorbing(AbsorptionProfile(1.0)), BoundarySource::equilibrium(1));
    auto s = solve_grey(p);
    REQUIRE(s.report.converged);
    CHECK(max_dev(s.T, 1) <= 1e-2);
    auto r = conservation_residual(p, s);
    CHECK(max_dev(r, 0) <= 1e-6 * four_pi * stefan_sigma());
    CHECK(s.report.theta < 1);
    // Residual history never increases
    for (std::size_t k = 2; k < s.report.residual_history.size(); ++k)
        CHECK(s.report.residual_history[k] <= s.report.residual_history[k - 1] * (1 + 1e-9) + 1e-12);
}

TEST_CASE("grey solve of a hot beam conserves energy")
{
    auto p = ball_problem(0.2, absorbing(AbsorptionProfile(2.0)),
                          BoundarySource::two_temperature(1.5, 0.5, {0, 0, 1}));
    auto s = solve_grey(p);
    REQUIRE(s.report.converged);
    double wmax = *std::max_element(s.w.begin(), s.w.end());
    CHECK(max_dev(s.residual, 0) <= 10 * p.options.tol * four_pi * wmax);
    CHECK(*std::min_element(s.T.begin(), s.T.end()) > 0.5);
    CHECK(*std::max_element(s.T.begin(), s.T.end()) < 1.5);
}

TEST_CASE("grey map is linear in the boundary data")
{
    auto base = ball_problem(0.2, absorbing(AbsorptionProfile(1.0)), BoundarySource::constant(1));
    auto a = solve_grey(base).w;
    for (double c : {0.5, 2.0, 10.0})
    {
        auto p = base;
        p.boundary = BoundarySource::constant(c);
        auto ac = solve_grey(p).w;
        for (std::size_t m = 0; m < a.size(); ++m)
            CHECK(rel_err(ac[m], c * a[m]) < 1e-10);
    }
}

TEST_CASE("spectral reductions")
{
    auto g = BoundarySource::dipole(1, 0.6, {1, 0, 0});
    auto p = ball_problem(0.2, absorbing(AbsorptionProfile(1.5)), g);
    auto grey = solve_grey(p);
    auto spec = solve_spectral(p);
    REQUIRE(grey.report.converged);
    REQUIRE(spec.report.converged);
    CHECK(max_diff(grey.T, spec.T) < 1e-4);

    auto t = ball_problem(0.2, absorbing(tabulated_alpha()), g);
    auto s1 = solve_spectral(t);
    auto c1 = solve_combined(t);
    REQUIRE(c1.report.converged);
    CHECK(max_diff(s1.T, c1.T) < 1e-4);
    CHECK(s1.report.cap > *std::max_element(s1.w.begin(), s1.w.end()));
}

TEST_CASE("spectral equilibrium")
{
    auto p = ball_problem(0.1, absorbing(tabulated_alpha()), BoundarySource::equilibrium(0.8));
    auto s = solve_spectral(p);
    REQUIRE(s.report.converged);
    CHECK(max_dev(s.T, 0.8) / 0.8 <= 1e-2);
}

TEST_CASE("scattering with constant boundary radiance")
{
    auto p = ball_problem(0.2, absorbing(AbsorptionProfile(0.0), 1), BoundarySource::constant(3), 8);
    auto s = solve_scattering(p);
    REQUIRE(s.report.converged);
    CHECK(max_dev(s.mean_intensity, 3) < 1e-6);
    auto I = reconstruct_radiance(p, s);
    CHECK(max_dev(I.values, 3) < 1e-6);
    for (double ratio : s.report.contraction_estimates)
        CHECK(ratio <= 1 - std::exp(-2.0) + 0.05);
}

TEST_CASE("anisotropic scattering uses sweeps")
{
    auto p = ball_problem(0.25, absorbing(AbsorptionProfile(0.0), 1), BoundarySource::constant(2), 8);
    p.angles = build_angular(4, 8);
    // (1 + 0.5 n.n') / 4 pi is symmetric and exactly normalized on the grid
    std::size_t A = p.angles.size();
    std::vector<double> K(A * A);
    for (std::size_t i = 0; i < A; ++i)
        for (std::size_t ip = 0; ip < A; ++ip)
            K[i * A + ip] = (1 + 0.5 * dot(p.angles.nodes[i], p.angles.nodes[ip])) / four_pi;
    p.medium.kernel = ScatteringKernel::tabulated(p.angles, K);
    CHECK(p.medium.kernel.correction() < 1e-13);
    auto s = solve_scattering(p);
    REQUIRE(s.report.converged);
    CHECK(max_dev(s.radiance.values, 2) < 1e-6);
}

TEST_CASE("combined equilibrium is exact")
{
    auto p = ball_problem(0.2, absorbing(AbsorptionProfile(1.0), 1), BoundarySource::equilibrium(1), 16);
    auto s = solve_combined(p);
    REQUIRE(s.report.converged);
    CHECK(max_dev(s.T, 1) < 1e-6);
    CHECK(s.report.h_integral_max <= s.report.h_bound + 1e-3);
    CHECK(s.report.truncation_bound <= 1e-10);
}

TEST_CASE("H certificate")
{
    Discretization disc(ConvexDomain::ball({0, 0, 0}, 1), 0.2, build_angular(8, 16),
                        build_spectral(1, 8));
    auto iso = ScatteringKernel::isotropic();
    auto pure = compute_H(disc, 1, 0, iso, 1e-10);
    std::size_t centre = disc.space.node_of[disc.space.flat(5, 5, 5)];
    REQUIRE(norm(disc.space.centers[centre]) == 0);
    CHECK(std::fabs(pure.integral[centre] - (1 - std::exp(-1.0))) < 1e-10);

    auto mixed = compute_H(disc, 1, 1, iso, 1e-10);
    double bound = (1 - std::exp(-4.0)) / (1 + std::exp(-4.0));
    CHECK(mixed.bound == doctest::Approx(bound).epsilon(1e-14));
    CHECK(bound == doctest::Approx(0.96403).epsilon(1e-5));
    for (double v : mixed.integral)
        CHECK(v <= bound + 1e-3);
    CHECK(mixed.monotone);
    CHECK(mixed.truncation_bound <= 1e-10);
    int depth = int(std::ceil(std::log(1e-10) / std::log(0.5 * (1 - std::exp(-4.0)))));
    CHECK(mixed.terms <= depth);
    CHECK(h_series_terms(1, 1, 2, 1e-10) == mixed.terms);
}

TEST_CASE("iteration cap reports non-convergence")
{
    auto p = ball_problem(0.2, absorbing(AbsorptionProfile(1.0)), BoundarySource::equilibrium(1));
    p.options.max_iter = 2;
    auto s = solve_grey(p);
    CHECK_FALSE(s.report.converged);
    CHECK(s.report.iterations == 2);
}

TEST_CASE("oracle")
{
    auto p = ball_problem(0.3, absorbing(AbsorptionProfile(0.0), 1), BoundarySource::constant(3), 8);
    p.angles = build_octahedral26();
    auto o = oracle_solve(p, Mode::scattering);
    CHECK(max_dev(o.radiance.values, 3) < 1e-8);

    auto q = ball_problem(0.3, absorbing(AbsorptionProfile(1.0)), BoundarySource::equilibrium(1), 8);
    q.angles = build_octahedral26();
    auto eq = oracle_solve(q, Mode::grey);
    CHECK(max_dev(eq.T, 1) <= 1e-3);

    q.h = 0.1;
    CHECK(raises(ErrorCode::too_large, [&] { oracle_solve(q, Mode::spectral); }));
}

TEST_CASE("results do not depend on the thread count")
{
    auto p = ball_problem(0.1, absorbing(tabulated_alpha()),
                          BoundarySource::two_temperature(1.2, 0.7, {0, 1, 0}), 16);
    set_thread_count(1);
    auto a = solve_spectral(p);
    set_thread_count(3);
    auto b = solve_spectral(p);
    set_thread_count(0);
    CHECK(a.T == b.T);
    CHECK(a.report.iterations == b.report.iterations);
}
}
