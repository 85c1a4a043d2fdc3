//---------------------------------*-C++-*-----------------------------------//
// Copyright 2026 radheat developers.
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file commands.cpp
//---------------------------------------------------------------------------//
#include "radheat/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <random>

#include <gsl/gsl_errno.h>
#include <gsl/gsl_integration.h>

#include "radheat/parallel.hpp"

namespace radheat
{
namespace
{
using nlohmann::json;

//---------------------------------------------------------------------------//
class Printer
{
  public:
    explicit Printer(bool quiet) : quiet_(quiet) {}

    template<class... Args>
    void operator()(char const* fmt, Args... args) const
    {
        if (quiet_)
            return;
        std::printf(fmt, args...);
        std::printf("\n");
    }

  private:
    bool quiet_;
};

void report_error(Error const& e)
{
    std::fprintf(stderr, "error: %s\n", e.what());
}

//! Run a command body, mapping exceptions to exit codes
template<class F>
int guarded(F&& body)
{
    try
    {
        return body();
    }
    catch (Error const& e)
    {
        report_error(e);
        return exit_code(e.code());
    }
    catch (nlohmann::json::exception const& e)
    {
        std::fprintf(stderr, "error: ConfigInvalid: %s\n", e.what());
        return exit_config;
    }
    catch (std::exception const& e)
    {
        std::fprintf(stderr, "error: Internal: %s\n", e.what());
        return exit_invariant;
    }
}

RunConfig configure(std::string const& path, CommandOptions const& opt)
{
    RunConfig c = load_config(path);
    if (opt.threads)
        c.threads = *opt.threads;
    if (opt.output)
        c.output.directory = *opt.output;
    if (opt.seed)
        c.seed = *opt.seed;
    set_thread_count(c.threads);
    return c;
}

std::string prepare_directory(std::string const& dir)
{
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec)
        fail(ErrorCode::io, dir + ": cannot create directory: " + ec.message());
    return dir;
}

struct Range
{
    double lo{0}, hi{0}, mean{0};
};

Range range_of(std::vector<double> const& v)
{
    Range r;
    if (v.empty())
        return r;
    auto [lo, hi] = std::minmax_element(v.begin(), v.end());
    r.lo = *lo;
    r.hi = *hi;
    r.mean = pairwise_sum(v.data(), v.size()) / double(v.size());
    return r;
}

json range_json(Range const& r)
{
    return {{"min", r.lo}, {"max", r.hi}, {"mean", r.mean}};
}

}  // namespace

//---------------------------------------------------------------------------//
int exit_code(ErrorCode code)
{
    switch (code)
    {
        case ErrorCode::max_iter_exceeded:
        case ErrorCode::inner_diverged:
            return exit_not_converged;
        case ErrorCode::negative_source:
        case ErrorCode::cap_exceeded:
        case ErrorCode::invariant_violation:
        case ErrorCode::not_bracketable:
        case ErrorCode::inversion_failure:
            return exit_invariant;
        default:
            return exit_config;
    }
}

//---------------------------------------------------------------------------//
// SOLVE
//---------------------------------------------------------------------------//
int cmd_solve(std::string const& config_path, CommandOptions const& opt)
{
    return guarded([&] {
        Printer say(opt.quiet);
        RunConfig c = configure(config_path, opt);
        Problem p = build_problem(c);
        say("solving %s problem: %s", to_string(c.mode), config_path.c_str());
        Solution s = solve(p, c.mode);
        auto const& rep = s.report;
        say("  nodes %zu, directions %zu, frequencies %zu",
            s.disc->space.size(),
            s.disc->angles.size(),
            s.disc->spectrum.size());
        say("  %s after %d iterations, final residual %.3e, conservation %.3e",
            rep.converged ? "converged" : "NOT converged",
            rep.iterations,
            rep.residual_history.empty() ? 0.0 : rep.residual_history.back(),
            rep.conservation_norm);

        bool want_radiance = c.output.field_dump && c.output.radiation_field;
        if (want_radiance && s.radiance.values.empty())
            s.radiance = reconstruct_radiance(p, s);

        json resolved = to_json(c);
        json report = {{"command", "solve"},
                       {"status", rep.converged ? "converged" : "not_converged"},
                       {"mode", to_string(c.mode)},
                       {"solver", to_json(rep)},
                       {"temperature", range_json(range_of(s.T))},
                       {"w", range_json(range_of(s.w))},
                       {"threads", thread_count()},
                       {"seed", c.seed},
                       {"config", resolved}};
        if (!s.mean_intensity.empty())
            report["mean_intensity"] = range_json(range_of(s.mean_intensity));
        if (c.entropy_enabled && rep.converged)
        {
            auto er = entropy_report(p, s, c.entropy);
            report["entropy"] = to_json(er);
            say("  entropy: production %.6e, phi_out %.6e, phi_in %.6e",
                er.production_volume_integral,
                er.phi_out,
                er.phi_in);
        }

        auto dir = prepare_directory(c.output.directory);
        if (c.output.node_table)
            write_node_table(dir + "/nodes.csv", s);
        if (c.output.field_dump)
        {
            bool with_radiance = want_radiance || !s.radiance.values.empty();
            write_field_dump(dir + "/fields.bin", make_dump(s, resolved, with_radiance));
        }
        if (c.output.report)
            write_json(dir + "/report.json", report);
        auto T = range_of(s.T);
        say("  T in [%.10g, %.10g]; outputs in %s", T.lo, T.hi, dir.c_str());
        return rep.converged ? int(exit_success) : int(exit_not_converged);
    });
}

//---------------------------------------------------------------------------//
// VALIDATE
//---------------------------------------------------------------------------//
namespace
{
double planck_integrand(double nu, void* params)
{
    return planck(nu, *static_cast<double*>(params));
}

double planck_integral(double T)
{
    gsl_set_error_handler_off();
    gsl_integration_workspace* ws = gsl_integration_workspace_alloc(1000);
    gsl_function f{&planck_integrand, &T};
    double result = 0, err = 0;
    gsl_integration_qagiu(&f, 0, 0, 1e-13, 1000, ws, &result, &err);
    gsl_integration_workspace_free(ws);
    return result;
}

//! alpha int_{|x| < R} e^{-alpha r} / (4 pi r^2) dV through kernel_density
double ball_kernel_mass(double alpha, double R)
{
    int panels = 32;
    std::vector<double> x, w;
    double sum = 0;
    for (int k = 0; k < panels; ++k)
    {
        gauss_legendre(16, R * k / panels, R * (k + 1) / panels, x, w);
        for (std::size_t i = 0; i < x.size(); ++i)
            sum += w[i] * four_pi * x[i] * x[i] * kernel_density(alpha, x[i]);
    }
    return sum;
}

CheckResult check(std::string name, double measured, double tol, std::string detail = {})
{
    return {std::move(name), measured <= tol, measured, tol, std::move(detail)};
}

std::string fmt(char const* f, double a, double b)
{
    char buf[128];
    std::snprintf(buf, sizeof(buf), f, a, b);
    return buf;
}

void sphere_moment_checks(std::string const& label,
                          AngularGrid const& g,
                          std::vector<CheckResult>& out)
{
    double m0 = 0, m1 = 0, m2 = 0;
    Vec3 first{0, 0, 0};
    double second[3][3] = {};
    for (std::size_t i = 0; i < g.size(); ++i)
    {
        m0 += g.weights[i];
        first += g.weights[i] * g.nodes[i];
        for (int a = 0; a < 3; ++a)
        {
            for (int b = 0; b < 3; ++b)
                second[a][b] += g.weights[i] * g.nodes[i][a] * g.nodes[i][b];
        }
    }
    m1 = norm(first);
    for (int a = 0; a < 3; ++a)
    {
        for (int b = 0; b < 3; ++b)
            m2 = std::max(m2, std::fabs(second[a][b] - (a == b ? four_pi / 3 : 0)));
    }
    out.push_back(check("sphere_moments[" + label + "]",
                        std::max({std::fabs(m0 - four_pi), m1, m2}),
                        1e-12,
                        fmt("sum w = %.15g, |sum w n| = %.3e", m0, m1)));
}

}  // namespace

std::vector<CheckResult> validation_suite(std::uint64_t seed)
{
    std::vector<CheckResult> out;

    for (double T : {0.5, 1.0, 2.0})
    {
        double exact = stefan_sigma() * T * T * T * T;
        double got = planck_integral(T);
        char name[64];
        std::snprintf(name, sizeof(name), "stefan_boltzmann[T=%g]", T);
        out.push_back(check(name,
                            std::fabs(got - exact) / exact,
                            1e-8,
                            fmt("integral %.15g vs 2 pi^4/15 T^4 = %.15g", got, exact)));
    }

    for (auto [alpha, R] : {std::pair{1.0, 5.0}, std::pair{2.0, 3.0}})
    {
        double exact = -std::expm1(-alpha * R);
        double got = ball_kernel_mass(alpha, R);
        char name[64];
        std::snprintf(name, sizeof(name), "kernel_normalization[alpha=%g,R=%g]", alpha, R);
        out.push_back(check(name,
                            std::fabs(got - exact),
                            1e-4,
                            fmt("measured %.12g vs 1 - e^{-alpha R} = %.12g", got, exact)));
    }

    auto ball = ConvexDomain::ball({0, 0, 0}, 1);
    for (double h : {0.1, 0.05})
    {
        Discretization disc(ball, h, build_angular(8, 16), build_spectral(1, 8));
        LatticeConvolver conv(disc.space);
        PeierlsKernel mc(conv, disc, 1.0, SelfCellRule::mass_consistent);
        PeierlsKernel eb(conv, disc, 1.0, SelfCellRule::equivalent_ball);
        double mass_mc = *std::max_element(mc.row_mass().begin(), mc.row_mass().end());
        double mass_eb = *std::max_element(eb.row_mass().begin(), eb.row_mass().end());
        double self_min = *std::min_element(mc.self().begin(), mc.self().end());
        char name[64];
        std::snprintf(name, sizeof(name), "grey_row_mass[h=%g]", h);
        // Strict bound: report the margin 1 - max mass, which must be positive
        CheckResult r;
        r.name = name;
        r.measured = std::max(mass_mc, mass_eb);
        r.tolerance = 1;
        r.pass = mass_mc < 1 && mass_eb < 1 && self_min >= 0;
        r.detail = fmt("max row mass %.10f (lattice sum + ball self %.10f)", mass_mc, mass_eb);
        out.push_back(r);
    }

    sphere_moment_checks("product 8x16", build_angular(8, 16), out);
    sphere_moment_checks("octahedral 26", build_octahedral26(), out);

    {
        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> u(-1, 1);
        double worst = 0;
        double eps = 1e-6;
        for (int k = 0; k < 1000; ++k)
        {
            Vec3 x;
            do
            {
                x = {u(rng), u(rng), u(rng)};
            } while (norm(x) > 0.99);
            Vec3 n;
            do
            {
                n = {u(rng), u(rng), u(rng)};
            } while (norm(n) > 1 || norm(n) < 0.1);
            n = normalized(n);
            double sp = ball.backward_exit(x + eps * n, n).path_length;
            double sm = ball.backward_exit(x - eps * n, n).path_length;
            worst = std::max(worst, std::fabs((sp - sm) / (2 * eps) - 1));
        }
        out.push_back(check("ray_identity[n.grad s = 1]", worst, 1e-4,
                            fmt("max deviation %.3e over %g points", worst, 1000)));
    }

    {
        Discretization disc(ball, 0.2, build_angular(4, 8), build_spectral(1, 8));
        auto iso = ScatteringKernel::isotropic();
        auto H = compute_H(disc, 1, 1, iso, 1e-10);
        double hmax = *std::max_element(H.integral.begin(), H.integral.end());
        auto r = check("h_bound[a=s=1, unit ball]",
                       hmax - H.bound,
                       1e-3,
                       fmt("max int H dn = %.8f, bound %.8f", hmax, H.bound));
        r.pass = r.pass && H.truncation_bound <= 1e-10 && H.monotone;
        out.push_back(r);

        auto H0 = compute_H(disc, 1, 0, iso, 1e-10);
        std::size_t centre = 0;
        for (std::size_t m = 1; m < disc.space.size(); ++m)
        {
            if (norm(disc.space.centers[m]) < norm(disc.space.centers[centre]))
                centre = m;
        }
        double exact = -std::expm1(-1.0);
        out.push_back(check("h_transparent_center[a=1, s=0]",
                            std::fabs(H0.integral[centre] - exact),
                            1e-10,
                            fmt("int H dn = %.12f vs 1 - 1/e = %.12f", H0.integral[centre], exact)));
    }
    return out;
}

int cmd_validate(CommandOptions const& opt)
{
    return guarded([&] {
        Printer say(opt.quiet);
        if (opt.threads)
            set_thread_count(*opt.threads);
        auto checks = validation_suite(opt.seed.value_or(0));
        bool all = true;
        json list = json::array();
        for (auto const& c : checks)
        {
            all = all && c.pass;
            say("%s  %-36s measured %.6e  tol %.1e  %s",
                c.pass ? "PASS" : "FAIL",
                c.name.c_str(),
                c.measured,
                c.tolerance,
                c.detail.c_str());
            list.push_back({{"name", c.name},
                            {"pass", c.pass},
                            {"measured", c.measured},
                            {"tolerance", c.tolerance},
                            {"detail", c.detail}});
        }
        if (opt.output)
        {
            auto dir = prepare_directory(*opt.output);
            write_json(dir + "/validate.json",
                       {{"command", "validate"}, {"pass", all}, {"checks", list}});
        }
        say("%s", all ? "all identities pass" : "identity suite FAILED");
        return all ? int(exit_success) : int(exit_invariant);
    });
}

//---------------------------------------------------------------------------//
// ORACLE
//---------------------------------------------------------------------------//
int cmd_oracle(std::string const& config_path, CommandOptions const& opt)
{
    return guarded([&] {
        Printer say(opt.quiet);
        RunConfig c = configure(config_path, opt);
        Problem p = build_problem(c);
        say("oracle comparison, %s mode: %s", to_string(c.mode), config_path.c_str());
        Solution s = solve(p, c.mode);
        if (!s.report.converged)
        {
            std::fprintf(stderr, "error: MaxIterExceeded: production solver did not converge\n");
            return int(exit_not_converged);
        }
        auto o = oracle_solve(p, c.mode, c.oracle.iteration_tolerance, c.oracle.max_iter);
        double scale = 0;
        for (double t : o.T)
            scale = std::max(scale, std::fabs(t));
        double dmax = 0, dsum = 0;
        for (std::size_t m = 0; m < o.T.size(); ++m)
        {
            double d = std::fabs(s.T[m] - o.T[m]);
            dmax = std::max(dmax, d);
            dsum += d;
        }
        double rel_max = scale > 0 ? dmax / scale : dmax;
        double rel_mean = (scale > 0 ? dsum / scale : dsum) / double(std::max<std::size_t>(1, o.T.size()));
        bool pass = rel_max <= c.oracle.tolerance;
        say("  nodes %zu, oracle iterations %d", o.T.size(), o.iterations);
        say("  max |T - T_oracle| / max T_oracle = %.6e (tolerance %.1e)", rel_max, c.oracle.tolerance);
        say("  mean deviation %.6e", rel_mean);
        if (!pass)
        {
            std::fprintf(stderr,
                         "oracle deviation %.6e exceeds tolerance %.1e\n",
                         rel_max,
                         c.oracle.tolerance);
        }
        auto dir = prepare_directory(c.output.directory);
        write_json(dir + "/oracle.json",
                   {{"command", "oracle"},
                    {"pass", pass},
                    {"max_relative_deviation", rel_max},
                    {"mean_relative_deviation", rel_mean},
                    {"tolerance", c.oracle.tolerance},
                    {"oracle_iterations", o.iterations},
                    {"solver", to_json(s.report)},
                    {"config", to_json(c)}});
        return pass ? int(exit_success) : int(exit_invariant);
    });
}

//---------------------------------------------------------------------------//
// ENTROPY
//---------------------------------------------------------------------------//
Solution load_solution(FieldDump const& d, Problem const& p)
{
    Solution s;
    s.mode = d.mode;
    auto disc = std::make_shared<Discretization>(p.domain, p.h, p.angles, p.spectrum, p.ray_h);
    if (disc->space.size() != d.n_nodes || disc->angles.size() != d.n_dirs
        || disc->spectrum.size() != d.n_freq)
    {
        fail(ErrorCode::artifact_unreadable,
             "field dump grids do not match its embedded configuration");
    }
    for (std::size_t m = 0; m < d.n_nodes; ++m)
    {
        auto const& c = disc->space.centers[m];
        if (c.x != d.centers[3 * m] || c.y != d.centers[3 * m + 1] || c.z != d.centers[3 * m + 2])
            fail(ErrorCode::artifact_unreadable, "node coordinates do not match the grid");
    }
    s.disc = disc;
    s.T = d.T;
    s.w = d.w;
    s.residual = d.residual;
    s.mean_intensity = d.mean_intensity;
    if (!d.radiance.empty())
    {
        s.radiance.n_nodes = d.n_nodes;
        s.radiance.n_dirs = d.n_dirs;
        s.radiance.n_freq = d.n_freq;
        s.radiance.values = d.radiance;
    }
    s.report.converged = true;
    return s;
}

int cmd_entropy(std::string const& artifact_path, CommandOptions const& opt)
{
    return guarded([&] {
        Printer say(opt.quiet);
        if (opt.threads)
            set_thread_count(*opt.threads);
        FieldDump d = read_field_dump(artifact_path);
        RunConfig c;
        try
        {
            c = parse_config(d.config);
        }
        catch (Error const& e)
        {
            fail(ErrorCode::artifact_unreadable,
                 std::string("embedded config rejected: ") + e.what());
        }
        Problem p = build_problem(c);
        Solution s = load_solution(d, p);
        auto er = entropy_report(p, s, c.entropy);
        say("entropy of %s solution: %s", to_string(s.mode), artifact_path.c_str());
        say("  phi_out  (outgoing entropy)      %.10e", er.phi_out);
        say("  phi_in   (incoming, signed)      %.10e", er.phi_in);
        say("  i_out    (outgoing radiation)    %.10e", er.i_out);
        say("  i_in     (incoming, signed)      %.10e", er.i_in);
        say("  production volume integral       %.10e", er.production_volume_integral);
        say("  min pointwise production         %.10e", er.min_pointwise_production);
        say("  balance defect                   %.10e", er.balance_defect);
        if (opt.output)
        {
            auto dir = prepare_directory(*opt.output);
            write_json(dir + "/entropy.json",
                       {{"command", "entropy"},
                        {"artifact", artifact_path},
                        {"entropy", to_json(er)}});
        }
        return int(exit_success);
    });
}

}  // namespace radheat
