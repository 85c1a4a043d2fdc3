//---------------------------------*-C++-*-----------------------------------//
// Copyright 2026 radheat developers.
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file capi.cpp
//---------------------------------------------------------------------------//
#include "radheat/radheat.h"

#include <algorithm>
#include <memory>
#include <string>

#include "radheat/commands.hpp"
#include "radheat/parallel.hpp"

struct rh_options
{
    radheat::CommandOptions value;
};

struct rh_solution
{
    radheat::Solution value;
};

namespace
{
thread_local std::string g_last_error;

rh_status record(rh_status s, std::string msg)
{
    g_last_error = std::move(msg);
    return s;
}

template<class F>
rh_status guard(F&& f)
{
    try
    {
        g_last_error.clear();
        return f();
    }
    catch (radheat::Error const& e)
    {
        return record(static_cast<rh_status>(radheat::exit_code(e.code())),
                      std::string(radheat::to_string(e.code())) + ": " + e.what());
    }
    catch (std::exception const& e)
    {
        return record(RH_INVARIANT_VIOLATION, e.what());
    }
}

radheat::CommandOptions options_of(rh_options const* opt)
{
    return opt ? opt->value : radheat::CommandOptions{};
}

rh_status command_status(int code, char const* what)
{
    auto s = static_cast<rh_status>(code);
    if (s != RH_OK)
        g_last_error = std::string(what) + " exited with status " + std::to_string(code);
    return s;
}

}  // namespace

extern "C" {

char const* rh_version(void)
{
    return "1.0.0";
}

char const* rh_status_string(rh_status status)
{
    switch (status)
    {
        case RH_OK:
            return "ok";
        case RH_CONFIG_ERROR:
            return "configuration error";
        case RH_NOT_CONVERGED:
            return "not converged";
        case RH_INVARIANT_VIOLATION:
            return "invariant violation";
    }
    return "unknown status";
}

char const* rh_last_error(void)
{
    return g_last_error.c_str();
}

rh_status rh_options_create(rh_options** out)
{
    if (!out)
        return record(RH_CONFIG_ERROR, "null output pointer");
    *out = new rh_options;
    return RH_OK;
}

void rh_options_destroy(rh_options* opt)
{
    delete opt;
}

rh_status rh_options_set_threads(rh_options* opt, int threads)
{
    if (!opt || threads < 0)
        return record(RH_CONFIG_ERROR, "threads must be >= 0");
    opt->value.threads = threads;
    return RH_OK;
}

rh_status rh_options_set_output(rh_options* opt, char const* dir)
{
    if (!opt || !dir || !*dir)
        return record(RH_CONFIG_ERROR, "output directory must be a non-empty path");
    opt->value.output = dir;
    return RH_OK;
}

rh_status rh_options_set_seed(rh_options* opt, uint64_t seed)
{
    if (!opt)
        return record(RH_CONFIG_ERROR, "null options");
    opt->value.seed = seed;
    return RH_OK;
}

rh_status rh_options_set_quiet(rh_options* opt, int quiet)
{
    if (!opt)
        return record(RH_CONFIG_ERROR, "null options");
    opt->value.quiet = quiet != 0;
    return RH_OK;
}

rh_status rh_cmd_solve(char const* config_path, rh_options const* opt)
{
    if (!config_path)
        return record(RH_CONFIG_ERROR, "null config path");
    g_last_error.clear();
    return command_status(radheat::cmd_solve(config_path, options_of(opt)), "solve");
}

rh_status rh_cmd_validate(rh_options const* opt)
{
    g_last_error.clear();
    return command_status(radheat::cmd_validate(options_of(opt)), "validate");
}

rh_status rh_cmd_oracle(char const* config_path, rh_options const* opt)
{
    if (!config_path)
        return record(RH_CONFIG_ERROR, "null config path");
    g_last_error.clear();
    return command_status(radheat::cmd_oracle(config_path, options_of(opt)), "oracle");
}

rh_status rh_cmd_entropy(char const* artifact_path, rh_options const* opt)
{
    if (!artifact_path)
        return record(RH_CONFIG_ERROR, "null artifact path");
    g_last_error.clear();
    return command_status(radheat::cmd_entropy(artifact_path, options_of(opt)), "entropy");
}

rh_status rh_solve_config(char const* config_path, rh_solution** out)
{
    if (!config_path || !out)
        return record(RH_CONFIG_ERROR, "null argument");
    *out = nullptr;
    return guard([&] {
        auto cfg = radheat::load_config(config_path);
        radheat::set_thread_count(cfg.threads);
        auto p = radheat::build_problem(cfg);
        auto sol = std::make_unique<rh_solution>();
        sol->value = radheat::solve(p, cfg.mode);
        bool ok = sol->value.report.converged;
        *out = sol.release();
        return ok ? RH_OK : record(RH_NOT_CONVERGED, "MaxIterExceeded: solver did not converge");
    });
}

void rh_solution_destroy(rh_solution* sol)
{
    delete sol;
}

size_t rh_solution_node_count(rh_solution const* sol)
{
    return sol ? sol->value.T.size() : 0;
}

int rh_solution_converged(rh_solution const* sol)
{
    return sol && sol->value.report.converged ? 1 : 0;
}

int rh_solution_iterations(rh_solution const* sol)
{
    return sol ? sol->value.report.iterations : 0;
}

rh_status rh_solution_temperature(rh_solution const* sol, double* buf, size_t n)
{
    if (!sol || !buf || n != sol->value.T.size())
        return record(RH_CONFIG_ERROR, "buffer must hold node-count values");
    std::copy(sol->value.T.begin(), sol->value.T.end(), buf);
    return RH_OK;
}

rh_status rh_solution_emission(rh_solution const* sol, double* buf, size_t n)
{
    if (!sol || !buf || n != sol->value.w.size())
        return record(RH_CONFIG_ERROR, "buffer must hold node-count values");
    std::copy(sol->value.w.begin(), sol->value.w.end(), buf);
    return RH_OK;
}

rh_status rh_solution_positions(rh_solution const* sol, double* xyz, size_t n)
{
    if (!sol || !xyz || n != sol->value.T.size())
        return record(RH_CONFIG_ERROR, "buffer must hold 3 x node-count values");
    auto const& c = sol->value.disc->space.centers;
    for (std::size_t m = 0; m < c.size(); ++m)
    {
        xyz[3 * m] = c[m].x;
        xyz[3 * m + 1] = c[m].y;
        xyz[3 * m + 2] = c[m].z;
    }
    return RH_OK;
}

void rh_testing_set_kernel_scale(double scale)
{
    radheat::testing::set_kernel_scale(scale);
}

}  // extern "C"
