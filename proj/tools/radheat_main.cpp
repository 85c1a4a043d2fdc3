//---------------------------------*-C++-*-----------------------------------//
// Copyright 2026 radheat developers.
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file radheat_main.cpp
//! Command-line front end over the C interface.
//---------------------------------------------------------------------------//
#include <cstdio>
#include <memory>
#include <string>

#include <CLI11.hpp>

#include "radheat/radheat.h"

namespace
{
struct OptionsDeleter
{
    void operator()(rh_options* o) const { rh_options_destroy(o); }
};
using OptionsPtr = std::unique_ptr<rh_options, OptionsDeleter>;

int finish(rh_status s)
{
    if (s != RH_OK && *rh_last_error())
        std::fprintf(stderr, "radheat: %s\n", rh_last_error());
    return int(s);
}
}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Steady radiative heating: temperature fields of a convex body"};
    app.set_version_flag("--version", std::string(rh_version()));
    app.require_subcommand(1);
    // Global flags may follow the subcommand
    app.fallthrough();

    int threads = 0;
    std::string output;
    std::uint64_t seed = 0;
    bool quiet = false;
    std::string config;
    std::string artifact;

    auto* threads_opt = app.add_option("--threads", threads, "Worker threads (0: all cores)")
                            ->check(CLI::NonNegativeNumber);
    auto* output_opt = app.add_option("--output", output, "Output directory");
    auto* seed_opt = app.add_option("--seed", seed, "Random seed");
    app.add_flag("--quiet", quiet, "Suppress progress output");

    auto* solve = app.add_subcommand("solve", "Solve the configured problem and write artifacts");
    solve->add_option("--config", config, "Config file (JSON)")->required();
    auto* validate = app.add_subcommand("validate", "Run the built-in identity suite");
    auto* oracle = app.add_subcommand("oracle", "Compare the solver with the dense oracle");
    oracle->add_option("--config", config, "Config file (JSON)")->required();
    auto* entropy = app.add_subcommand("entropy", "Entropy diagnostics of a field dump");
    entropy->add_option("artifact", artifact, "Field dump written by solve (fields.bin)");
    entropy->add_option("--config", artifact, "Same as the positional artifact path");

    try
    {
        app.parse(argc, argv);
    }
    catch (CLI::ParseError const& e)
    {
        int rc = app.exit(e);
        return rc == 0 ? 0 : RH_CONFIG_ERROR;
    }

    rh_options* raw = nullptr;
    if (rh_options_create(&raw) != RH_OK)
        return finish(RH_CONFIG_ERROR);
    OptionsPtr opt(raw);
    if (*threads_opt)
        rh_options_set_threads(opt.get(), threads);
    if (*output_opt && rh_options_set_output(opt.get(), output.c_str()) != RH_OK)
        return finish(RH_CONFIG_ERROR);
    if (*seed_opt)
        rh_options_set_seed(opt.get(), seed);
    rh_options_set_quiet(opt.get(), quiet);

    if (*solve)
        return finish(rh_cmd_solve(config.c_str(), opt.get()));
    if (*validate)
        return finish(rh_cmd_validate(opt.get()));
    if (*oracle)
        return finish(rh_cmd_oracle(config.c_str(), opt.get()));
    if (*entropy)
    {
        if (artifact.empty())
        {
            std::fprintf(stderr, "radheat: entropy needs a field dump path\n");
            return RH_CONFIG_ERROR;
        }
        return finish(rh_cmd_entropy(artifact.c_str(), opt.get()));
    }
    return RH_CONFIG_ERROR;
}
