//---------------------------------*-C++-*-----------------------------------//
// Copyright 2026 radheat developers.
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file commands.hpp
//! Batch commands behind the command-line tool.
//---------------------------------------------------------------------------//
#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "config.hpp"
#include "io.hpp"

namespace radheat
{
//---------------------------------------------------------------------------//
enum ExitCode
{
    exit_success = 0,
    exit_config = 1,
    exit_not_converged = 2,
    exit_invariant = 3
};

int exit_code(ErrorCode code);

//---------------------------------------------------------------------------//
//! Overrides from the command line
struct CommandOptions
{
    std::optional<int> threads;
    std::optional<std::string> output;
    std::optional<std::uint64_t> seed;
    bool quiet{false};
};

// Each returns an exit code; errors are reported on stderr
int cmd_solve(std::string const& config_path, CommandOptions const& opt);
int cmd_validate(CommandOptions const& opt);
int cmd_oracle(std::string const& config_path, CommandOptions const& opt);
int cmd_entropy(std::string const& artifact_path, CommandOptions const& opt);

//---------------------------------------------------------------------------//
struct CheckResult
{
    std::string name;
    bool pass{false};
    double measured{0};
    double tolerance{0};
    std::string detail;
};

// Built-in identity suite run by cmd_validate
std::vector<CheckResult> validation_suite(std::uint64_t seed);

// Rebuild a solution from a field dump (grids from its embedded config)
Solution load_solution(FieldDump const& d, Problem const& p);

}  // namespace radheat
