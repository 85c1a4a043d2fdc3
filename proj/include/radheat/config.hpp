//---------------------------------*-C++-*-----------------------------------//
// Copyright 2026 radheat developers.
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file config.hpp
//! Run configuration: JSON parsing, validation and problem assembly.
//---------------------------------------------------------------------------//
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "entropy.hpp"
#include "solvers.hpp"

namespace radheat
{
//---------------------------------------------------------------------------//
//! Coefficient spec: constant, or a table over frequency
struct ProfileConfig
{
    double value{0};
    std::vector<double> nu;
    std::vector<double> alpha;
    std::string interp{"linear"};
};

struct KernelConfig
{
    std::string type{"isotropic"};
    double g{0};
    std::vector<double> values;
};

struct BoundaryConfig
{
    std::string kind{"zero"};
    double value{0};
    double T0{1};
    double T_minus{1};
    double amplitude{0};
    Vec3 axis{0, 0, 1};
    std::vector<double> nu;
    std::vector<double> mu;
    std::vector<double> values;
};

struct OutputConfig
{
    std::string directory{"radheat_out"};
    bool node_table{true};
    bool report{true};
    bool field_dump{true};
    //! Include the full radiance I(m, i, j) in the dump
    bool radiation_field{false};
};

struct OracleConfig
{
    //! Max |T_solver - T_oracle| / max T_oracle accepted by cmd_oracle
    double tolerance{5e-3};
    double iteration_tolerance{1e-10};
    int max_iter{20000};
};

//---------------------------------------------------------------------------//
/*!
 * Everything read from a config file, with defaults filled in.
 */
struct RunConfig
{
    Mode mode{Mode::grey};
    std::string shape{"ball"};
    Vec3 center{0, 0, 0};
    double radius{1};
    Vec3 semi_axes{1, 1, 1};
    ProfileConfig absorption{1.0, {}, {}, "linear"};
    ProfileConfig scattering;
    KernelConfig kernel;
    BoundaryConfig boundary;
    std::string angular_rule{"product"};
    int n_polar{8};
    int n_azimuth{16};
    int n_frequencies{64};
    double T_ref{1};
    double h{0.1};
    double ray_h{0};
    SolverOptions solver;
    bool entropy_enabled{true};
    EntropyOptions entropy;
    OracleConfig oracle;
    OutputConfig output;
    std::uint64_t seed{0};
    int threads{0};
};

// Parse and validate; throws ConfigInvalid naming the offending key
RunConfig parse_config(nlohmann::json const& j);
RunConfig load_config(std::string const& path);

// Fully resolved config (defaults expanded)
nlohmann::json to_json(RunConfig const& c);

// Grids, medium, boundary and options described by the config
Problem build_problem(RunConfig const& c);

}  // namespace radheat
