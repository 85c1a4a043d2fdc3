//---------------------------------*-C++-*-----------------------------------//
// Copyright 2026 radheat developers.
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file io.hpp
//! Node tables, run reports and binary field dumps.
//---------------------------------------------------------------------------//
#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "entropy.hpp"
#include "solvers.hpp"

namespace radheat
{
//---------------------------------------------------------------------------//
//! Format with 17 significant digits
std::string format_double(double v);

// x,y,z,T,w,conservation_residual with a one-line header
void write_node_table(std::string const& path, Solution const& s);

nlohmann::json to_json(SolverReport const& r);
nlohmann::json to_json(EntropyReport const& r);

void write_json(std::string const& path, nlohmann::json const& j);
nlohmann::json read_json(std::string const& path);

//---------------------------------------------------------------------------//
/*!
 * Fields of a solution as stored on disk.
 *
 * Binary layout, all integers and floats little-endian:
 *   char[8]  magic "RHFIELD\0"
 *   u32      version (1)
 *   u32      mode (0 scattering, 1 grey, 2 spectral, 3 combined)
 *   u64      n_nodes, n_dirs, n_freq
 *   u64      flags (1: mean intensity present, 2: radiance present)
 *   f64      centers[n_nodes][3], T[n_nodes], w[n_nodes], residual[n_nodes]
 *   f64      mean_intensity[n_nodes][n_freq]          (flag 1)
 *   f64      radiance[n_nodes][n_dirs][n_freq]        (flag 2)
 * The JSON sidecar repeats the descriptors and holds the resolved config.
 */
struct FieldDump
{
    Mode mode{Mode::grey};
    std::size_t n_nodes{0};
    std::size_t n_dirs{0};
    std::size_t n_freq{0};
    std::vector<double> centers;
    std::vector<double> T;
    std::vector<double> w;
    std::vector<double> residual;
    std::vector<double> mean_intensity;
    std::vector<double> radiance;
    nlohmann::json config;
};

inline constexpr char field_magic[8] = {'R', 'H', 'F', 'I', 'E', 'L', 'D', '\0'};
inline constexpr std::uint32_t field_version = 1;

FieldDump make_dump(Solution const& s, nlohmann::json config, bool with_radiance);

// Binary file at path and its sidecar at path + ".json"
void write_field_dump(std::string const& path, FieldDump const& d);
FieldDump read_field_dump(std::string const& path);

}  // namespace radheat
