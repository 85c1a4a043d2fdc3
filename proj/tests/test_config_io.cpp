//---------------------------------*-C++-*-----------------------------------//
// Copyright 2026 radheat developers.
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file test_config_io.cpp
//---------------------------------------------------------------------------//
#include <cstring>
#include <filesystem>
#include <fstream>

#include "radheat/commands.hpp"
#include "radheat/config.hpp"
#include "radheat/io.hpp"
#include "support.hpp"

using namespace radheat;
using nlohmann::json;
using radheat::test::raises;

namespace
{
std::string message_of(json const& j)
{
    try
    {
        parse_config(j);
    }
    catch (Error const& e)
    {
        return e.what();
    }
    return {};
}

std::filesystem::path scratch(std::string const& name)
{
    auto dir = std::filesystem::temp_directory_path() / "radheat_unit";
    std::filesystem::create_directories(dir);
    return dir / name;
}
}  // namespace

TEST_SUITE("config")
{
TEST_CASE("defaults")
{
    auto c = parse_config(json{{"mode", "grey"}});
    CHECK(c.mode == Mode::grey);
    CHECK(c.h == 0.1);
    CHECK(c.n_frequencies == 64);
    CHECK(c.n_polar == 8);
    CHECK(c.n_azimuth == 16);
    CHECK(c.solver.tol == 1e-8);
    auto p = build_problem(c);
    CHECK(p.angles.size() == 128);
    CHECK(p.domain.diameter() == 2);
}

TEST_CASE("errors name the offending key")
{
    CHECK(message_of(json::object()).find("mode") != std::string::npos);
    CHECK(message_of(json{{"mode", "grey"}, {"spatial", {{"hh", 0.1}}}}).find("spatial.hh")
          != std::string::npos);
    CHECK(message_of(json{{"mode", "grey"}, {"spatial", {{"h", -0.1}}}}).find("spatial.h")
          != std::string::npos);
    CHECK(message_of(json{{"mode", "grey"}, {"angular", {{"n_polar", 2.5}}}})
              .find("angular.n_polar")
          != std::string::npos);
    json tab = {{"mode", "grey"},
                {"medium", {{"absorption", {{"nu", {1, 2}}, {"alpha", {1, 2}}}}}}};
    CHECK(message_of(tab).find("mode-compatibility") != std::string::npos);
    CHECK(message_of(json{{"mode", "grey"}, {"extra", 1}}).find("extra") != std::string::npos);
    CHECK(raises(ErrorCode::config_invalid, [] { load_config("/nonexistent/radheat.json"); }));
}

TEST_CASE("resolved config round trip")
{
    json j = {{"mode", "combined"},
              {"domain", {{"shape", "ellipsoid"}, {"semi_axes", {1.0, 0.8, 0.6}}}},
              {"medium", {{"absorption", 1.5}, {"scattering", 0.5}}},
              {"boundary", {{"kind", "dipole"}, {"T0", 1.0}, {"amplitude", 0.3}}},
              {"spectral", {{"n_nodes", 16}}},
              {"seed", 42}};
    auto c = parse_config(j);
    auto again = parse_config(to_json(c));
    CHECK(to_json(again) == to_json(c));
    CHECK(again.seed == 42);
}
}

TEST_SUITE("io")
{
TEST_CASE("number formatting round trips")
{
    for (double v : {0.1, 1.0 / 3, 6.02214076e23, -2.5e-300, 12.987878804533658})
        CHECK(std::stod(format_double(v)) == v);
}

TEST_CASE("field dump is bit identical after a round trip")
{
    Problem p;
    p.medium.absorption = AbsorptionProfile(1.0);
    p.medium.scattering = AbsorptionProfile(0.5);
    p.boundary = BoundarySource::dipole(1, 0.4, {0, 0, 1});
    p.angles = build_angular(4, 8);
    p.spectrum = build_spectral(1, 8);
    p.h = 0.25;
    auto s = solve(p, Mode::combined);
    auto dump = make_dump(s, json{{"mode", "combined"}}, true);
    auto path = scratch("roundtrip.bin").string();
    write_field_dump(path, dump);
    auto back = read_field_dump(path);
    CHECK(back.mode == Mode::combined);
    CHECK(back.n_nodes == s.T.size());
    CHECK(back.n_dirs == 32);
    CHECK(back.n_freq == 8);
    CHECK(std::memcmp(back.T.data(), s.T.data(), s.T.size() * sizeof(double)) == 0);
    CHECK(back.w == dump.w);
    CHECK(back.mean_intensity == dump.mean_intensity);
    CHECK(back.radiance == dump.radiance);
    CHECK(back.config == dump.config);

    // Load back into a solution on the same grids
    auto loaded = load_solution(back, p);
    CHECK(loaded.T == s.T);
}

TEST_CASE("corrupt dumps are rejected")
{
    auto path = scratch("corrupt.bin").string();
    {
        std::ofstream out(path, std::ios::binary);
        out << "not a field dump";
    }
    CHECK(raises(ErrorCode::artifact_unreadable, [&] { read_field_dump(path); }));
    CHECK(raises(ErrorCode::artifact_unreadable,
                 [&] { read_field_dump(scratch("missing.bin").string()); }));
}

TEST_CASE("node table layout")
{
    Problem p;
    p.medium.absorption = AbsorptionProfile(1.0);
    p.boundary = BoundarySource::equilibrium(1);
    p.angles = build_angular(4, 8);
    p.spectrum = build_spectral(1, 8);
    p.h = 0.5;
    auto s = solve(p, Mode::grey);
    auto path = scratch("nodes.csv").string();
    write_node_table(path, s);
    std::ifstream in(path);
    std::string line;
    std::getline(in, line);
    CHECK(line == "x,y,z,T,w,conservation_residual");
    std::size_t rows = 0;
    while (std::getline(in, line))
        ++rows;
    CHECK(rows == s.T.size());
}

TEST_CASE("exit codes")
{
    CHECK(exit_code(ErrorCode::config_invalid) == 1);
    CHECK(exit_code(ErrorCode::max_iter_exceeded) == 2);
    CHECK(exit_code(ErrorCode::inner_diverged) == 2);
    CHECK(exit_code(ErrorCode::invariant_violation) == 3);
    CHECK(exit_code(ErrorCode::cap_exceeded) == 3);
    CHECK(exit_code(ErrorCode::artifact_unreadable) == 1);
}
}

TEST_SUITE("validate")
{
TEST_CASE("identity suite passes")
{
    auto checks = validation_suite(0);
    CHECK(checks.size() >= 10);
    for (auto const& c : checks)
    {
        INFO(c.name, " ", c.detail);
        CHECK(c.pass);
    }
}
}
