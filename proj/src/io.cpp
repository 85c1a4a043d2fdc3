//---------------------------------*-C++-*-----------------------------------//
// Copyright 2026 radheat developers.
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file io.cpp
//---------------------------------------------------------------------------//
#include "radheat/io.hpp"

#include <bit>
#include <cstdio>
#include <cstring>
#include <fstream>

namespace radheat
{
namespace
{
using nlohmann::json;

[[noreturn]] void io_fail(std::string const& path, std::string const& what)
{
    fail(ErrorCode::io, path + ": " + what);
}

[[noreturn]] void unreadable(std::string const& path, std::string const& what)
{
    fail(ErrorCode::artifact_unreadable, path + ": " + what);
}

template<class T>
T to_little(T v)
{
    if constexpr (std::endian::native == std::endian::big)
    {
        unsigned char b[sizeof(T)];
        std::memcpy(b, &v, sizeof(T));
        for (std::size_t i = 0; i < sizeof(T) / 2; ++i)
            std::swap(b[i], b[sizeof(T) - 1 - i]);
        std::memcpy(&v, b, sizeof(T));
    }
    return v;
}

template<class T>
void put(std::ostream& os, T v)
{
    v = to_little(v);
    os.write(reinterpret_cast<char const*>(&v), sizeof(T));
}

void put_array(std::ostream& os, std::vector<double> const& v)
{
    if constexpr (std::endian::native == std::endian::little)
    {
        os.write(reinterpret_cast<char const*>(v.data()),
                 std::streamsize(v.size() * sizeof(double)));
    }
    else
    {
        for (double x : v)
            put(os, x);
    }
}

template<class T>
T get(std::istream& is, std::string const& path)
{
    T v;
    if (!is.read(reinterpret_cast<char*>(&v), sizeof(T)))
        unreadable(path, "truncated header");
    return to_little(v);
}

std::vector<double> get_array(std::istream& is, std::size_t n, std::string const& path)
{
    std::vector<double> v(n);
    if (!is.read(reinterpret_cast<char*>(v.data()), std::streamsize(n * sizeof(double))))
        unreadable(path, "truncated data");
    for (auto& x : v)
        x = to_little(x);
    return v;
}

std::uint32_t mode_code(Mode m)
{
    return static_cast<std::uint32_t>(m);
}

}  // namespace

//---------------------------------------------------------------------------//
std::string format_double(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_node_table(std::string const& path, Solution const& s)
{
    std::ofstream os(path);
    if (!os)
        io_fail(path, "cannot open for writing");
    os << "x,y,z,T,w,conservation_residual\n";
    auto const& c = s.disc->space.centers;
    for (std::size_t m = 0; m < c.size(); ++m)
    {
        os << format_double(c[m].x) << ',' << format_double(c[m].y) << ','
           << format_double(c[m].z) << ',' << format_double(s.T[m]) << ','
           << format_double(s.w[m]) << ','
           << format_double(s.residual.empty() ? 0.0 : s.residual[m]) << '\n';
    }
    if (!os)
        io_fail(path, "write failed");
}

//---------------------------------------------------------------------------//
json to_json(SolverReport const& r)
{
    return {{"converged", r.converged},
            {"iterations", r.iterations},
            {"residual_history", r.residual_history},
            {"contraction_estimates", r.contraction_estimates},
            {"conservation_norm", r.conservation_norm},
            {"conservation_abs", r.conservation_abs},
            {"wall_time", r.wall_time},
            {"truncation_terms", r.truncation_terms},
            {"truncation_bound", r.truncation_bound},
            {"theta", r.theta},
            {"cap", r.cap},
            {"min_self_coefficient", r.min_self_coefficient},
            {"h_integral_max", r.h_integral_max},
            {"h_bound", r.h_bound},
            {"inner_iterations", r.inner_iterations},
            {"n_nodes", r.n_nodes},
            {"n_groups", r.n_groups},
            {"note", r.note}};
}

json to_json(EntropyReport const& r)
{
    return {{"production_volume_integral", r.production_volume_integral},
            {"scattering_production", r.scattering_production},
            {"min_pointwise_production", r.min_pointwise_production},
            {"phi_in", r.phi_in},
            {"phi_in_abs", std::fabs(r.phi_in)},
            {"phi_out", r.phi_out},
            {"i_in", r.i_in},
            {"i_in_abs", std::fabs(r.i_in)},
            {"i_out", r.i_out},
            {"balance_defect", r.balance_defect},
            {"energy_defect", r.energy_defect},
            {"volume_nodes", r.volume_nodes},
            {"surface_nodes", r.surface_nodes}};
}

void write_json(std::string const& path, json const& j)
{
    std::ofstream os(path);
    if (!os)
        io_fail(path, "cannot open for writing");
    os << j.dump(2) << '\n';
    if (!os)
        io_fail(path, "write failed");
}

json read_json(std::string const& path)
{
    std::ifstream is(path);
    if (!is)
        unreadable(path, "cannot open");
    try
    {
        return json::parse(is);
    }
    catch (json::exception const& e)
    {
        unreadable(path, std::string("invalid JSON: ") + e.what());
    }
}

//---------------------------------------------------------------------------//
// FIELD DUMP
//---------------------------------------------------------------------------//
FieldDump make_dump(Solution const& s, json config, bool with_radiance)
{
    auto const& disc = *s.disc;
    FieldDump d;
    d.mode = s.mode;
    d.n_nodes = disc.space.size();
    d.n_dirs = disc.angles.size();
    d.n_freq = disc.spectrum.size();
    d.centers.reserve(3 * d.n_nodes);
    for (auto const& c : disc.space.centers)
    {
        d.centers.push_back(c.x);
        d.centers.push_back(c.y);
        d.centers.push_back(c.z);
    }
    d.T = s.T;
    d.w = s.w;
    d.residual = s.residual.empty() ? std::vector<double>(d.n_nodes, 0.0) : s.residual;
    d.mean_intensity = s.mean_intensity;
    if (with_radiance)
        d.radiance = s.radiance.values;
    d.config = std::move(config);
    return d;
}

void write_field_dump(std::string const& path, FieldDump const& d)
{
    std::ofstream os(path, std::ios::binary);
    if (!os)
        io_fail(path, "cannot open for writing");
    std::uint64_t flags = (d.mean_intensity.empty() ? 0 : 1) | (d.radiance.empty() ? 0 : 2);
    os.write(field_magic, sizeof(field_magic));
    put(os, field_version);
    put(os, mode_code(d.mode));
    put(os, std::uint64_t(d.n_nodes));
    put(os, std::uint64_t(d.n_dirs));
    put(os, std::uint64_t(d.n_freq));
    put(os, flags);
    put_array(os, d.centers);
    put_array(os, d.T);
    put_array(os, d.w);
    put_array(os, d.residual);
    put_array(os, d.mean_intensity);
    put_array(os, d.radiance);
    if (!os)
        io_fail(path, "write failed");

    std::size_t M = d.n_nodes;
    std::size_t offset = 8 + 4 + 4 + 4 * 8;
    json arrays = json::array();
    auto add = [&](char const* name, std::vector<std::size_t> shape, std::size_t n) {
        if (n == 0)
            return;
        arrays.push_back({{"name", name}, {"shape", shape}, {"offset", offset}});
        offset += n * sizeof(double);
    };
    add("centers", {M, 3}, d.centers.size());
    add("T", {M}, d.T.size());
    add("w", {M}, d.w.size());
    add("conservation_residual", {M}, d.residual.size());
    add("mean_intensity", {M, d.n_freq}, d.mean_intensity.size());
    add("radiance", {M, d.n_dirs, d.n_freq}, d.radiance.size());
    json side = {{"format", "radheat-field"},
                 {"version", field_version},
                 {"byte_order", "little"},
                 {"value_type", "float64"},
                 {"mode", to_string(d.mode)},
                 {"n_nodes", M},
                 {"n_dirs", d.n_dirs},
                 {"n_freq", d.n_freq},
                 {"arrays", arrays},
                 {"config", d.config}};
    write_json(path + ".json", side);
}

FieldDump read_field_dump(std::string const& path)
{
    std::ifstream is(path, std::ios::binary);
    if (!is)
        unreadable(path, "cannot open");
    char magic[8];
    if (!is.read(magic, 8) || std::memcmp(magic, field_magic, 8) != 0)
        unreadable(path, "not a radheat field dump");
    auto version = get<std::uint32_t>(is, path);
    if (version != field_version)
        unreadable(path, "unsupported version " + std::to_string(version));
    auto mode = get<std::uint32_t>(is, path);
    if (mode > 3)
        unreadable(path, "bad mode code");
    FieldDump d;
    d.mode = static_cast<Mode>(mode);
    d.n_nodes = get<std::uint64_t>(is, path);
    d.n_dirs = get<std::uint64_t>(is, path);
    d.n_freq = get<std::uint64_t>(is, path);
    auto flags = get<std::uint64_t>(is, path);
    if (d.n_nodes > (1ull << 32) || d.n_dirs > (1ull << 20) || d.n_freq > (1ull << 20))
        unreadable(path, "implausible descriptors");
    std::size_t M = d.n_nodes;
    d.centers = get_array(is, 3 * M, path);
    d.T = get_array(is, M, path);
    d.w = get_array(is, M, path);
    d.residual = get_array(is, M, path);
    if (flags & 1)
        d.mean_intensity = get_array(is, M * d.n_freq, path);
    if (flags & 2)
        d.radiance = get_array(is, M * d.n_dirs * d.n_freq, path);
    if (is.peek() != std::char_traits<char>::eof())
        unreadable(path, "trailing bytes");

    auto side = read_json(path + ".json");
    if (!side.contains("config") || side.value("n_nodes", std::size_t(0)) != M)
        unreadable(path + ".json", "sidecar does not match the binary file");
    d.config = side["config"];
    return d;
}

}  // namespace radheat
