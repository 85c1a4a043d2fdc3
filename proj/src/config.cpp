//---------------------------------*-C++-*-----------------------------------//
// Copyright 2026 radheat developers.
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file config.cpp
//---------------------------------------------------------------------------//
#include "radheat/config.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <set>

namespace radheat
{
namespace
{
using nlohmann::json;

[[noreturn]] void bad(std::string const& key, std::string const& why)
{
    fail(ErrorCode::config_invalid, key + ": " + why);
}

//---------------------------------------------------------------------------//
//! Object reader that rejects keys it was never asked about
class Section
{
  public:
    Section(json const& j, std::string path) : j_(j), path_(std::move(path))
    {
        if (!j_.is_object())
            bad(path_.empty() ? "<root>" : path_, "expected an object");
    }

    ~Section() noexcept(false)
    {
        if (std::uncaught_exceptions())
            return;
        for (auto it = j_.begin(); it != j_.end(); ++it)
        {
            if (!seen_.count(it.key()))
                bad(this->key(it.key()), "unknown key");
        }
    }

    std::string key(std::string const& k) const
    {
        return path_.empty() ? k : path_ + "." + k;
    }

    bool has(std::string const& k)
    {
        seen_.insert(k);
        return j_.contains(k);
    }

    json const& at(std::string const& k)
    {
        seen_.insert(k);
        return j_.at(k);
    }

    double number(std::string const& k, double def, double lo, double hi,
                  bool open_lo = false)
    {
        if (!this->has(k))
            return def;
        auto const& v = j_.at(k);
        if (!v.is_number())
            bad(this->key(k), "expected a number");
        double x = v.get<double>();
        if (!std::isfinite(x) || x < lo || x > hi || (open_lo && x == lo))
        {
            bad(this->key(k),
                "value " + std::to_string(x) + " outside " + (open_lo ? "(" : "[")
                    + std::to_string(lo) + ", " + std::to_string(hi) + "]");
        }
        return x;
    }

    int integer(std::string const& k, int def, int lo, int hi)
    {
        if (!this->has(k))
            return def;
        auto const& v = j_.at(k);
        if (!v.is_number_integer())
            bad(this->key(k), "expected an integer");
        auto x = v.get<long long>();
        if (x < lo || x > hi)
        {
            bad(this->key(k),
                "value " + std::to_string(x) + " outside [" + std::to_string(lo)
                    + ", " + std::to_string(hi) + "]");
        }
        return int(x);
    }

    bool boolean(std::string const& k, bool def)
    {
        if (!this->has(k))
            return def;
        auto const& v = j_.at(k);
        if (!v.is_boolean())
            bad(this->key(k), "expected true or false");
        return v.get<bool>();
    }

    std::string string(std::string const& k, std::string def,
                       std::set<std::string> const& allowed = {})
    {
        if (!this->has(k))
            return def;
        auto const& v = j_.at(k);
        if (!v.is_string())
            bad(this->key(k), "expected a string");
        auto s = v.get<std::string>();
        if (!allowed.empty() && !allowed.count(s))
        {
            std::string list;
            for (auto const& a : allowed)
                list += (list.empty() ? "" : ", ") + a;
            bad(this->key(k), "'" + s + "' is not one of " + list);
        }
        return s;
    }

    std::vector<double> numbers(std::string const& k, bool required = true)
    {
        if (!this->has(k))
        {
            if (required)
                bad(this->key(k), "missing");
            return {};
        }
        auto const& v = j_.at(k);
        if (!v.is_array())
            bad(this->key(k), "expected an array of numbers");
        std::vector<double> out;
        for (auto const& e : v)
        {
            if (!e.is_number())
                bad(this->key(k), "expected an array of numbers");
            out.push_back(e.get<double>());
            if (!std::isfinite(out.back()))
                bad(this->key(k), "entries must be finite");
        }
        return out;
    }

    Vec3 vec3(std::string const& k, Vec3 def)
    {
        if (!this->has(k))
            return def;
        auto v = this->numbers(k);
        if (v.size() != 3)
            bad(this->key(k), "expected three numbers");
        return {v[0], v[1], v[2]};
    }

    //! Optional child object; the callback sees an empty object if absent
    void child(std::string const& k, std::function<void(Section&)> const& f)
    {
        static json const empty = json::object();
        Section s(this->has(k) ? j_.at(k) : empty, this->key(k));
        f(s);
    }

  private:
    json const& j_;
    std::string path_;
    std::set<std::string> seen_;
};

//---------------------------------------------------------------------------//
ProfileConfig read_profile(Section& parent, std::string const& k, double def)
{
    ProfileConfig p;
    p.value = def;
    if (!parent.has(k))
        return p;
    auto const& v = parent.at(k);
    if (v.is_number())
    {
        p.value = parent.number(k, def, 0, 1e6);
        return p;
    }
    Section s(v, parent.key(k));
    p.nu = s.numbers("nu");
    p.alpha = s.numbers("alpha");
    p.interp = s.string("interp", "linear", {"linear", "step"});
    if (p.nu.size() < 2 || p.nu.size() != p.alpha.size())
        bad(parent.key(k), "nu and alpha need equal lengths >= 2");
    for (std::size_t i = 0; i < p.nu.size(); ++i)
    {
        if (p.alpha[i] < 0)
            bad(parent.key(k) + ".alpha", "entries must be >= 0");
        if (i && !(p.nu[i] > p.nu[i - 1]))
            bad(parent.key(k) + ".nu", "must be strictly increasing");
    }
    if (!(p.nu.front() > 0))
        bad(parent.key(k) + ".nu", "entries must be > 0");
    return p;
}

json profile_json(ProfileConfig const& p)
{
    if (p.nu.empty())
        return p.value;
    return {{"nu", p.nu}, {"alpha", p.alpha}, {"interp", p.interp}};
}

AbsorptionProfile make_profile(ProfileConfig const& p)
{
    if (p.nu.empty())
        return AbsorptionProfile(p.value);
    return AbsorptionProfile(p.nu,
                             p.alpha,
                             p.interp == "step" ? AbsorptionProfile::Interp::step
                                                : AbsorptionProfile::Interp::linear);
}

json vec_json(Vec3 const& v)
{
    return json::array({v.x, v.y, v.z});
}

}  // namespace

//---------------------------------------------------------------------------//
RunConfig parse_config(nlohmann::json const& j)
{
    RunConfig c;
    {
        Section root(j, "");
        if (!root.has("mode"))
            bad("mode", "missing");
        c.mode = mode_from_string(
            root.string("mode", "", {"scattering", "grey", "spectral", "combined"}));

        root.child("domain", [&](Section& s) {
            c.shape = s.string("shape", "ball", {"ball", "ellipsoid"});
            c.center = s.vec3("center", c.center);
            if (c.shape == "ball")
            {
                c.radius = s.number("radius", 1, 0, 1e6, true);
                c.semi_axes = {c.radius, c.radius, c.radius};
            }
            else
            {
                c.semi_axes = s.vec3("semi_axes", c.semi_axes);
                for (int d = 0; d < 3; ++d)
                {
                    if (!(c.semi_axes[d] > 0))
                        bad(s.key("semi_axes"), "entries must be > 0");
                }
            }
        });

        root.child("medium", [&](Section& s) {
            c.absorption = read_profile(s, "absorption", 1.0);
            c.scattering = read_profile(s, "scattering", 0.0);
            if (s.has("kernel"))
            {
                auto const& kv = s.at("kernel");
                if (kv.is_string())
                {
                    c.kernel.type = s.string("kernel", "isotropic", {"isotropic"});
                }
                else
                {
                    Section k(kv, s.key("kernel"));
                    c.kernel.type = k.string(
                        "type", "isotropic", {"isotropic", "henyey_greenstein", "tabulated"});
                    if (c.kernel.type == "henyey_greenstein")
                        c.kernel.g = k.number("g", 0, -0.999, 0.999);
                    if (c.kernel.type == "tabulated")
                        c.kernel.values = k.numbers("values");
                }
            }
        });

        root.child("boundary", [&](Section& s) {
            auto& b = c.boundary;
            b.kind = s.string(
                "kind",
                "zero",
                {"zero", "constant", "equilibrium", "dipole", "two_temperature", "tabulated"});
            if (b.kind == "constant")
                b.value = s.number("value", 0, 0, 1e12);
            if (b.kind == "equilibrium" || b.kind == "dipole")
                b.T0 = s.number("T0", 1, 0, 1e6, true);
            if (b.kind == "dipole")
                b.amplitude = s.number("amplitude", 0, -1, 1);
            if (b.kind == "two_temperature")
            {
                b.T0 = s.number("T_plus", 1, 0, 1e6);
                b.T_minus = s.number("T_minus", 1, 0, 1e6);
            }
            if (b.kind == "dipole" || b.kind == "two_temperature" || b.kind == "tabulated")
            {
                b.axis = s.vec3("axis", b.axis);
                if (!(norm(b.axis) > 0))
                    bad(s.key("axis"), "must be nonzero");
            }
            if (b.kind == "tabulated")
            {
                b.nu = s.numbers("nu");
                b.mu = s.numbers("mu");
                b.values = s.numbers("values");
                if (b.values.size() != b.nu.size() * b.mu.size())
                    bad(s.key("values"), "needs len(nu) * len(mu) entries");
            }
        });

        root.child("angular", [&](Section& s) {
            c.angular_rule = s.string("rule", "product", {"product", "octahedral26"});
            if (c.angular_rule == "product")
            {
                c.n_polar = s.integer("n_polar", c.n_polar, 2, 256);
                c.n_azimuth = s.integer("n_azimuth", c.n_azimuth, 4, 512);
            }
        });
        root.child("spectral", [&](Section& s) {
            c.n_frequencies = s.integer("n_nodes", c.n_frequencies, 8, 1024);
            c.T_ref = s.number("T_ref", c.T_ref, 0, 1e6, true);
        });
        root.child("spatial", [&](Section& s) {
            double D = 2 * std::max({c.semi_axes.x, c.semi_axes.y, c.semi_axes.z});
            c.h = s.number("h", c.h, 0, D / 4, true);
        });
        root.child("ray", [&](Section& s) { c.ray_h = s.number("h", 0, 0, 1e6); });
        root.child("solver", [&](Section& s) {
            auto& o = c.solver;
            o.tol = s.number("tol", o.tol, 0, 1, true);
            o.max_iter = s.integer("max_iter", o.max_iter, 1, 1000000);
            o.inner_tol = s.number("inner_tol", o.inner_tol, 0, 1, true);
            o.inner_max_iter = s.integer("inner_max_iter", o.inner_max_iter, 1, 1000000);
            o.self_cell = s.string("self_cell", "mass_consistent",
                                   {"mass_consistent", "equivalent_ball"})
                                  == "equivalent_ball"
                              ? SelfCellRule::equivalent_ball
                              : SelfCellRule::mass_consistent;
            o.T_max = s.number("T_max", 0, 0, 1e9);
            o.h_eps = s.number("h_eps", o.h_eps, 0, 1, true);
        });
        root.child("entropy", [&](Section& s) {
            c.entropy_enabled = s.boolean("enabled", true);
            c.entropy.max_volume_nodes
                = std::size_t(s.integer("max_volume_nodes", 400, 1, 100000000));
            c.entropy.surface_polar = s.integer("surface_polar", 16, 2, 1024);
            c.entropy.surface_azimuth = s.integer("surface_azimuth", 32, 4, 2048);
        });
        root.child("oracle", [&](Section& s) {
            c.oracle.tolerance = s.number("tolerance", c.oracle.tolerance, 0, 1, true);
            c.oracle.iteration_tolerance
                = s.number("iteration_tolerance", c.oracle.iteration_tolerance, 0, 1, true);
            c.oracle.max_iter = s.integer("max_iter", c.oracle.max_iter, 1, 10000000);
        });
        root.child("output", [&](Section& s) {
            auto& o = c.output;
            o.directory = s.string("directory", o.directory);
            if (o.directory.empty())
                bad(s.key("directory"), "must not be empty");
            o.node_table = s.boolean("node_table", o.node_table);
            o.report = s.boolean("report", o.report);
            o.field_dump = s.boolean("field_dump", o.field_dump);
            o.radiation_field = s.boolean("radiation_field", o.radiation_field);
        });
        if (root.has("seed"))
        {
            auto const& v = root.at("seed");
            if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0))
                bad("seed", "expected a nonnegative integer");
            c.seed = v.get<std::uint64_t>();
        }
        c.threads = root.integer("threads", 0, 0, 4096);
    }

    // Mode compatibility is checked here so the message cites the config
    Problem probe;
    probe.medium.absorption = make_profile(c.absorption);
    probe.medium.scattering = make_profile(c.scattering);
    check_mode(probe, c.mode);
    return c;
}

RunConfig load_config(std::string const& path)
{
    std::ifstream in(path);
    if (!in)
        fail(ErrorCode::config_invalid, "cannot open config file '" + path + "'");
    nlohmann::json j;
    try
    {
        j = nlohmann::json::parse(in, nullptr, true, true);
    }
    catch (nlohmann::json::exception const& e)
    {
        fail(ErrorCode::config_invalid,
             "config file '" + path + "' is not valid JSON: " + e.what());
    }
    return parse_config(j);
}

//---------------------------------------------------------------------------//
nlohmann::json to_json(RunConfig const& c)
{
    json j;
    j["mode"] = to_string(c.mode);
    if (c.shape == "ball")
        j["domain"] = {{"shape", "ball"}, {"center", vec_json(c.center)}, {"radius", c.radius}};
    else
        j["domain"] = {{"shape", "ellipsoid"},
                       {"center", vec_json(c.center)},
                       {"semi_axes", vec_json(c.semi_axes)}};

    json kernel;
    if (c.kernel.type == "isotropic")
        kernel = "isotropic";
    else if (c.kernel.type == "henyey_greenstein")
        kernel = {{"type", c.kernel.type}, {"g", c.kernel.g}};
    else
        kernel = {{"type", c.kernel.type}, {"values", c.kernel.values}};
    j["medium"] = {{"absorption", profile_json(c.absorption)},
                   {"scattering", profile_json(c.scattering)},
                   {"kernel", kernel}};

    auto const& b = c.boundary;
    json bj = {{"kind", b.kind}};
    if (b.kind == "constant")
        bj["value"] = b.value;
    if (b.kind == "equilibrium" || b.kind == "dipole")
        bj["T0"] = b.T0;
    if (b.kind == "dipole")
        bj["amplitude"] = b.amplitude;
    if (b.kind == "two_temperature")
    {
        bj["T_plus"] = b.T0;
        bj["T_minus"] = b.T_minus;
    }
    if (b.kind == "dipole" || b.kind == "two_temperature" || b.kind == "tabulated")
        bj["axis"] = vec_json(b.axis);
    if (b.kind == "tabulated")
    {
        bj["nu"] = b.nu;
        bj["mu"] = b.mu;
        bj["values"] = b.values;
    }
    j["boundary"] = bj;

    if (c.angular_rule == "product")
        j["angular"] = {{"rule", "product"}, {"n_polar", c.n_polar}, {"n_azimuth", c.n_azimuth}};
    else
        j["angular"] = {{"rule", c.angular_rule}};
    j["spectral"] = {{"n_nodes", c.n_frequencies}, {"T_ref", c.T_ref}};
    j["spatial"] = {{"h", c.h}};
    j["ray"] = {{"h", c.ray_h}};
    auto const& o = c.solver;
    j["solver"] = {{"tol", o.tol},
                   {"max_iter", o.max_iter},
                   {"inner_tol", o.inner_tol},
                   {"inner_max_iter", o.inner_max_iter},
                   {"self_cell",
                    o.self_cell == SelfCellRule::equivalent_ball ? "equivalent_ball"
                                                                  : "mass_consistent"},
                   {"T_max", o.T_max},
                   {"h_eps", o.h_eps}};
    j["entropy"] = {{"enabled", c.entropy_enabled},
                    {"max_volume_nodes", c.entropy.max_volume_nodes},
                    {"surface_polar", c.entropy.surface_polar},
                    {"surface_azimuth", c.entropy.surface_azimuth}};
    j["oracle"] = {{"tolerance", c.oracle.tolerance},
                   {"iteration_tolerance", c.oracle.iteration_tolerance},
                   {"max_iter", c.oracle.max_iter}};
    j["output"] = {{"directory", c.output.directory},
                   {"node_table", c.output.node_table},
                   {"report", c.output.report},
                   {"field_dump", c.output.field_dump},
                   {"radiation_field", c.output.radiation_field}};
    j["seed"] = c.seed;
    j["threads"] = c.threads;
    return j;
}

//---------------------------------------------------------------------------//
Problem build_problem(RunConfig const& c)
{
    Problem p;
    auto section = [](std::string const& key, auto&& f) {
        try
        {
            f();
        }
        catch (Error const& e)
        {
            if (e.code() == ErrorCode::config_invalid)
                throw;
            bad(key, e.what());
        }
    };
    section("domain", [&] {
        p.domain = c.shape == "ball" ? ConvexDomain::ball(c.center, c.radius)
                                     : ConvexDomain::ellipsoid(c.center, c.semi_axes);
    });
    section("angular", [&] {
        p.angles = c.angular_rule == "octahedral26" ? build_octahedral26()
                                                    : build_angular(c.n_polar, c.n_azimuth);
    });
    section("spectral", [&] { p.spectrum = build_spectral(c.T_ref, c.n_frequencies); });
    section("medium", [&] {
        p.medium.absorption = make_profile(c.absorption);
        p.medium.scattering = make_profile(c.scattering);
        if (c.kernel.type == "henyey_greenstein")
            p.medium.kernel = ScatteringKernel::henyey_greenstein(p.angles, c.kernel.g);
        else if (c.kernel.type == "tabulated")
            p.medium.kernel = ScatteringKernel::tabulated(p.angles, c.kernel.values);
    });
    section("boundary", [&] {
        auto const& b = c.boundary;
        if (b.kind == "zero")
            p.boundary = BoundarySource::zero();
        else if (b.kind == "constant")
            p.boundary = BoundarySource::constant(b.value);
        else if (b.kind == "equilibrium")
            p.boundary = BoundarySource::equilibrium(b.T0);
        else if (b.kind == "dipole")
            p.boundary = BoundarySource::dipole(b.T0, b.amplitude, b.axis);
        else if (b.kind == "two_temperature")
            p.boundary = BoundarySource::two_temperature(b.T0, b.T_minus, b.axis);
        else
            p.boundary = BoundarySource::tabulated(b.nu, b.mu, b.values, b.axis);
    });
    p.h = c.h;
    p.ray_h = c.ray_h;
    p.options = c.solver;
    check_mode(p, c.mode);
    return p;
}

}  // namespace radheat
