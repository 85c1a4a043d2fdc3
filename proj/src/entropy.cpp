//---------------------------------*-C++-*-----------------------------------//
// Copyright 2026 radheat developers.
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file entropy.cpp
//---------------------------------------------------------------------------//
#include "radheat/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "radheat/parallel.hpp"

namespace radheat
{
//---------------------------------------------------------------------------//
double entropy_density(double nu, double I)
{
    if (!(nu > 0))
    {
        fail(ErrorCode::non_positive_frequency,
             "frequency must be positive, got " + std::to_string(nu));
    }
    if (!(I >= 0))
    {
        fail(ErrorCode::negative_intensity,
             "radiance must be nonnegative, got " + std::to_string(I));
    }
    if (I == 0)
        return 0;
    double u = I / (2 * nu * nu * nu);
    return 2 * nu * nu * ((1 + u) * std::log1p(u) - u * std::log(u));
}

//---------------------------------------------------------------------------//
/*!
 * With Y = nu / T_nu = log(1 + 2 nu^3 / I) and x = nu / T the product is
 * (kappa / nu) (Y - x) (B(T) - I); both factors change sign together.
 */
double production_density(double nu, double T, double I, double kappa)
{
    if (!(I >= 0))
    {
        fail(ErrorCode::negative_intensity,
             "radiance must be nonnegative, got " + std::to_string(I));
    }
    if (kappa == 0)
        return 0;
    if (T == 0 && I == 0)
        return 0;
    if (T == 0 || I == 0)
        return std::numeric_limits<double>::infinity();
    double Y = std::log1p(2 * nu * nu * nu / I);
    double x = nu / T;
    double B = planck(nu, T);
    double v = kappa / nu * (Y - x) * (B - I);
    return v;
}

//---------------------------------------------------------------------------//
// BOUNDARY FLOWS
//---------------------------------------------------------------------------//
SurfaceQuadrature build_surface(ConvexDomain const& domain,
                                int n_polar,
                                int n_azimuth)
{
    if (n_polar < 2 || n_azimuth < 4)
    {
        fail(ErrorCode::too_coarse,
             "surface grid needs n_polar >= 2 and n_azimuth >= 4");
    }
    std::vector<double> mu, wmu;
    gauss_legendre(n_polar, -1, 1, mu, wmu);
    Vec3 c = domain.center();
    Vec3 ax = domain.semi_axes();
    double a = ax.x, b = ax.y, cz = ax.z;
    double dphi = 2 * pi / n_azimuth;
    SurfaceQuadrature sq;
    for (int k = 0; k < n_polar; ++k)
    {
        double ct = mu[k];
        double st = std::sqrt(std::max(0.0, 1 - ct * ct));
        for (int l = 0; l < n_azimuth; ++l)
        {
            double phi = (l + 0.5) * dphi;
            double cp = std::cos(phi), sp = std::sin(phi);
            Vec3 p{c.x + a * st * cp, c.y + b * st * sp, c.z + cz * ct};
            // x_mu cross x_phi, written per unit d(mu) d(phi)
            Vec3 nvec{b * cz * st * cp, a * cz * st * sp, a * b * ct};
            double len = norm(nvec);
            sq.points.push_back(p);
            sq.normals.push_back((1 / len) * nvec);
            sq.areas.push_back(len * wmu[k] * dphi);
        }
    }
    return sq;
}

EntropyReport boundary_flows(BoundaryRadiance const& b)
{
    std::size_t K = b.surface.size(), A = b.angles.size(), F = b.spectrum.size();
    std::vector<double> po(K), pi_(K), io(K), ii(K);
    parallel_for(K, [&](std::size_t lo, std::size_t hi, int) {
        for (std::size_t k = lo; k < hi; ++k)
        {
            Vec3 const& nx = b.surface.normals[k];
            double so = 0, si = 0, ro = 0, ri = 0;
            for (std::size_t i = 0; i < A; ++i)
            {
                double c = dot(b.angles.nodes[i], nx);
                if (c == 0)
                    continue;
                double hs = 0, es = 0;
                for (std::size_t j = 0; j < F; ++j)
                {
                    double I = b.values[(k * A + i) * F + j];
                    double q = b.spectrum.weights[j];
                    hs += q * entropy_density(b.spectrum.nodes[j], I);
                    es += q * I;
                }
                double wc = b.angles.weights[i] * c;
                if (c > 0)
                {
                    so += wc * hs;
                    ro += wc * es;
                }
                else
                {
                    si += wc * hs;
                    ri += wc * es;
                }
            }
            double dA = b.surface.areas[k];
            po[k] = dA * so;
            pi_[k] = dA * si;
            io[k] = dA * ro;
            ii[k] = dA * ri;
        }
    });
    EntropyReport r;
    r.phi_out = pairwise_sum(po.data(), K);
    r.phi_in = pairwise_sum(pi_.data(), K);
    r.i_out = pairwise_sum(io.data(), K);
    r.i_in = pairwise_sum(ii.data(), K);
    r.energy_defect = r.i_out + r.i_in;
    r.balance_defect = r.phi_out + r.phi_in;
    r.surface_nodes = K;
    return r;
}

//---------------------------------------------------------------------------//
// SOLUTION DIAGNOSTICS
//---------------------------------------------------------------------------//
namespace
{
//! Sweep engine and source lattices that reproduce a solved radiance field
struct FieldRays
{
    FieldRays(Problem const& p, Solution const& s)
        : disc(*s.disc), engine(disc, make_channels(p, disc, alpha_s, kappa))
    {
        std::size_t M = disc.space.size(), F = disc.spectrum.size();
        g = p.boundary.tabulate(disc.angles, disc.spectrum);
        if (s.mode != Mode::scattering && !s.T.empty())
            engine.emission_lattice(disc.lattice.extend(s.T), E_lat);
        if (!s.radiance.values.empty())
        {
            engine.scattering_lattice(s.radiance, p.medium.kernel, alpha_s, S_lat, n_src);
        }
        else if (!s.mean_intensity.empty())
        {
            std::vector<double> src(M * F);
            for (std::size_t m = 0; m < M; ++m)
            {
                for (std::size_t j = 0; j < F; ++j)
                    src[m * F + j] = alpha_s[j] * s.mean_intensity[m * F + j];
            }
            engine.node_lattice(src, S_lat);
        }
    }

    static std::vector<SweepEngine::Channel>
    make_channels(Problem const& p,
                  Discretization const& disc,
                  std::vector<double>& as,
                  std::vector<double>& ka)
    {
        std::size_t F = disc.spectrum.size();
        std::vector<SweepEngine::Channel> ch(F);
        as.resize(F);
        ka.resize(F);
        for (std::size_t j = 0; j < F; ++j)
        {
            double nu = disc.spectrum.nodes[j];
            ka[j] = p.medium.absorption(nu);
            as[j] = p.medium.scattering(nu);
            ch[j] = {nu, ka[j] + as[j], ka[j]};
        }
        return ch;
    }

    void ray(Vec3 const& x, std::size_t i, double s, double* out) const
    {
        engine.ray(x,
                   disc.angles.nodes[i],
                   s,
                   g.data() + i * disc.spectrum.size(),
                   E_lat.empty() ? nullptr : E_lat.data(),
                   S_lat.empty() ? nullptr : S_lat.data(),
                   n_src,
                   i,
                   out);
    }

    Discretization const& disc;
    std::vector<double> alpha_s;
    std::vector<double> kappa;
    SweepEngine engine;
    std::vector<double> g;
    std::vector<double> E_lat;
    std::vector<double> S_lat;
    std::size_t n_src{1};
};
}  // namespace

BoundaryRadiance solution_boundary_radiance(Problem const& p,
                                            Solution const& s,
                                            EntropyOptions const& opt)
{
    FieldRays rays(p, s);
    auto const& disc = rays.disc;
    BoundaryRadiance b;
    b.surface = build_surface(disc.domain, opt.surface_polar, opt.surface_azimuth);
    b.angles = disc.angles;
    b.spectrum = disc.spectrum;
    std::size_t K = b.surface.size(), A = b.angles.size(), F = b.spectrum.size();
    b.values.assign(K * A * F, 0.0);
    parallel_for(K, [&](std::size_t lo, std::size_t hi, int) {
        for (std::size_t k = lo; k < hi; ++k)
        {
            Vec3 const& y = b.surface.points[k];
            Vec3 const& ny = b.surface.normals[k];
            for (std::size_t i = 0; i < A; ++i)
            {
                double* out = b.values.data() + (k * A + i) * F;
                Vec3 const& n = b.angles.nodes[i];
                if (dot(n, ny) > 0)
                {
                    double len = disc.domain.chord_from_boundary(y, n);
                    rays.ray(y, i, len, out);
                }
                else
                {
                    for (std::size_t j = 0; j < F; ++j)
                        out[j] = rays.g[i * F + j];
                }
            }
        }
    });
    return b;
}

//---------------------------------------------------------------------------//
/*!
 * Volume production uses a strided subsample of the nodes, each weighted by
 * |Omega| / n. Radiance at a node is re-integrated along the grid rays; for
 * angular-sweep solutions the stored radiance is used.
 */
EntropyReport entropy_report(Problem const& p,
                             Solution const& s,
                             EntropyOptions const& opt)
{
    auto b = solution_boundary_radiance(p, s, opt);
    EntropyReport r = boundary_flows(b);

    FieldRays rays(p, s);
    auto const& disc = rays.disc;
    std::size_t M = disc.space.size(), A = disc.angles.size(),
                F = disc.spectrum.size();
    std::size_t n_sub = std::min(M, std::max<std::size_t>(1, opt.max_volume_nodes));
    std::vector<std::size_t> nodes(n_sub);
    for (std::size_t k = 0; k < n_sub; ++k)
        nodes[k] = k * M / n_sub;

    bool stored = !s.radiance.values.empty();
    auto const& K = p.medium.kernel;
    std::vector<double> absorb(n_sub), scatter(n_sub), lowest(n_sub);
    parallel_for(n_sub, [&](std::size_t lo, std::size_t hi, int) {
        std::vector<double> I(A * F), Jt(A * F);
        for (std::size_t k = lo; k < hi; ++k)
        {
            std::size_t m = nodes[k];
            for (std::size_t i = 0; i < A; ++i)
            {
                if (stored)
                {
                    for (std::size_t j = 0; j < F; ++j)
                        I[i * F + j] = s.radiance(m, i, j);
                }
                else
                {
                    rays.ray(disc.space.centers[m], i, disc.paths(m, i), &I[i * F]);
                }
            }
            double T = s.mode == Mode::scattering || s.T.empty() ? 0 : s.T[m];
            double pa = 0, low = std::numeric_limits<double>::infinity();
            for (std::size_t j = 0; j < F; ++j)
            {
                double nu = disc.spectrum.nodes[j];
                double acc = 0;
                for (std::size_t i = 0; i < A; ++i)
                {
                    double v = production_density(nu, T, std::max(0.0, I[i * F + j]),
                                                  rays.kappa[j]);
                    low = std::min(low, v);
                    acc += disc.angles.weights[i] * v;
                }
                pa += disc.spectrum.weights[j] * acc;
            }
            // Scattering part: alpha_s sum (1/T_nu) (K I - I) >= 0
            double ps = 0;
            for (std::size_t j = 0; j < F; ++j)
            {
                if (rays.alpha_s[j] == 0)
                    continue;
                double nu = disc.spectrum.nodes[j];
                for (std::size_t i = 0; i < A; ++i)
                {
                    double acc = 0;
                    if (K.is_isotropic())
                    {
                        for (std::size_t ip = 0; ip < A; ++ip)
                            acc += disc.angles.weights[ip] * I[ip * F + j];
                        acc /= four_pi;
                    }
                    else
                    {
                        for (std::size_t ip = 0; ip < A; ++ip)
                            acc += disc.angles.weights[ip] * K(i, ip) * I[ip * F + j];
                    }
                    Jt[i * F + j] = acc;
                }
                double acc = 0;
                for (std::size_t i = 0; i < A; ++i)
                {
                    double Ii = std::max(0.0, I[i * F + j]);
                    double gain = Jt[i * F + j];
                    if (Ii == 0)
                        continue;
                    double inv_T = std::log1p(2 * nu * nu * nu / Ii) / nu;
                    acc += disc.angles.weights[i] * inv_T * (gain - Ii);
                }
                ps += disc.spectrum.weights[j] * rays.alpha_s[j] * acc;
            }
            absorb[k] = pa;
            scatter[k] = ps;
            lowest[k] = low;
        }
    });
    double cell = disc.domain.volume() / double(n_sub);
    r.scattering_production = cell * pairwise_sum(scatter.data(), n_sub);
    r.production_volume_integral
        = cell * pairwise_sum(absorb.data(), n_sub) + r.scattering_production;
    r.min_pointwise_production = n_sub ? *std::min_element(lowest.begin(), lowest.end())
                                       : 0;
    r.volume_nodes = n_sub;
    r.balance_defect = r.phi_out + r.phi_in - r.production_volume_integral;
    return r;
}

//---------------------------------------------------------------------------//
// MAX-ENTROPY PROBE
//---------------------------------------------------------------------------//
namespace
{
//! Outward flows over the hemisphere mu > 0 of a grid about +z
struct Hemisphere
{
    Hemisphere(AngularGrid const& angles, SpectralGrid const& spectrum)
        : spec(spectrum)
    {
        for (std::size_t i = 0; i < angles.size(); ++i)
        {
            double mu = angles.nodes[i].z;
            if (mu > 0)
                weight.push_back(angles.weights[i] * mu);
        }
    }

    double radiation(std::vector<double> const& I) const
    {
        std::size_t F = spec.size();
        double sum = 0;
        for (std::size_t i = 0; i < weight.size(); ++i)
        {
            for (std::size_t j = 0; j < F; ++j)
                sum += weight[i] * spec.weights[j] * I[i * F + j];
        }
        return sum;
    }

    double entropy(std::vector<double> const& I) const
    {
        std::size_t F = spec.size();
        double sum = 0;
        for (std::size_t i = 0; i < weight.size(); ++i)
        {
            for (std::size_t j = 0; j < F; ++j)
                sum += weight[i] * spec.weights[j] * entropy_density(spec.nodes[j], I[i * F + j]);
        }
        return sum;
    }

    SpectralGrid const& spec;
    std::vector<double> weight;
};
}  // namespace

ProbeResult max_entropy_probe(AngularGrid const& angles,
                              SpectralGrid const& spectrum,
                              double i_out_target,
                              double T0,
                              int n_perturbations,
                              std::uint64_t seed,
                              double amplitude)
{
    if (!(i_out_target > 0))
        fail(ErrorCode::invalid_argument, "target outward radiation must be positive");
    Hemisphere hemi(angles, spectrum);
    if (hemi.weight.empty())
        fail(ErrorCode::empty_grid, "angular grid has no outward directions");
    double wsum = 0;
    for (double w : hemi.weight)
        wsum += w;
    std::size_t D = hemi.weight.size(), F = spectrum.size();

    EmissionMap f(AbsorptionProfile(1.0), spectrum, 2 * spectrum.nu_max);
    ProbeResult res;
    res.T_constant = f.inverse(i_out_target / wsum, T0 > 0 ? T0 : -1);
    std::vector<double> base(D * F), Y(D * F);
    for (std::size_t i = 0; i < D; ++i)
    {
        for (std::size_t j = 0; j < F; ++j)
        {
            base[i * F + j] = planck(spectrum.nodes[j], res.T_constant);
            Y[i * F + j] = spectrum.nodes[j] / res.T_constant;
        }
    }
    // Rescale so the constant profile carries the target exactly
    double c0 = i_out_target / hemi.radiation(base);
    for (auto& v : base)
        v *= c0;
    res.phi_constant = hemi.entropy(base);

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> xi(-1.0, 1.0);
    std::vector<double> I(D * F);
    res.margin = std::numeric_limits<double>::infinity();
    res.constant_wins = true;
    for (int t = 0; t < n_perturbations; ++t)
    {
        for (std::size_t k = 0; k < D * F; ++k)
        {
            double nu = spectrum.nodes[k % F];
            double y = Y[k] * (1 + amplitude * xi(rng));
            I[k] = 2 * nu * nu * nu / std::expm1(y);
        }
        double scale = i_out_target / hemi.radiation(I);
        for (auto& v : I)
            v *= scale;
        double deficit = res.phi_constant - hemi.entropy(I);
        res.deficits.push_back(deficit);
        res.margin = std::min(res.margin, deficit);
        if (!(deficit > 0))
            res.constant_wins = false;
    }
    if (n_perturbations <= 0)
        res.margin = 0;
    return res;
}

}  // namespace radheat
