//---------------------------------*-C++-*-----------------------------------//
// Copyright 2026 radheat developers.
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file quadrature.cpp
//---------------------------------------------------------------------------//
#include "radheat/quadrature.hpp"

#include <cmath>
#include <gsl/gsl_integration.h>

namespace radheat
{
//---------------------------------------------------------------------------//
void gauss_legendre(int n,
                    double a,
                    double b,
                    std::vector<double>& x,
                    std::vector<double>& w)
{
    if (n < 1)
        fail(ErrorCode::invalid_argument, "Gauss-Legendre order must be >= 1");
    gsl_integration_glfixed_table* table = gsl_integration_glfixed_table_alloc(n);
    x.resize(n);
    w.resize(n);
    for (int i = 0; i < n; ++i)
    {
        gsl_integration_glfixed_point(a, b, i, &x[i], &w[i], table);
    }
    gsl_integration_glfixed_table_free(table);
}

//---------------------------------------------------------------------------//
AngularGrid build_angular(int n_polar, int n_azimuth)
{
    if (n_polar < 2 || n_azimuth < 4)
    {
        fail(ErrorCode::too_coarse,
             "angular grid needs n_polar >= 2 and n_azimuth >= 4");
    }
    std::vector<double> mu, wmu;
    gauss_legendre(n_polar, -1, 1, mu, wmu);

    AngularGrid g;
    g.nodes.reserve(n_polar * n_azimuth);
    g.weights.reserve(n_polar * n_azimuth);
    double dphi = 2 * pi / n_azimuth;
    for (int k = 0; k < n_polar; ++k)
    {
        double st = std::sqrt((1 - mu[k]) * (1 + mu[k]));
        for (int l = 0; l < n_azimuth; ++l)
        {
            double phi = (l + 0.5) * dphi;
            g.nodes.push_back({st * std::cos(phi), st * std::sin(phi), mu[k]});
            g.weights.push_back(wmu[k] * dphi);
        }
    }
    return g;
}

//---------------------------------------------------------------------------//
/*!
 * Vertices, edge midpoints and face centers of the octahedron.
 *
 * Weights 1/21, 4/105 and 9/280 (times 4 pi) integrate all spherical
 * harmonics through degree 7 exactly.
 */
AngularGrid build_octahedral26()
{
    AngularGrid g;
    auto add = [&g](Vec3 v, double w) {
        g.nodes.push_back(v);
        g.weights.push_back(4 * pi * w);
    };
    for (int a = 0; a < 3; ++a)
    {
        for (int sgn : {1, -1})
        {
            double v[3] = {0, 0, 0};
            v[a] = sgn;
            add({v[0], v[1], v[2]}, 1.0 / 21);
        }
    }
    double s = 1 / std::sqrt(2.0);
    for (int a = 0; a < 3; ++a)
    {
        for (int b = a + 1; b < 3; ++b)
        {
            for (int sa : {1, -1})
            {
                for (int sb : {1, -1})
                {
                    double v[3] = {0, 0, 0};
                    v[a] = sa * s;
                    v[b] = sb * s;
                    add({v[0], v[1], v[2]}, 4.0 / 105);
                }
            }
        }
    }
    double t = 1 / std::sqrt(3.0);
    for (int sx : {1, -1})
    {
        for (int sy : {1, -1})
        {
            for (int sz : {1, -1})
            {
                add({sx * t, sy * t, sz * t}, 9.0 / 280);
            }
        }
    }
    return g;
}

//---------------------------------------------------------------------------//
/*!
 * Panels [0, e_1], [e_1, e_2], ... with e_k = nu_max 2^{k-P}.
 *
 * P = ceil(n_nodes / 8); the returned grid holds 8 P nodes.
 */
SpectralGrid build_spectral(double T_ref, int n_nodes)
{
    if (!(T_ref > 0))
    {
        fail(ErrorCode::invalid_argument,
             "reference temperature must be positive");
    }
    if (n_nodes < spectral_panel_points)
    {
        fail(ErrorCode::too_coarse,
             "spectral grid needs at least 8 nodes");
    }
    int panels = (n_nodes + spectral_panel_points - 1) / spectral_panel_points;
    SpectralGrid g;
    g.nu_max = spectral_cutoff_ratio * T_ref;
    std::vector<double> x, w;
    double lo = 0;
    for (int k = 1; k <= panels; ++k)
    {
        double hi = std::ldexp(g.nu_max, k - panels);
        gauss_legendre(spectral_panel_points, lo, hi, x, w);
        g.nodes.insert(g.nodes.end(), x.begin(), x.end());
        g.weights.insert(g.weights.end(), w.begin(), w.end());
        lo = hi;
    }
    return g;
}

//---------------------------------------------------------------------------//
SpatialGrid build_spatial(ConvexDomain const& domain, double h)
{
    if (!(h > 0) || !(h <= domain.diameter() / 4))
    {
        fail(ErrorCode::too_coarse,
             "spatial spacing must satisfy 0 < h <= diameter/4");
    }
    Vec3 const& c = domain.center();
    Vec3 const& a = domain.semi_axes();
    int half[3];
    for (int d = 0; d < 3; ++d)
        half[d] = int(std::floor(a[d] / h));

    SpatialGrid g;
    g.h = h;
    g.origin = {c.x - half[0] * h, c.y - half[1] * h, c.z - half[2] * h};
    for (int d = 0; d < 3; ++d)
        g.dims[d] = 2 * half[d] + 1;
    g.node_of.assign(g.lattice_size(), -1);
    for (int i = 0; i < g.dims[0]; ++i)
    {
        for (int j = 0; j < g.dims[1]; ++j)
        {
            for (int k = 0; k < g.dims[2]; ++k)
            {
                Vec3 x{c.x + (i - half[0]) * h,
                       c.y + (j - half[1]) * h,
                       c.z + (k - half[2]) * h};
                if (!domain.contains(x))
                    continue;
                std::size_t idx = g.flat(i, j, k);
                g.node_of[idx] = int(g.centers.size());
                g.centers.push_back(x);
                g.lattice_index.push_back(idx);
            }
        }
    }
    if (g.centers.empty())
        fail(ErrorCode::too_coarse, "no lattice point lies inside the domain");
    return g;
}

//---------------------------------------------------------------------------//
/*!
 * Simpson weights on xi_k = k s / n, k = 0..n.
 *
 * An odd step count is raised by one.
 */
std::vector<std::pair<double, double>> ray_nodes(RayHit const& hit, int n_steps)
{
    if (n_steps < 2)
        fail(ErrorCode::invalid_argument, "ray quadrature needs >= 2 steps");
    if (n_steps % 2)
        ++n_steps;
    double d = hit.path_length / n_steps;
    std::vector<std::pair<double, double>> out(n_steps + 1);
    for (int k = 0; k <= n_steps; ++k)
    {
        double c = (k == 0 || k == n_steps) ? 1 : (k % 2 ? 4 : 2);
        out[k] = {k * d, c * d / 3};
    }
    return out;
}

}  // namespace radheat
