//---------------------------------*-C++-*-----------------------------------//
// Copyright 2026 radheat developers.
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file quadrature.hpp
//! Angular, spectral, spatial and line discretizations.
//---------------------------------------------------------------------------//
#pragma once

#include <array>
#include <cstddef>
#include <utility>
#include <vector>

#include "core.hpp"
#include "geometry.hpp"

namespace radheat
{
//---------------------------------------------------------------------------//
/*!
 * Quadrature on the unit sphere; weights sum to 4 pi.
 */
struct AngularGrid
{
    std::vector<Vec3> nodes;
    std::vector<double> weights;

    std::size_t size() const { return nodes.size(); }
};

//---------------------------------------------------------------------------//
/*!
 * Quadrature on [0, nu_max].
 */
struct SpectralGrid
{
    std::vector<double> nodes;
    std::vector<double> weights;
    double nu_max{0};

    std::size_t size() const { return nodes.size(); }
};

//---------------------------------------------------------------------------//
/*!
 * Regular lattice x = origin + h * (i, j, k) covering a domain.
 *
 * Node m is the m-th interior lattice point in row-major (i slowest) order;
 * \c node_of maps a flattened lattice index to its node or -1.
 */
struct SpatialGrid
{
    double h{0};
    Vec3 origin;
    std::array<int, 3> dims{0, 0, 0};
    std::vector<Vec3> centers;
    std::vector<std::size_t> lattice_index;
    std::vector<int> node_of;

    std::size_t size() const { return centers.size(); }
    double cell_volume() const { return h * h * h; }
    double total_volume() const { return cell_volume() * centers.size(); }
    std::size_t lattice_size() const
    {
        return std::size_t(dims[0]) * dims[1] * dims[2];
    }
    std::size_t flat(int i, int j, int k) const
    {
        return (std::size_t(i) * dims[1] + j) * dims[2] + k;
    }
};

//---------------------------------------------------------------------------//
// Gauss-Legendre points and weights on [a, b]
void gauss_legendre(int n,
                    double a,
                    double b,
                    std::vector<double>& x,
                    std::vector<double>& w);

// Product rule: Gauss-Legendre in cos(theta) times uniform azimuth
AngularGrid build_angular(int n_polar, int n_azimuth);

// 26-point octahedrally symmetric rule, exact for degree 7
AngularGrid build_octahedral26();

// Composite Gauss-Legendre on [0, 50 T_ref] with geometric panels
SpectralGrid build_spectral(double T_ref, int n_nodes);

// Cubic lattice with interior cell centers
SpatialGrid build_spatial(ConvexDomain const& domain, double h);

// Composite Simpson nodes on [0, s] along a backward ray
std::vector<std::pair<double, double>>
ray_nodes(RayHit const& hit, int n_steps);

//! Points per Gauss-Legendre panel in build_spectral
inline constexpr int spectral_panel_points = 8;
//! Ratio nu_max / T_ref
inline constexpr double spectral_cutoff_ratio = 50;

}  // namespace radheat
