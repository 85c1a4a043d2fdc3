//---------------------------------*-C++-*-----------------------------------//
// Copyright 2026 radheat developers.
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file entropy.hpp
//! Radiation entropy, its production and its boundary flows.
//---------------------------------------------------------------------------//
#pragma once

#include <cstdint>
#include <vector>

#include "solvers.hpp"

namespace radheat
{
//---------------------------------------------------------------------------//
/*!
 * Entropy radiance 2 nu^2 [(1 + u) log(1 + u) - u log u], u = I / (2 nu^3).
 */
double entropy_density(double nu, double I);

/*!
 * kappa (1/T_nu - 1/T) (B_nu(T) - I) with T_nu the brightness temperature
 * of I. Nonnegative; +inf when exactly one of I and T vanishes.
 */
double production_density(double nu, double T, double I, double kappa);

//---------------------------------------------------------------------------//
struct EntropyReport
{
    //! Volume integral of production (absorption plus scattering parts)
    double production_volume_integral{0};
    //! Part of the integral due to scattering
    double scattering_production{0};
    double min_pointwise_production{0};
    //! Signed inward flows (<= 0) and outward flows (>= 0)
    double phi_in{0};
    double phi_out{0};
    double i_in{0};
    double i_out{0};
    //! phi_out + phi_in - production_volume_integral
    double balance_defect{0};
    //! i_out + i_in
    double energy_defect{0};
    std::size_t volume_nodes{0};
    std::size_t surface_nodes{0};
};

//---------------------------------------------------------------------------//
//! Quadrature over the boundary surface
struct SurfaceQuadrature
{
    std::vector<Vec3> points;
    std::vector<Vec3> normals;
    std::vector<double> areas;

    std::size_t size() const { return points.size(); }
};

// Gauss-Legendre in cos(theta) times uniform azimuth on the ellipsoid
SurfaceQuadrature build_surface(ConvexDomain const& domain,
                                int n_polar,
                                int n_azimuth);

//! Radiance on the boundary for every grid direction, [(k * A + i) * F + j]
struct BoundaryRadiance
{
    SurfaceQuadrature surface;
    AngularGrid angles;
    SpectralGrid spectrum;
    std::vector<double> values;
};

// Phi, i flows by surface x angle x frequency quadrature
EntropyReport boundary_flows(BoundaryRadiance const& b);

//---------------------------------------------------------------------------//
struct EntropyOptions
{
    //! Nodes used for the volume production integral (strided subsample)
    std::size_t max_volume_nodes{400};
    int surface_polar{16};
    int surface_azimuth{32};
};

// Boundary radiance of a solved problem: g inward, formal solution outward
BoundaryRadiance solution_boundary_radiance(Problem const& p,
                                            Solution const& s,
                                            EntropyOptions const& opt);

// Production integral and boundary flows of a solved problem
EntropyReport entropy_report(Problem const& p,
                             Solution const& s,
                             EntropyOptions const& opt = {});

//---------------------------------------------------------------------------//
struct ProbeResult
{
    //! Constant profile strictly beats every perturbation
    bool constant_wins{false};
    //! min over trials of phi_constant - phi_trial
    double margin{0};
    double phi_constant{0};
    double T_constant{0};
    std::vector<double> deficits;
};

/*!
 * Compare outward entropy flow of the black-body profile at fixed total
 * outward radiation with randomly perturbed profiles.
 *
 * Perturbations multiply Y = nu / T_nu per direction and frequency by
 * (1 + amplitude * xi), xi uniform in [-1, 1], then scale Z = 1/(e^Y - 1)
 * so the outward radiation matches.
 */
ProbeResult max_entropy_probe(AngularGrid const& angles,
                              SpectralGrid const& spectrum,
                              double i_out_target,
                              double T0,
                              int n_perturbations,
                              std::uint64_t seed,
                              double amplitude = 0.1);

}  // namespace radheat
