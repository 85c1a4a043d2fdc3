//---------------------------------*-C++-*-----------------------------------//
// Copyright 2026 radheat developers.
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file solvers.hpp
//! Fixed-point temperature solvers, the H series and the dense oracle.
//---------------------------------------------------------------------------//
#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "transport.hpp"

namespace radheat
{
//---------------------------------------------------------------------------//
enum class Mode
{
    scattering,
    grey,
    spectral,
    combined
};

char const* to_string(Mode m);
Mode mode_from_string(std::string const& s);

//---------------------------------------------------------------------------//
struct SolverOptions
{
    double tol{1e-8};
    int max_iter{500};
    //! Relative L1 tolerance of the linear inner solves
    double inner_tol{1e-13};
    int inner_max_iter{5000};
    SelfCellRule self_cell{SelfCellRule::mass_consistent};
    //! Inversion cap for f^{-1}; 0 selects 2 nu_max
    double T_max{0};
    //! Truncation threshold of the H series certificate
    double h_eps{1e-10};
    //! Keep per-frequency mean intensities for scattering media
    bool keep_mean_intensity{true};
};

//---------------------------------------------------------------------------//
/*!
 * Complete description of one steady-state problem.
 */
struct Problem
{
    ConvexDomain domain{ConvexDomain::ball({0, 0, 0}, 1)};
    Medium medium;
    BoundarySource boundary;
    AngularGrid angles;
    SpectralGrid spectrum;
    double h{0.1};
    //! Ray step; 0 selects diameter / 128
    double ray_h{0};
    SolverOptions options;
};

//---------------------------------------------------------------------------//
struct SolverReport
{
    bool converged{false};
    int iterations{0};
    std::vector<double> residual_history;
    std::vector<double> contraction_estimates;
    //! max |r| / (4 pi max w)
    double conservation_norm{0};
    double conservation_abs{0};
    double wall_time{0};
    //! Duhamel terms used by the H certificate (combined mode)
    int truncation_terms{0};
    double truncation_bound{0};
    //! Largest kernel row mass
    double theta{0};
    //! Upper bound on spectral iterates
    double cap{0};
    double min_self_coefficient{0};
    //! Largest angular integral of H and its closed-form bound
    double h_integral_max{0};
    double h_bound{0};
    int inner_iterations{0};
    std::size_t n_nodes{0};
    std::size_t n_groups{0};
    std::string note;
};

//---------------------------------------------------------------------------//
/*!
 * Solved fields on the spatial nodes.
 *
 * \c w holds sigma T^4 in grey mode and f(T) otherwise; in scattering mode
 * T is the radiation temperature and w = sum_j q_j J_j. \c mean_intensity
 * holds J_j(x_m) at [m * F + j] when the medium scatters.
 */
struct Solution
{
    Mode mode{Mode::grey};
    std::shared_ptr<Discretization const> disc;
    std::vector<double> T;
    std::vector<double> w;
    std::vector<double> residual;
    std::vector<double> mean_intensity;
    //! Full radiance for angular-sweep solutions (anisotropic kernels)
    RadiationField radiance;
    SolverReport report;
};

//---------------------------------------------------------------------------//
// Check mode compatibility and solve
Solution solve(Problem const& p, Mode mode);

Solution solve_grey(Problem const& p);
Solution solve_spectral(Problem const& p);
Solution solve_scattering(Problem const& p);
Solution solve_combined(Problem const& p);

// Throw ConfigInvalid if the medium does not suit the mode
void check_mode(Problem const& p, Mode mode);

// Defect 4 pi (w - J[w]) of the solved fixed point
std::vector<double> conservation_residual(Problem const& p, Solution const& s);

//---------------------------------------------------------------------------//
// ANGULAR SWEEPS
//---------------------------------------------------------------------------//
/*!
 * Transport sweeps along backward rays for a set of frequency channels.
 *
 * For channel j the radiance is
 * g_j e^{-beta_j s} + int_0^s e^{-beta_j (s - xi)} [E_j + S_j] dxi,
 * where the emission E_j = a_j B_j(T) and the scattering source S are
 * tabulated on the lattice and interpolated along the ray. S is supplied
 * either per direction (anisotropic) or once for all directions.
 */
class SweepEngine
{
  public:
    struct Channel
    {
        double nu{1};
        double beta{0};
        double absorb{0};
    };

    SweepEngine(Discretization const& disc, std::vector<Channel> channels);

    //! Use sigma T^4 instead of B_nu(T) as emission (grey total channel)
    void set_grey_emission(bool grey) { grey_ = grey; }

    std::size_t n_channels() const { return channels_.size(); }

    //! Emission lattice [idx * F + j] from a temperature lattice
    void emission_lattice(std::vector<double> const& T_lattice,
                          std::vector<double>& E_lattice) const;

    /*!
     * Radiance of all channels along one ray ending at x.
     *
     * \param bdy boundary radiance per channel (nullptr for none)
     * \param E_lattice emission lattice (nullptr for no emission)
     * \param S_lattice scattering source, [(idx * A_s + dir) * F + j]
     * \param n_src number of source directions A_s (1 if isotropic)
     */
    void ray(Vec3 const& x,
             Vec3 const& n,
             double s,
             double const* bdy,
             double const* E_lattice,
             double const* S_lattice,
             std::size_t n_src,
             std::size_t dir,
             double* out) const;

    //! Full sweep over nodes and grid directions into I
    void sweep(std::vector<double> const* g_table,
               double const* E_lattice,
               double const* S_lattice,
               std::size_t n_src,
               RadiationField& I) const;

    //! Lattice scattering source alpha_s sum_i' w_i' K(i,i') I(m,i',j)
    void scattering_lattice(RadiationField const& I,
                            ScatteringKernel const& K,
                            std::vector<double> const& alpha_s,
                            std::vector<double>& lattice,
                            std::size_t& n_src) const;

    //! Lattice of per-node values v[m * F + j] (isotropic source)
    void node_lattice(std::vector<double> const& v, std::vector<double>& lattice) const;

  private:
    Discretization const& disc_;
    std::vector<Channel> channels_;
    bool grey_{false};
};

//---------------------------------------------------------------------------//
// Radiance I(m, i, j) on the grids reconstructed from a solution
RadiationField reconstruct_radiance(Problem const& p, Solution const& s);

//---------------------------------------------------------------------------//
// H SERIES
//---------------------------------------------------------------------------//
struct HResult
{
    //! int H dn at every node
    std::vector<double> integral;
    //! Angular integral of each series term, max over nodes
    std::vector<double> term_max;
    int terms{0};
    //! Closed-form bound a (1 - e^{-beta D}) / (a + s e^{-beta D})
    double bound{0};
    //! A-priori bound on the omitted tail
    double truncation_bound{0};
    bool monotone{true};
};

// Closed-form bound on the angular integral of H
double h_bound(double alpha_a, double alpha_s, double diameter);

// Number of series terms whose omitted tail is below eps
int h_series_terms(double alpha_a, double alpha_s, double diameter, double eps);

// Duhamel series for H by ray quadrature
HResult compute_H(Discretization const& disc,
                  double alpha_a,
                  double alpha_s,
                  ScatteringKernel const& kernel,
                  double eps);

//---------------------------------------------------------------------------//
// ORACLE
//---------------------------------------------------------------------------//
struct OracleResult
{
    std::vector<double> T;
    std::vector<double> w;
    RadiationField radiance;
    int iterations{0};
    double final_change{0};
};

//! Largest M * A * F accepted by oracle_solve
inline constexpr std::size_t oracle_max_unknowns = 100000;

// Dense joint fixed point over I(m, i, j) and T by direct ray marching
OracleResult oracle_solve(Problem const& p, Mode mode, double tol = 1e-10,
                          int max_iter = 20000);

}  // namespace radheat
