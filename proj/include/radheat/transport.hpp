//---------------------------------*-C++-*-----------------------------------//
// Copyright 2026 radheat developers.
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file transport.hpp
//! Media, boundary sources, ray integration and volume kernels.
//---------------------------------------------------------------------------//
#pragma once

#include <array>
#include <complex>
#include <map>
#include <memory>
#include <vector>

#include "geometry.hpp"
#include "quadrature.hpp"
#include "spectral.hpp"

namespace radheat
{
//---------------------------------------------------------------------------//
// KERNEL FUNCTION
//---------------------------------------------------------------------------//
/*!
 * beta exp(-beta r) / (4 pi r^2): integrates to one over all space.
 *
 * This is the angle-integrated form of attenuated transport: for any u,
 * (1/4pi) int dn int_0^s e^{-beta xi} beta u(x - xi n) dxi equals the
 * volume integral of this kernel against u over the domain.
 */
double kernel_density(double beta, double r);

namespace testing
{
//! Scale applied to kernel_density (fault injection for validation)
void set_kernel_scale(double s);
double kernel_scale();
}  // namespace testing

//---------------------------------------------------------------------------//
// MEDIUM
//---------------------------------------------------------------------------//
/*!
 * Angular redistribution K(n_i, n_i') on a fixed angular grid.
 *
 * Tabulated kernels are renormalized so that sum_i w_i K(n_i, n') = 1 for
 * every incoming direction n'; the largest correction is kept.
 */
class ScatteringKernel
{
  public:
    static ScatteringKernel isotropic();
    static ScatteringKernel tabulated(AngularGrid const& grid,
                                      std::vector<double> values);
    static ScatteringKernel henyey_greenstein(AngularGrid const& grid, double g);

    bool is_isotropic() const { return values_.empty(); }
    //! K(n_i, n_ip); requires the grid used at construction
    double operator()(std::size_t i, std::size_t ip) const;
    std::size_t grid_size() const { return n_; }
    //! max |factor - 1| over renormalized columns
    double correction() const { return correction_; }
    //! Henyey-Greenstein asymmetry (0 for others)
    double asymmetry() const { return g_; }

  private:
    std::size_t n_{0};
    std::vector<double> values_;
    double correction_{0};
    double g_{0};
};

//---------------------------------------------------------------------------//
struct Medium
{
    AbsorptionProfile absorption;
    AbsorptionProfile scattering;
    ScatteringKernel kernel{ScatteringKernel::isotropic()};
};

//---------------------------------------------------------------------------//
/*!
 * Incoming radiance g_nu(n) on the boundary.
 *
 * All variants depend only on propagation direction and frequency.
 */
class BoundarySource
{
  public:
    enum class Kind
    {
        zero,
        constant_isotropic,
        equilibrium,
        dipole,
        two_temperature,
        tabulated
    };

    static BoundarySource zero();
    static BoundarySource constant(double value);
    static BoundarySource equilibrium(double T0);
    //! B_nu(T0) (1 + amplitude n.axis), |amplitude| <= 1
    static BoundarySource dipole(double T0, double amplitude, Vec3 axis);
    //! B_nu(T_plus) for n.axis > 0, else B_nu(T_minus)
    static BoundarySource two_temperature(double T_plus, double T_minus, Vec3 axis);
    //! Bilinear table over (nu, mu = n.axis)
    static BoundarySource tabulated(std::vector<double> nu,
                                    std::vector<double> mu,
                                    std::vector<double> values,
                                    Vec3 axis);

    double operator()(Vec3 const& n, double nu) const;

    //! Values g[i * F + j] on an angular x spectral grid
    std::vector<double> tabulate(AngularGrid const& angles,
                                 SpectralGrid const& spectrum) const;

    /*!
     * Frequency integral of g per direction.
     *
     * Black-body kinds integrate in closed form over all frequencies (so
     * that equilibrium data matches sigma T^4 exactly); the others use the
     * spectral grid.
     */
    std::vector<double> frequency_integrals(AngularGrid const& angles,
                                            SpectralGrid const& spectrum) const;

    Kind kind() const { return kind_; }
    double temperature() const { return T0_; }

  private:
    Kind kind_{Kind::zero};
    double value_{0};
    double T0_{0};
    double T1_{0};
    Vec3 axis_{0, 0, 1};
    std::vector<double> nu_;
    std::vector<double> mu_;
    std::vector<double> table_;
};

//---------------------------------------------------------------------------//
// LATTICE INTERPOLATION
//---------------------------------------------------------------------------//
/*!
 * Trilinear interpolation of nodal values over the whole lattice box.
 *
 * Exterior lattice points are filled outward, layer by layer, with the
 * mean of their already known 26-neighbors. Query points are clamped to the
 * box. The fill pattern depends only on the grid and is computed once.
 */
class LatticeInterpolator
{
  public:
    struct Stencil
    {
        std::array<std::size_t, 8> index;
        std::array<double, 8> weight;
    };

    explicit LatticeInterpolator(SpatialGrid const& grid);

    //! Lattice array (size lattice_size) from nodal values
    void extend(double const* nodal, std::vector<double>& lattice) const;
    std::vector<double> extend(std::vector<double> const& nodal) const;
    //! Interleaved components: nodal[m * ncomp + c] -> lattice[idx * ncomp + c]
    void extend(double const* nodal,
                std::size_t ncomp,
                std::vector<double>& lattice) const;

    Stencil stencil(Vec3 const& p) const;

    static double eval(Stencil const& st, double const* lattice)
    {
        double v = 0;
        for (int c = 0; c < 8; ++c)
            v += st.weight[c] * lattice[st.index[c]];
        return v;
    }

    std::size_t lattice_size() const { return size_; }

  private:
    Vec3 origin_;
    double h_;
    std::array<int, 3> dims_;
    std::size_t size_;
    std::vector<std::size_t> node_index_;
    std::vector<std::size_t> fill_cell_;
    std::vector<std::size_t> fill_offset_;
    std::vector<std::size_t> fill_neighbor_;
};

//---------------------------------------------------------------------------//
// RAY INTEGRATION
//---------------------------------------------------------------------------//
/*!
 * Weights omega_k with sum_k omega_k v_k = int_0^s e^{-beta (s - xi)} v(xi)
 * for v piecewise linear through v_k at xi_k = k s / K.
 *
 * Exact for any beta >= 0 and any linear segment data.
 */
void exponential_weights(double s, int K, double beta, double* omega);

//! Step count for a ray of length s
int ray_steps(double s, double ray_h);

//---------------------------------------------------------------------------//
//! Backward path lengths s(x_m, n_i), stored [m * A + i]
struct PathTable
{
    std::size_t n_nodes{0};
    std::size_t n_dirs{0};
    std::vector<double> s;

    double operator()(std::size_t m, std::size_t i) const
    {
        return s[m * n_dirs + i];
    }
};

PathTable build_paths(ConvexDomain const& domain,
                      SpatialGrid const& grid,
                      AngularGrid const& angles);

//---------------------------------------------------------------------------//
/*!
 * Everything needed to integrate along rays through the discretized body.
 */
struct Discretization
{
    Discretization(ConvexDomain domain,
                   double h,
                   AngularGrid angles,
                   SpectralGrid spectrum,
                   double ray_h = 0);

    ConvexDomain domain;
    SpatialGrid space;
    AngularGrid angles;
    SpectralGrid spectrum;
    double ray_h;
    LatticeInterpolator lattice;
    PathTable paths;
};

//---------------------------------------------------------------------------//
// Radiance from absorption and emission at temperature T along the ray
double formal_solution_absorption(Vec3 const& x,
                                  Vec3 const& n,
                                  double nu,
                                  std::vector<double> const& T_lattice,
                                  BoundarySource const& g,
                                  AbsorptionProfile const& alpha,
                                  Discretization const& disc);

// Same, for a ray of given length ending at x (x may lie on the boundary)
double formal_solution_absorption(Vec3 const& x,
                                  Vec3 const& n,
                                  double s,
                                  double nu,
                                  std::vector<double> const& T_lattice,
                                  BoundarySource const& g,
                                  AbsorptionProfile const& alpha,
                                  Discretization const& disc);

// Absorbed boundary power sum_j q_j int dn alpha_j g_j(n) e^{-alpha_j s}
double neg_div_S(Vec3 const& x,
                 BoundarySource const& g,
                 AbsorptionProfile const& alpha,
                 Discretization const& disc);

//---------------------------------------------------------------------------//
// VOLUME KERNELS
//---------------------------------------------------------------------------//
/*!
 * Discrete convolution with the kernel over lattice cells, self excluded.
 *
 * out[m] = sum_{m' != m} kernel_density(beta, |x_m - x_m'|) h^3 u[m'],
 * evaluated by zero-padded FFT on the lattice. Kernel spectra are cached
 * per beta.
 */
class LatticeConvolver
{
  public:
    explicit LatticeConvolver(SpatialGrid const& grid);
    ~LatticeConvolver();
    LatticeConvolver(LatticeConvolver const&) = delete;
    LatticeConvolver& operator=(LatticeConvolver const&) = delete;

    void apply(double beta, double const* u, double* out);

    //! O(M^2) reference evaluation of the same sum
    static void apply_direct(SpatialGrid const& grid,
                             double beta,
                             double const* u,
                             double* out);

  private:
    struct Plans;
    std::vector<std::complex<double>> const& spectrum(double beta);

    SpatialGrid const& grid_;
    std::array<int, 3> padded_;
    std::unique_ptr<Plans> plans_;
    std::map<double, std::vector<std::complex<double>>> cache_;
};

//---------------------------------------------------------------------------//
enum class SelfCellRule
{
    mass_consistent,
    equivalent_ball
};

//! Kernel integral over the volume-equivalent ball of one cell
double equivalent_ball_self(double beta, double cell_volume);

/*!
 * Nystrom discretization of u -> int_Omega kernel_density(beta, |x - eta|)
 * u(eta) d eta at the nodes, including the self cell.
 *
 * The mass-consistent self coefficient makes each row sum equal the exact
 * kernel mass over the domain, 1 - (1/4pi) int e^{-beta s(x,n)} dn, as
 * computed on the angular grid.
 */
class PeierlsKernel
{
  public:
    PeierlsKernel(LatticeConvolver& conv,
                  Discretization const& disc,
                  double beta,
                  SelfCellRule rule);

    void apply(double const* u, double* out) const;

    double beta() const { return beta_; }
    std::vector<double> const& self() const { return self_; }
    std::vector<double> const& row_mass() const { return row_mass_; }
    //! (1/4pi) sum_i w_i e^{-beta s(x_m, n_i)}
    std::vector<double> const& escape() const { return escape_; }

  private:
    LatticeConvolver& conv_;
    double beta_;
    std::vector<double> self_;
    std::vector<double> row_mass_;
    std::vector<double> escape_;
};

//---------------------------------------------------------------------------//
// Grey kernel applied at node m with the equivalent-ball self cell
double apply_grey_kernel(std::vector<double> const& w,
                         std::size_t m,
                         SpatialGrid const& grid);

// Spectral kernel at node m; w holds f(T) values for the given map
double apply_spectral_kernel(std::vector<double> const& w,
                             std::size_t m,
                             EmissionMap const& f,
                             AbsorptionProfile const& alpha,
                             SpatialGrid const& grid);

//---------------------------------------------------------------------------//
// RADIATION FIELD
//---------------------------------------------------------------------------//
//! I[(m * A + i) * F + j]
struct RadiationField
{
    std::size_t n_nodes{0};
    std::size_t n_dirs{0};
    std::size_t n_freq{0};
    std::vector<double> values;

    double& operator()(std::size_t m, std::size_t i, std::size_t j)
    {
        return values[(m * n_dirs + i) * n_freq + j];
    }
    double operator()(std::size_t m, std::size_t i, std::size_t j) const
    {
        return values[(m * n_dirs + i) * n_freq + j];
    }
};

// Energy flux sum_j q_j sum_i w_i n_i I at node m
Vec3 flux(RadiationField const& I,
          std::size_t m,
          AngularGrid const& angles,
          SpectralGrid const& spectrum);

}  // namespace radheat
