//---------------------------------*-C++-*-----------------------------------//
// Copyright 2026 radheat developers.
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file transport.cpp
//---------------------------------------------------------------------------//
#include "radheat/transport.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fftw3.h>

#include "radheat/parallel.hpp"

namespace radheat
{
namespace
{
std::atomic<double> g_kernel_scale{1.0};
}

namespace testing
{
void set_kernel_scale(double s)
{
    g_kernel_scale = s;
}
double kernel_scale()
{
    return g_kernel_scale;
}
}  // namespace testing

//---------------------------------------------------------------------------//
double kernel_density(double beta, double r)
{
    if (!(r > 0) || beta == 0)
        return 0;
    return g_kernel_scale * beta * std::exp(-beta * r) / (four_pi * r * r);
}

//---------------------------------------------------------------------------//
// SCATTERING KERNEL
//---------------------------------------------------------------------------//
ScatteringKernel ScatteringKernel::isotropic()
{
    return {};
}

ScatteringKernel
ScatteringKernel::tabulated(AngularGrid const& grid, std::vector<double> values)
{
    std::size_t n = grid.size();
    if (values.size() != n * n)
    {
        fail(ErrorCode::invalid_argument,
             "scattering table must be A x A for the angular grid");
    }
    for (double v : values)
    {
        if (!(v >= 0) || !std::isfinite(v))
        {
            fail(ErrorCode::invalid_argument,
                 "scattering table entries must be finite and nonnegative");
        }
    }
    ScatteringKernel k;
    k.n_ = n;
    for (std::size_t ip = 0; ip < n; ++ip)
    {
        double col = 0;
        for (std::size_t i = 0; i < n; ++i)
            col += grid.weights[i] * values[i * n + ip];
        if (!(col > 0))
        {
            fail(ErrorCode::invalid_argument,
                 "scattering table has an all-zero column");
        }
        for (std::size_t i = 0; i < n; ++i)
            values[i * n + ip] /= col;
        k.correction_ = std::max(k.correction_, std::fabs(1 / col - 1));
    }
    k.values_ = std::move(values);
    return k;
}

ScatteringKernel ScatteringKernel::henyey_greenstein(AngularGrid const& grid,
                                                     double g)
{
    if (!(std::fabs(g) < 1))
        fail(ErrorCode::invalid_argument, "asymmetry g must satisfy |g| < 1");
    std::size_t n = grid.size();
    std::vector<double> values(n * n);
    for (std::size_t i = 0; i < n; ++i)
    {
        for (std::size_t ip = 0; ip < n; ++ip)
        {
            double mu = dot(grid.nodes[i], grid.nodes[ip]);
            double den = 1 + g * g - 2 * g * mu;
            values[i * n + ip] = (1 - g * g) / (four_pi * den * std::sqrt(den));
        }
    }
    auto k = tabulated(grid, std::move(values));
    k.g_ = g;
    return k;
}

double ScatteringKernel::operator()(std::size_t i, std::size_t ip) const
{
    if (values_.empty())
        return 1 / four_pi;
    return values_[i * n_ + ip];
}

//---------------------------------------------------------------------------//
// BOUNDARY SOURCE
//---------------------------------------------------------------------------//
BoundarySource BoundarySource::zero()
{
    return {};
}

BoundarySource BoundarySource::constant(double value)
{
    if (!(value >= 0) || !std::isfinite(value))
        fail(ErrorCode::invalid_argument, "boundary radiance must be >= 0");
    BoundarySource b;
    b.kind_ = Kind::constant_isotropic;
    b.value_ = value;
    return b;
}

BoundarySource BoundarySource::equilibrium(double T0)
{
    if (!(T0 > 0) || !std::isfinite(T0))
        fail(ErrorCode::non_positive_temperature, "boundary temperature must be > 0");
    BoundarySource b;
    b.kind_ = Kind::equilibrium;
    b.T0_ = T0;
    return b;
}

BoundarySource BoundarySource::dipole(double T0, double amplitude, Vec3 axis)
{
    auto b = equilibrium(T0);
    if (!(std::fabs(amplitude) <= 1))
        fail(ErrorCode::invalid_argument, "dipole amplitude must satisfy |a| <= 1");
    if (!(norm(axis) > 0))
        fail(ErrorCode::invalid_argument, "dipole axis must be nonzero");
    b.kind_ = Kind::dipole;
    b.value_ = amplitude;
    b.axis_ = normalized(axis);
    return b;
}

BoundarySource
BoundarySource::two_temperature(double T_plus, double T_minus, Vec3 axis)
{
    if (!(T_plus >= 0) || !(T_minus >= 0))
        fail(ErrorCode::non_positive_temperature, "beam temperatures must be >= 0");
    if (!(norm(axis) > 0))
        fail(ErrorCode::invalid_argument, "beam axis must be nonzero");
    BoundarySource b;
    b.kind_ = Kind::two_temperature;
    b.T0_ = T_plus;
    b.T1_ = T_minus;
    b.axis_ = normalized(axis);
    return b;
}

BoundarySource BoundarySource::tabulated(std::vector<double> nu,
                                         std::vector<double> mu,
                                         std::vector<double> values,
                                         Vec3 axis)
{
    if (nu.empty() || mu.empty() || values.size() != nu.size() * mu.size())
    {
        fail(ErrorCode::invalid_argument,
             "boundary table must hold len(nu) x len(mu) values");
    }
    for (std::size_t k = 1; k < nu.size(); ++k)
    {
        if (!(nu[k] > nu[k - 1]))
            fail(ErrorCode::invalid_argument, "boundary table nu must increase");
    }
    for (std::size_t k = 0; k < mu.size(); ++k)
    {
        if (!(mu[k] >= -1 && mu[k] <= 1) || (k > 0 && !(mu[k] > mu[k - 1])))
        {
            fail(ErrorCode::invalid_argument,
                 "boundary table mu must increase within [-1, 1]");
        }
    }
    for (double v : values)
    {
        if (!(v >= 0) || !std::isfinite(v))
            fail(ErrorCode::invalid_argument, "boundary table values must be >= 0");
    }
    if (!(norm(axis) > 0))
        fail(ErrorCode::invalid_argument, "boundary table axis must be nonzero");
    BoundarySource b;
    b.kind_ = Kind::tabulated;
    b.nu_ = std::move(nu);
    b.mu_ = std::move(mu);
    b.table_ = std::move(values);
    b.axis_ = normalized(axis);
    return b;
}

namespace
{
//! Locate x in a sorted table: lower index and fraction, clamped
void bracket(std::vector<double> const& t, double x, std::size_t& k, double& f)
{
    if (t.size() == 1 || x <= t.front())
    {
        k = 0;
        f = 0;
        return;
    }
    if (x >= t.back())
    {
        k = t.size() - 2;
        f = 1;
        return;
    }
    k = std::size_t(std::upper_bound(t.begin(), t.end(), x) - t.begin()) - 1;
    f = (x - t[k]) / (t[k + 1] - t[k]);
}
}  // namespace

double BoundarySource::operator()(Vec3 const& n, double nu) const
{
    switch (kind_)
    {
        case Kind::zero:
            return 0;
        case Kind::constant_isotropic:
            return value_;
        case Kind::equilibrium:
            return planck(nu, T0_);
        case Kind::dipole:
            return planck(nu, T0_) * (1 + value_ * dot(n, axis_));
        case Kind::two_temperature:
            return planck(nu, dot(n, axis_) > 0 ? T0_ : T1_);
        case Kind::tabulated: {
            std::size_t a, b;
            double fa, fb;
            bracket(nu_, nu, a, fa);
            bracket(mu_, dot(n, axis_), b, fb);
            std::size_t nm = mu_.size();
            std::size_t a1 = std::min(a + 1, nu_.size() - 1);
            std::size_t b1 = std::min(b + 1, nm - 1);
            double v0 = (1 - fb) * table_[a * nm + b] + fb * table_[a * nm + b1];
            double v1 = (1 - fb) * table_[a1 * nm + b] + fb * table_[a1 * nm + b1];
            return (1 - fa) * v0 + fa * v1;
        }
    }
    return 0;
}

std::vector<double> BoundarySource::tabulate(AngularGrid const& angles,
                                             SpectralGrid const& spectrum) const
{
    std::size_t F = spectrum.size();
    std::vector<double> g(angles.size() * F);
    for (std::size_t i = 0; i < angles.size(); ++i)
    {
        for (std::size_t j = 0; j < F; ++j)
            g[i * F + j] = (*this)(angles.nodes[i], spectrum.nodes[j]);
    }
    return g;
}

std::vector<double> BoundarySource::frequency_integrals(AngularGrid const& angles,
                                                       SpectralGrid const& spectrum) const
{
    std::vector<double> out(angles.size(), 0.0);
    auto T4 = [](double T) { return stefan_sigma() * T * T * T * T; };
    for (std::size_t i = 0; i < angles.size(); ++i)
    {
        Vec3 const& n = angles.nodes[i];
        switch (kind_)
        {
            case Kind::zero:
                break;
            case Kind::equilibrium:
                out[i] = T4(T0_);
                break;
            case Kind::dipole:
                out[i] = T4(T0_) * (1 + value_ * dot(n, axis_));
                break;
            case Kind::two_temperature:
                out[i] = T4(dot(n, axis_) > 0 ? T0_ : T1_);
                break;
            case Kind::constant_isotropic:
            case Kind::tabulated:
                for (std::size_t j = 0; j < spectrum.size(); ++j)
                    out[i] += spectrum.weights[j] * (*this)(n, spectrum.nodes[j]);
                break;
        }
    }
    return out;
}

//---------------------------------------------------------------------------//
// LATTICE INTERPOLATION
//---------------------------------------------------------------------------//
LatticeInterpolator::LatticeInterpolator(SpatialGrid const& grid)
    : origin_(grid.origin)
    , h_(grid.h)
    , dims_(grid.dims)
    , size_(grid.lattice_size())
    , node_index_(grid.lattice_index)
{
    std::vector<char> known(size_, 0);
    for (std::size_t idx : node_index_)
        known[idx] = 1;
    auto const& d = dims_;
    std::vector<std::size_t> layer;
    fill_offset_.push_back(0);
    while (true)
    {
        layer.clear();
        for (int i = 0; i < d[0]; ++i)
        {
            for (int j = 0; j < d[1]; ++j)
            {
                for (int k = 0; k < d[2]; ++k)
                {
                    std::size_t idx = grid.flat(i, j, k);
                    if (known[idx])
                        continue;
                    std::size_t before = fill_neighbor_.size();
                    for (int di = -1; di <= 1; ++di)
                    {
                        for (int dj = -1; dj <= 1; ++dj)
                        {
                            for (int dk = -1; dk <= 1; ++dk)
                            {
                                int a = i + di, b = j + dj, c = k + dk;
                                if ((di | dj | dk) == 0 || a < 0 || b < 0
                                    || c < 0 || a >= d[0] || b >= d[1]
                                    || c >= d[2])
                                {
                                    continue;
                                }
                                std::size_t nb = grid.flat(a, b, c);
                                if (known[nb])
                                    fill_neighbor_.push_back(nb);
                            }
                        }
                    }
                    if (fill_neighbor_.size() > before)
                    {
                        fill_cell_.push_back(idx);
                        fill_offset_.push_back(fill_neighbor_.size());
                        layer.push_back(idx);
                    }
                }
            }
        }
        if (layer.empty())
            break;
        for (std::size_t idx : layer)
            known[idx] = 1;
    }
}

void LatticeInterpolator::extend(double const* nodal,
                                 std::vector<double>& lattice) const
{
    lattice.assign(size_, 0.0);
    for (std::size_t m = 0; m < node_index_.size(); ++m)
        lattice[node_index_[m]] = nodal[m];
    for (std::size_t c = 0; c < fill_cell_.size(); ++c)
    {
        double sum = 0;
        std::size_t b = fill_offset_[c], e = fill_offset_[c + 1];
        for (std::size_t q = b; q < e; ++q)
            sum += lattice[fill_neighbor_[q]];
        lattice[fill_cell_[c]] = sum / double(e - b);
    }
}

std::vector<double>
LatticeInterpolator::extend(std::vector<double> const& nodal) const
{
    std::vector<double> out;
    this->extend(nodal.data(), out);
    return out;
}

void LatticeInterpolator::extend(double const* nodal,
                                 std::size_t ncomp,
                                 std::vector<double>& lattice) const
{
    lattice.assign(size_ * ncomp, 0.0);
    for (std::size_t m = 0; m < node_index_.size(); ++m)
    {
        std::copy(nodal + m * ncomp,
                  nodal + (m + 1) * ncomp,
                  lattice.begin() + node_index_[m] * ncomp);
    }
    for (std::size_t c = 0; c < fill_cell_.size(); ++c)
    {
        double* dst = lattice.data() + fill_cell_[c] * ncomp;
        std::size_t b = fill_offset_[c], e = fill_offset_[c + 1];
        for (std::size_t q = b; q < e; ++q)
        {
            double const* src = lattice.data() + fill_neighbor_[q] * ncomp;
            for (std::size_t k = 0; k < ncomp; ++k)
                dst[k] += src[k];
        }
        double inv = 1.0 / double(e - b);
        for (std::size_t k = 0; k < ncomp; ++k)
            dst[k] *= inv;
    }
}

LatticeInterpolator::Stencil LatticeInterpolator::stencil(Vec3 const& p) const
{
    int i0[3];
    int i1[3];
    double t[3];
    for (int a = 0; a < 3; ++a)
    {
        double g = (p[a] - origin_[a]) / h_;
        int n = dims_[a];
        if (n == 1)
        {
            i0[a] = i1[a] = 0;
            t[a] = 0;
            continue;
        }
        g = std::clamp(g, 0.0, double(n - 1));
        i0[a] = std::min(int(g), n - 2);
        i1[a] = i0[a] + 1;
        t[a] = g - i0[a];
    }
    Stencil st;
    int c = 0;
    for (int a = 0; a < 2; ++a)
    {
        for (int b = 0; b < 2; ++b)
        {
            for (int e = 0; e < 2; ++e)
            {
                int ii = a ? i1[0] : i0[0];
                int jj = b ? i1[1] : i0[1];
                int kk = e ? i1[2] : i0[2];
                st.index[c] = (std::size_t(ii) * dims_[1] + jj) * dims_[2] + kk;
                st.weight[c] = (a ? t[0] : 1 - t[0]) * (b ? t[1] : 1 - t[1])
                               * (e ? t[2] : 1 - t[2]);
                ++c;
            }
        }
    }
    return st;
}

//---------------------------------------------------------------------------//
// RAY INTEGRATION
//---------------------------------------------------------------------------//
/*!
 * On a segment of optical width D = beta d ending at xi_{k+1}, the left and
 * right hat functions integrate to e_{k+1} d A(D) and e_{k+1} d B(D) with
 * A = (1 - e^{-D}(1 + D))/D^2 and B = (D - 1 + e^{-D})/D^2, where
 * e_{k+1} = exp(-beta (s - xi_{k+1})).
 */
void exponential_weights(double s, int K, double beta, double* omega)
{
    double d = s / K;
    double D = beta * d;
    double A, B;
    if (D < 1e-3)
    {
        A = 0.5 - D / 3 + D * D / 8 - D * D * D / 30;
        B = 0.5 - D / 6 + D * D / 24 - D * D * D / 120;
    }
    else
    {
        double e = std::exp(-D);
        A = (1 - e * (1 + D)) / (D * D);
        B = (D - 1 + e) / (D * D);
    }
    double ratio = std::exp(-D);
    for (int k = 0; k <= K; ++k)
        omega[k] = 0;
    double er = 1;
    for (int k = K - 1; k >= 0; --k)
    {
        omega[k] += er * d * A;
        omega[k + 1] += er * d * B;
        er *= ratio;
    }
}

int ray_steps(double s, double ray_h)
{
    return std::max(2, int(std::ceil(s / ray_h)));
}

PathTable build_paths(ConvexDomain const& domain,
                      SpatialGrid const& grid,
                      AngularGrid const& angles)
{
    PathTable t;
    t.n_nodes = grid.size();
    t.n_dirs = angles.size();
    t.s.resize(t.n_nodes * t.n_dirs);
    parallel_for(t.n_nodes, [&](std::size_t b, std::size_t e, int) {
        for (std::size_t m = b; m < e; ++m)
        {
            for (std::size_t i = 0; i < t.n_dirs; ++i)
            {
                t.s[m * t.n_dirs + i]
                    = domain.backward_exit(grid.centers[m], angles.nodes[i])
                          .path_length;
            }
        }
    });
    return t;
}

Discretization::Discretization(ConvexDomain domain_,
                               double h,
                               AngularGrid angles_,
                               SpectralGrid spectrum_,
                               double ray_h_)
    : domain(domain_)
    , space(build_spatial(domain_, h))
    , angles(std::move(angles_))
    , spectrum(std::move(spectrum_))
    , ray_h(ray_h_ > 0 ? ray_h_ : domain_.diameter() / 128)
    , lattice(space)
    , paths(build_paths(domain, space, angles))
{
}

//---------------------------------------------------------------------------//
double formal_solution_absorption(Vec3 const& x,
                                  Vec3 const& n,
                                  double nu,
                                  std::vector<double> const& T_lattice,
                                  BoundarySource const& g,
                                  AbsorptionProfile const& alpha,
                                  Discretization const& disc)
{
    double s = disc.domain.backward_exit(x, n).path_length;
    return formal_solution_absorption(x, n, s, nu, T_lattice, g, alpha, disc);
}

double formal_solution_absorption(Vec3 const& x,
                                  Vec3 const& n,
                                  double s,
                                  double nu,
                                  std::vector<double> const& T_lattice,
                                  BoundarySource const& g,
                                  AbsorptionProfile const& alpha,
                                  Discretization const& disc)
{
    double a = alpha(nu);
    double result = g(n, nu) * std::exp(-a * s);
    if (a == 0 || s == 0)
        return result;
    int K = ray_steps(s, disc.ray_h);
    std::vector<double> omega(K + 1);
    exponential_weights(s, K, a, omega.data());
    double d = s / K;
    double sum = 0;
    for (int k = 0; k <= K; ++k)
    {
        Vec3 p = x - (s - k * d) * n;
        double T = LatticeInterpolator::eval(disc.lattice.stencil(p),
                                             T_lattice.data());
        sum += omega[k] * planck(nu, std::max(T, 0.0));
    }
    return result + a * sum;
}

double neg_div_S(Vec3 const& x,
                 BoundarySource const& g,
                 AbsorptionProfile const& alpha,
                 Discretization const& disc)
{
    auto const& ang = disc.angles;
    auto const& spec = disc.spectrum;
    std::vector<double> s(ang.size());
    for (std::size_t i = 0; i < ang.size(); ++i)
        s[i] = disc.domain.backward_exit(x, ang.nodes[i]).path_length;
    double total = 0;
    for (std::size_t j = 0; j < spec.size(); ++j)
    {
        double nu = spec.nodes[j];
        double a = alpha(nu);
        if (a == 0)
            continue;
        double sum = 0;
        for (std::size_t i = 0; i < ang.size(); ++i)
            sum += ang.weights[i] * g(ang.nodes[i], nu) * std::exp(-a * s[i]);
        total += spec.weights[j] * a * sum;
    }
    return total;
}

//---------------------------------------------------------------------------//
// LATTICE CONVOLVER
//---------------------------------------------------------------------------//
struct LatticeConvolver::Plans
{
    double* real{nullptr};
    fftw_complex* freq{nullptr};
    fftw_plan forward{nullptr};
    fftw_plan backward{nullptr};
    std::size_t n_real{0};
    std::size_t n_freq{0};
    std::vector<std::size_t> padded_index;

    ~Plans()
    {
        if (forward)
            fftw_destroy_plan(forward);
        if (backward)
            fftw_destroy_plan(backward);
        fftw_free(real);
        fftw_free(freq);
    }
};

namespace
{
//! Smallest 7-smooth length >= n (FFTW is slow on large prime factors)
int fft_size(int n)
{
    for (;; ++n)
    {
        int r = n;
        for (int f : {2, 3, 5, 7})
        {
            while (r % f == 0)
                r /= f;
        }
        if (r == 1)
            return n;
    }
}
}  // namespace

LatticeConvolver::LatticeConvolver(SpatialGrid const& grid)
    : grid_(grid), plans_(std::make_unique<Plans>())
{
    // Offsets span -(d-1)..(d-1), so 2d - 1 points avoid wrap-around
    for (int a = 0; a < 3; ++a)
        padded_[a] = fft_size(2 * grid.dims[a] - 1);
    auto& p = *plans_;
    p.n_real = std::size_t(padded_[0]) * padded_[1] * padded_[2];
    p.n_freq = std::size_t(padded_[0]) * padded_[1] * (padded_[2] / 2 + 1);
    p.real = fftw_alloc_real(p.n_real);
    p.freq = fftw_alloc_complex(p.n_freq);
    p.forward = fftw_plan_dft_r2c_3d(
        padded_[0], padded_[1], padded_[2], p.real, p.freq, FFTW_ESTIMATE);
    p.backward = fftw_plan_dft_c2r_3d(
        padded_[0], padded_[1], padded_[2], p.freq, p.real, FFTW_ESTIMATE);
    auto const& d = grid.dims;
    p.padded_index.resize(grid.size());
    for (std::size_t m = 0; m < grid.size(); ++m)
    {
        std::size_t idx = grid.lattice_index[m];
        std::size_t k = idx % d[2];
        std::size_t j = (idx / d[2]) % d[1];
        std::size_t i = idx / (std::size_t(d[1]) * d[2]);
        p.padded_index[m] = (i * padded_[1] + j) * padded_[2] + k;
    }
}

LatticeConvolver::~LatticeConvolver() = default;

std::vector<std::complex<double>> const& LatticeConvolver::spectrum(double beta)
{
    auto it = cache_.find(beta);
    if (it != cache_.end())
        return it->second;
    auto& p = *plans_;
    double h = grid_.h;
    double vol = h * h * h;
    auto wrap = [](int i, int n) { return i <= (n - 1) / 2 ? i : i - n; };
    for (int i = 0; i < padded_[0]; ++i)
    {
        double x = h * wrap(i, padded_[0]);
        for (int j = 0; j < padded_[1]; ++j)
        {
            double y = h * wrap(j, padded_[1]);
            for (int k = 0; k < padded_[2]; ++k)
            {
                double z = h * wrap(k, padded_[2]);
                double r = std::sqrt(x * x + y * y + z * z);
                p.real[(std::size_t(i) * padded_[1] + j) * padded_[2] + k]
                    = kernel_density(beta, r) * vol;
            }
        }
    }
    fftw_execute(p.forward);
    std::vector<std::complex<double>> spec(p.n_freq);
    for (std::size_t q = 0; q < p.n_freq; ++q)
        spec[q] = {p.freq[q][0], p.freq[q][1]};
    return cache_.emplace(beta, std::move(spec)).first->second;
}

void LatticeConvolver::apply(double beta, double const* u, double* out)
{
    auto const& spec = this->spectrum(beta);
    auto& p = *plans_;
    std::fill(p.real, p.real + p.n_real, 0.0);
    for (std::size_t m = 0; m < p.padded_index.size(); ++m)
        p.real[p.padded_index[m]] = u[m];
    fftw_execute(p.forward);
    for (std::size_t q = 0; q < p.n_freq; ++q)
    {
        std::complex<double> z(p.freq[q][0], p.freq[q][1]);
        z *= spec[q];
        p.freq[q][0] = z.real();
        p.freq[q][1] = z.imag();
    }
    fftw_execute(p.backward);
    double scale = 1.0 / double(p.n_real);
    for (std::size_t m = 0; m < p.padded_index.size(); ++m)
        out[m] = p.real[p.padded_index[m]] * scale;
}

void LatticeConvolver::apply_direct(SpatialGrid const& grid,
                                    double beta,
                                    double const* u,
                                    double* out)
{
    double vol = grid.cell_volume();
    std::size_t M = grid.size();
    parallel_for(M, [&](std::size_t b, std::size_t e, int) {
        for (std::size_t m = b; m < e; ++m)
        {
            double sum = 0;
            for (std::size_t q = 0; q < M; ++q)
            {
                if (q == m)
                    continue;
                double r = norm(grid.centers[m] - grid.centers[q]);
                sum += kernel_density(beta, r) * u[q];
            }
            out[m] = sum * vol;
        }
    });
}

//---------------------------------------------------------------------------//
// PEIERLS KERNEL
//---------------------------------------------------------------------------//
double equivalent_ball_self(double beta, double cell_volume)
{
    double rho = std::cbrt(3 * cell_volume / four_pi);
    return -std::expm1(-beta * rho);
}

PeierlsKernel::PeierlsKernel(LatticeConvolver& conv,
                             Discretization const& disc,
                             double beta,
                             SelfCellRule rule)
    : conv_(conv), beta_(beta)
{
    std::size_t M = disc.space.size();
    auto const& ang = disc.angles;
    escape_.resize(M);
    parallel_for(M, [&](std::size_t b, std::size_t e, int) {
        for (std::size_t m = b; m < e; ++m)
        {
            double sum = 0;
            for (std::size_t i = 0; i < ang.size(); ++i)
                sum += ang.weights[i] * std::exp(-beta * disc.paths(m, i));
            escape_[m] = sum / four_pi;
        }
    });
    std::vector<double> ones(M, 1.0), off(M);
    conv_.apply(beta, ones.data(), off.data());
    self_.resize(M);
    row_mass_.resize(M);
    double ball = equivalent_ball_self(beta, disc.space.cell_volume());
    for (std::size_t m = 0; m < M; ++m)
    {
        if (rule == SelfCellRule::mass_consistent)
        {
            row_mass_[m] = 1 - escape_[m];
            self_[m] = row_mass_[m] - off[m];
        }
        else
        {
            self_[m] = ball;
            row_mass_[m] = off[m] + ball;
        }
    }
}

void PeierlsKernel::apply(double const* u, double* out) const
{
    conv_.apply(beta_, u, out);
    for (std::size_t m = 0; m < self_.size(); ++m)
        out[m] += self_[m] * u[m];
}

//---------------------------------------------------------------------------//
double apply_grey_kernel(std::vector<double> const& w,
                         std::size_t m,
                         SpatialGrid const& grid)
{
    double vol = grid.cell_volume();
    double sum = 0;
    for (std::size_t q = 0; q < grid.size(); ++q)
    {
        if (q == m)
            continue;
        double r = norm(grid.centers[m] - grid.centers[q]);
        sum += kernel_density(1, r) * w[q];
    }
    return sum * vol + w[m] * equivalent_ball_self(1, vol);
}

double apply_spectral_kernel(std::vector<double> const& w,
                             std::size_t m,
                             EmissionMap const& f,
                             AbsorptionProfile const& alpha,
                             SpatialGrid const& grid)
{
    auto const& nu = f.nodes();
    auto const& qa = f.weights();
    std::size_t F = nu.size();
    std::vector<double> a(F);
    for (std::size_t j = 0; j < F; ++j)
        a[j] = alpha(nu[j]);
    double vol = grid.cell_volume();
    double sum = 0;
    for (std::size_t q = 0; q < grid.size(); ++q)
    {
        if (w[q] == 0)
            continue;
        double T = f.inverse(w[q]);
        double r = norm(grid.centers[m] - grid.centers[q]);
        for (std::size_t j = 0; j < F; ++j)
        {
            if (qa[j] == 0)
                continue;
            double coeff = q == m ? equivalent_ball_self(a[j], vol)
                                  : kernel_density(a[j], r) * vol;
            sum += qa[j] * planck(nu[j], T) * coeff;
        }
    }
    return sum;
}

//---------------------------------------------------------------------------//
Vec3 flux(RadiationField const& I,
          std::size_t m,
          AngularGrid const& angles,
          SpectralGrid const& spectrum)
{
    Vec3 total;
    for (std::size_t i = 0; i < I.n_dirs; ++i)
    {
        double sum = 0;
        for (std::size_t j = 0; j < I.n_freq; ++j)
            sum += spectrum.weights[j] * I(m, i, j);
        total += (angles.weights[i] * sum) * angles.nodes[i];
    }
    return total;
}

}  // namespace radheat
