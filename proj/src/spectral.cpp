//---------------------------------*-C++-*-----------------------------------//
// Copyright 2026 radheat developers.
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file spectral.cpp
//---------------------------------------------------------------------------//
#include "radheat/spectral.hpp"

#include <algorithm>
#include <limits>

#include "radheat/quadrature.hpp"

namespace radheat
{
namespace
{
//! Beyond this ratio exp(nu/T) overflows the useful range
constexpr double exponent_cutoff = 700;
//! Below this ratio the Rayleigh-Jeans series is used
constexpr double series_cutoff = 1e-6;

void check_frequency(double nu)
{
    if (!(nu > 0))
    {
        fail(ErrorCode::non_positive_frequency,
             "frequency must be positive, got " + std::to_string(nu));
    }
}
}  // namespace

//---------------------------------------------------------------------------//
double planck(double nu, double T)
{
    check_frequency(nu);
    if (!(T >= 0))
    {
        fail(ErrorCode::non_positive_temperature,
             "temperature must be nonnegative, got " + std::to_string(T));
    }
    if (T == 0)
        return 0;
    double x = nu / T;
    if (x > exponent_cutoff)
        return 0;
    if (x < series_cutoff)
        return 2 * nu * nu * T * (1 - x / 2 + x * x / 12);
    return 2 * nu * nu * nu / std::expm1(x);
}

//---------------------------------------------------------------------------//
/*!
 * dB/dT = 2 nu^3 (x/T) e^x / (e^x - 1)^2 with x = nu/T.
 *
 * Written as e^{-x} / (1 - e^{-x})^2 so that neither factor overflows.
 */
double planck_dT(double nu, double T)
{
    check_frequency(nu);
    if (!(T > 0))
    {
        fail(ErrorCode::non_positive_temperature,
             "temperature must be positive, got " + std::to_string(T));
    }
    double x = nu / T;
    if (x > exponent_cutoff)
        return 0;
    double em = -std::expm1(-x);
    return 2 * nu * nu * nu * (x / T) * std::exp(-x) / (em * em);
}

//---------------------------------------------------------------------------//
double brightness_temperature(double nu, double I)
{
    check_frequency(nu);
    if (!(I >= 0))
    {
        fail(ErrorCode::negative_intensity,
             "radiance must be nonnegative, got " + std::to_string(I));
    }
    if (I == 0)
        return 0;
    return nu / std::log1p(2 * nu * nu * nu / I);
}

//---------------------------------------------------------------------------//
double planck_tail_bound(double nu_max, double T, double alpha_max)
{
    if (T <= 0 || alpha_max <= 0)
        return 0;
    double x = nu_max / T;
    double poly = ((x + 3) * x + 6) * x + 6;
    double T4 = T * T * T * T;
    // 1/(e^v - 1) <= e^{-v} / (1 - e^{-x}) for v >= x
    return 2 * alpha_max * T4 * std::exp(-x) * poly / -std::expm1(-x);
}

//---------------------------------------------------------------------------//
// ABSORPTION PROFILE
//---------------------------------------------------------------------------//
AbsorptionProfile::AbsorptionProfile(double value) : value_(value)
{
    if (!(value >= 0) || !std::isfinite(value))
    {
        fail(ErrorCode::invalid_argument,
             "coefficient must be finite and nonnegative");
    }
}

AbsorptionProfile::AbsorptionProfile(std::vector<double> nu,
                                     std::vector<double> alpha,
                                     Interp interp)
    : nu_(std::move(nu)), alpha_(std::move(alpha)), interp_(interp)
{
    if (nu_.empty() || nu_.size() != alpha_.size())
    {
        fail(ErrorCode::invalid_argument,
             "coefficient table needs matching, nonempty columns");
    }
    for (std::size_t k = 0; k < nu_.size(); ++k)
    {
        if (!(nu_[k] > 0) || (k > 0 && !(nu_[k] > nu_[k - 1])))
        {
            fail(ErrorCode::invalid_argument,
                 "table frequencies must be positive and strictly "
                 "increasing");
        }
        if (!(alpha_[k] >= 0) || !std::isfinite(alpha_[k]))
        {
            fail(ErrorCode::invalid_argument,
                 "table coefficients must be finite and nonnegative");
        }
    }
}

double AbsorptionProfile::operator()(double nu) const
{
    if (nu_.empty())
        return value_;
    if (nu <= nu_.front())
        return alpha_.front();
    if (nu >= nu_.back())
        return alpha_.back();
    auto k = std::size_t(std::upper_bound(nu_.begin(), nu_.end(), nu)
                         - nu_.begin())
             - 1;
    if (interp_ == Interp::step)
        return alpha_[k];
    double t = (nu - nu_[k]) / (nu_[k + 1] - nu_[k]);
    return (1 - t) * alpha_[k] + t * alpha_[k + 1];
}

bool AbsorptionProfile::is_zero() const
{
    return this->max_value() == 0;
}

double AbsorptionProfile::max_value() const
{
    if (nu_.empty())
        return value_;
    return *std::max_element(alpha_.begin(), alpha_.end());
}

//---------------------------------------------------------------------------//
// EMISSION MAP
//---------------------------------------------------------------------------//
EmissionMap::EmissionMap(AbsorptionProfile const& profile,
                         SpectralGrid const& grid,
                         double T_max)
    : nu_(grid.nodes), T_max_(T_max)
{
    if (grid.size() == 0)
        fail(ErrorCode::empty_grid, "spectral grid has no nodes");
    if (!(T_max > 0))
        fail(ErrorCode::invalid_argument, "temperature cap must be positive");
    qa_.resize(nu_.size());
    for (std::size_t j = 0; j < nu_.size(); ++j)
    {
        qa_[j] = grid.weights[j] * profile(nu_[j]);
        if (qa_[j] > 0)
            zero_ = false;
    }
    w_max_ = (*this)(T_max_);
}

double EmissionMap::operator()(double T) const
{
    double sum = 0;
    for (std::size_t j = 0; j < nu_.size(); ++j)
    {
        if (qa_[j] != 0)
            sum += qa_[j] * planck(nu_[j], T);
    }
    return sum;
}

double EmissionMap::derivative(double T) const
{
    double sum = 0;
    for (std::size_t j = 0; j < nu_.size(); ++j)
    {
        if (qa_[j] != 0)
            sum += qa_[j] * planck_dT(nu_[j], T);
    }
    return sum;
}

//---------------------------------------------------------------------------//
/*!
 * Solve f(T) = w.
 *
 * Newton steps that leave the current bracket are replaced by bisection.
 * Without a usable guess the iteration starts from the grey estimate
 * (w / (sigma * mean alpha))^{1/4}.
 */
double EmissionMap::inverse(double w, double guess) const
{
    if (!(w >= 0))
    {
        fail(ErrorCode::invalid_argument,
             "emission value must be nonnegative, got " + std::to_string(w));
    }
    if (w == 0)
        return 0;
    if (zero_ || w > w_max_)
    {
        fail(ErrorCode::not_bracketable,
             "emission value " + std::to_string(w)
                 + " exceeds f(T_max) = " + std::to_string(w_max_));
    }
    double lo = 0;
    double hi = T_max_;
    double T = guess;
    if (!(T > lo && T < hi))
    {
        double qsum = 0;
        for (double v : qa_)
            qsum += v;
        double nu_span = nu_.back();
        T = std::pow(w * nu_span / (qsum * stefan_sigma()), 0.25);
        if (!(T > lo && T < hi))
            T = 0.5 * (lo + hi);
    }
    constexpr double eps = std::numeric_limits<double>::epsilon();
    for (int it = 0; it < 300; ++it)
    {
        double F = (*this)(T)-w;
        if (F == 0)
            break;
        if (F > 0)
            hi = T;
        else
            lo = T;
        double d = this->derivative(T);
        double Tn = d > 0 ? T - F / d : 0.5 * (lo + hi);
        if (!(Tn > lo && Tn < hi))
            Tn = 0.5 * (lo + hi);
        bool done = std::fabs(Tn - T) <= 2 * eps * T || hi - lo <= 2 * eps * hi;
        T = Tn;
        if (done)
            break;
    }
    double resid = std::fabs((*this)(T)-w);
    if (!(resid <= 1e-10 * std::max(1.0, w)))
    {
        fail(ErrorCode::inversion_failure,
             "emission inversion residual " + std::to_string(resid)
                 + " for w = " + std::to_string(w));
    }
    return T;
}

//---------------------------------------------------------------------------//
double emission_integral(AbsorptionProfile const& profile,
                         double T,
                         SpectralGrid const& grid)
{
    if (grid.size() == 0)
        fail(ErrorCode::empty_grid, "spectral grid has no nodes");
    double sum = 0;
    for (std::size_t j = 0; j < grid.size(); ++j)
    {
        sum += grid.weights[j] * profile(grid.nodes[j])
               * planck(grid.nodes[j], T);
    }
    return sum;
}

double invert_emission(AbsorptionProfile const& profile,
                       double w,
                       SpectralGrid const& grid)
{
    EmissionMap f(profile, grid, 2 * grid.nu_max);
    return f.inverse(w);
}

}  // namespace radheat
