//---------------------------------*-C++-*-----------------------------------//
// Copyright 2026 radheat developers.
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file spectral.hpp
//! Planck function and the monotone emission map f(T).
//!
//! Natural units are used throughout: h = k = c = 1, so that the spectral
//! radiance prefactor 2 h nu^3 / c^2 becomes 2 nu^3.
//---------------------------------------------------------------------------//
#pragma once

#include <vector>

#include "core.hpp"

namespace radheat
{
struct SpectralGrid;

//---------------------------------------------------------------------------//
// FREE FUNCTIONS
//---------------------------------------------------------------------------//
//! Black-body spectral radiance 2 nu^3 / (exp(nu/T) - 1)
double planck(double nu, double T);

//! Temperature derivative of the Planck function
double planck_dT(double nu, double T);

//! Frequency integral of planck(nu, 1): 2 pi^4 / 15
constexpr double stefan_sigma()
{
    return 2 * pi * pi * pi * pi / 15;
}

//! Temperature at which planck(nu, T) equals I
double brightness_temperature(double nu, double I);

//---------------------------------------------------------------------------//
/*!
 * Frequency-dependent coefficient alpha(nu) >= 0.
 *
 * Either a constant or a table of strictly increasing frequencies. Tables
 * are interpolated linearly or as a right-continuous step function and are
 * held constant outside their range.
 */
class AbsorptionProfile
{
  public:
    enum class Interp
    {
        linear,
        step
    };

    AbsorptionProfile() = default;
    explicit AbsorptionProfile(double value);
    AbsorptionProfile(std::vector<double> nu,
                      std::vector<double> alpha,
                      Interp interp);

    double operator()(double nu) const;

    bool is_constant() const { return nu_.empty(); }
    //! True if alpha vanishes for every frequency
    bool is_zero() const;
    double max_value() const;

    std::vector<double> const& table_nu() const { return nu_; }
    std::vector<double> const& table_alpha() const { return alpha_; }
    Interp interp() const { return interp_; }

  private:
    double value_{0};
    std::vector<double> nu_;
    std::vector<double> alpha_;
    Interp interp_{Interp::linear};
};

//---------------------------------------------------------------------------//
/*!
 * The emission integral w = f(T) = sum_j q_j alpha_j B_j(T) on a grid.
 *
 * Coefficients are sampled once at construction. Inversion uses a
 * safeguarded Newton iteration inside a bisection bracket on [0, T_max];
 * an optional initial guess (e.g. the previous iterate) is used to seed it.
 */
class EmissionMap
{
  public:
    EmissionMap(AbsorptionProfile const& profile,
                SpectralGrid const& grid,
                double T_max);

    double operator()(double T) const;
    double derivative(double T) const;
    double inverse(double w, double guess = -1) const;

    double T_max() const { return T_max_; }
    bool is_zero() const { return zero_; }

    //! Sampled q_j * alpha_j
    std::vector<double> const& weights() const { return qa_; }
    std::vector<double> const& nodes() const { return nu_; }

  private:
    std::vector<double> nu_;
    std::vector<double> qa_;
    double T_max_;
    double w_max_;
    bool zero_{true};
};

//---------------------------------------------------------------------------//
// Emission integral of a profile on a grid
double emission_integral(AbsorptionProfile const& profile,
                         double T,
                         SpectralGrid const& grid);

// Inverse of emission_integral with the default temperature cap
double invert_emission(AbsorptionProfile const& profile,
                       double w,
                       SpectralGrid const& grid);

//! Upper bound on the truncated tail integral of alpha_max B_nu(T)
double planck_tail_bound(double nu_max, double T, double alpha_max);

}  // namespace radheat
