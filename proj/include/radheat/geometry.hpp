//---------------------------------*-C++-*-----------------------------------//
// Copyright 2026 radheat developers.
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file geometry.hpp
//! Convex body and backward-trajectory queries.
//---------------------------------------------------------------------------//
#pragma once

#include "core.hpp"

namespace radheat
{
//---------------------------------------------------------------------------//
/*!
 * Result of tracing x backwards along -n to the boundary.
 *
 * The point satisfies x = entry + path_length * n.
 */
struct RayHit
{
    Vec3 entry;
    double path_length{0};
};

//---------------------------------------------------------------------------//
/*!
 * Ball or axis-aligned ellipsoid.
 *
 * Both shapes are described by the normalized shape function
 * \f[ q(x) = \sum_i \left(\frac{x_i - c_i}{a_i}\right)^2 - 1, \f]
 * which is negative inside, zero on the boundary and positive outside. A
 * ball is stored as an ellipsoid with three equal semi-axes.
 */
class ConvexDomain
{
  public:
    enum class Kind
    {
        ball,
        ellipsoid
    };

    static ConvexDomain ball(Vec3 center, double radius);
    static ConvexDomain ellipsoid(Vec3 center, Vec3 semi_axes);

    Kind kind() const { return kind_; }
    Vec3 const& center() const { return center_; }
    Vec3 const& semi_axes() const { return axes_; }

    //! Normalized shape function q(x)
    double shape_value(Vec3 const& x) const;

    //! Strict interior test
    bool contains(Vec3 const& x) const { return this->shape_value(x) < 0; }

    RayHit backward_exit(Vec3 const& x, Vec3 const& n) const;

    // Chord length from a boundary point y backwards along -n (n.n_y > 0)
    double chord_from_boundary(Vec3 const& y, Vec3 const& n) const;

    Vec3 outward_normal(Vec3 const& y) const;

    double diameter() const;
    double volume() const;

    //! Same shape with every length multiplied by \c factor
    ConvexDomain scaled(double factor) const;

  private:
    ConvexDomain(Kind kind, Vec3 center, Vec3 axes);

    Kind kind_;
    Vec3 center_;
    Vec3 axes_;
};

//---------------------------------------------------------------------------//
//! Tolerance on |n| - 1 for direction arguments
inline constexpr double unit_tolerance = 1e-12;
//! Tolerance on |q(y)| for boundary-point arguments
inline constexpr double boundary_tolerance = 1e-8;

}  // namespace radheat
