//---------------------------------*-C++-*-----------------------------------//
// Copyright 2026 radheat developers.
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file geometry.cpp
//---------------------------------------------------------------------------//
#include "radheat/geometry.hpp"

#include <algorithm>
#include <sstream>

namespace radheat
{
namespace
{
std::string describe(Vec3 const& v)
{
    std::ostringstream os;
    os.precision(17);
    os << '(' << v.x << ", " << v.y << ", " << v.z << ')';
    return os.str();
}
}  // namespace

//---------------------------------------------------------------------------//
ConvexDomain ConvexDomain::ball(Vec3 center, double radius)
{
    if (!(radius > 0) || !std::isfinite(radius))
    {
        fail(ErrorCode::invalid_argument, "ball radius must be positive");
    }
    return {Kind::ball, center, {radius, radius, radius}};
}

ConvexDomain ConvexDomain::ellipsoid(Vec3 center, Vec3 semi_axes)
{
    for (int i = 0; i < 3; ++i)
    {
        if (!(semi_axes[i] > 0) || !std::isfinite(semi_axes[i]))
        {
            fail(ErrorCode::invalid_argument,
                 "ellipsoid semi-axes must be positive");
        }
    }
    return {Kind::ellipsoid, center, semi_axes};
}

ConvexDomain::ConvexDomain(Kind kind, Vec3 center, Vec3 axes)
    : kind_(kind), center_(center), axes_(axes)
{
}

//---------------------------------------------------------------------------//
double ConvexDomain::shape_value(Vec3 const& x) const
{
    Vec3 p = divide(x - center_, axes_);
    return dot(p, p) - 1;
}

//---------------------------------------------------------------------------//
/*!
 * Solve |(x - s n - c) / a|^2 = 1 for the positive root.
 *
 * With p = (x - c)/a and d = n/a the quadratic is
 * (d.d) s^2 - 2 (p.d) s + (p.p - 1) = 0; since p.p < 1 the roots have
 * opposite signs. The positive root is evaluated in the cancellation-free
 * form.
 */
RayHit ConvexDomain::backward_exit(Vec3 const& x, Vec3 const& n) const
{
    double q = this->shape_value(x);
    if (!(q < 0))
    {
        fail(ErrorCode::not_interior, "point " + describe(x) + " is not inside the domain");
    }
    if (!(std::fabs(norm(n) - 1) <= unit_tolerance))
    {
        fail(ErrorCode::not_unit, "direction " + describe(n) + " is not a unit vector");
    }
    Vec3 p = divide(x - center_, axes_);
    Vec3 d = divide(n, axes_);
    double a = dot(d, d);
    double b = dot(p, d);
    double root = std::sqrt(b * b - a * q);
    double s = b >= 0 ? (b + root) / a : q / (b - root);
    s = std::max(s, 0.0);
    return {x - s * n, s};
}

//---------------------------------------------------------------------------//
/*!
 * Length of the chord y - t n, t in [0, L], through the domain.
 *
 * The line through a boundary point has roots t = 0 and t = 2 (p.d)/(d.d).
 */
double ConvexDomain::chord_from_boundary(Vec3 const& y, Vec3 const& n) const
{
    Vec3 p = divide(y - center_, axes_);
    Vec3 d = divide(n, axes_);
    return std::max(0.0, 2 * dot(p, d) / dot(d, d));
}

//---------------------------------------------------------------------------//
Vec3 ConvexDomain::outward_normal(Vec3 const& y) const
{
    if (!(std::fabs(this->shape_value(y)) <= boundary_tolerance))
    {
        fail(ErrorCode::not_on_boundary, "point " + describe(y) + " is not on the boundary");
    }
    Vec3 g = divide(y - center_, hadamard(axes_, axes_));
    return normalized(g);
}

//---------------------------------------------------------------------------//
double ConvexDomain::diameter() const
{
    return 2 * std::max({axes_.x, axes_.y, axes_.z});
}

double ConvexDomain::volume() const
{
    return 4 * pi / 3 * axes_.x * axes_.y * axes_.z;
}

ConvexDomain ConvexDomain::scaled(double factor) const
{
    return {kind_, factor * center_, factor * axes_};
}

}  // namespace radheat
