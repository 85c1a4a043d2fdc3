//---------------------------------*-C++-*-----------------------------------//
// Copyright 2026 radheat developers.
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file core.hpp
//! Small value types and the error type shared by every module.
//---------------------------------------------------------------------------//
#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace radheat
{
//---------------------------------------------------------------------------//
inline constexpr double pi = std::numbers::pi;
inline constexpr double four_pi = 4 * std::numbers::pi;

//---------------------------------------------------------------------------//
/*!
 * Cartesian 3-vector.
 */
struct Vec3
{
    double x{0};
    double y{0};
    double z{0};

    constexpr double operator[](int i) const
    {
        return i == 0 ? x : (i == 1 ? y : z);
    }

    constexpr Vec3& operator+=(Vec3 const& o)
    {
        x += o.x;
        y += o.y;
        z += o.z;
        return *this;
    }
    constexpr Vec3& operator-=(Vec3 const& o)
    {
        x -= o.x;
        y -= o.y;
        z -= o.z;
        return *this;
    }
    constexpr Vec3& operator*=(double s)
    {
        x *= s;
        y *= s;
        z *= s;
        return *this;
    }
};

constexpr Vec3 operator+(Vec3 a, Vec3 const& b)
{
    return a += b;
}
constexpr Vec3 operator-(Vec3 a, Vec3 const& b)
{
    return a -= b;
}
constexpr Vec3 operator-(Vec3 const& a)
{
    return {-a.x, -a.y, -a.z};
}
constexpr Vec3 operator*(double s, Vec3 a)
{
    return a *= s;
}
constexpr Vec3 operator*(Vec3 a, double s)
{
    return a *= s;
}
constexpr double dot(Vec3 const& a, Vec3 const& b)
{
    return a.x * b.x + a.y * b.y + a.z * b.z;
}
constexpr Vec3 cross(Vec3 const& a, Vec3 const& b)
{
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
//! Componentwise product
constexpr Vec3 hadamard(Vec3 const& a, Vec3 const& b)
{
    return {a.x * b.x, a.y * b.y, a.z * b.z};
}
//! Componentwise quotient
constexpr Vec3 divide(Vec3 const& a, Vec3 const& b)
{
    return {a.x / b.x, a.y / b.y, a.z / b.z};
}
inline double norm(Vec3 const& a)
{
    return std::sqrt(dot(a, a));
}
inline Vec3 normalized(Vec3 const& a)
{
    return (1 / norm(a)) * a;
}

//---------------------------------------------------------------------------//
/*!
 * Failure categories.
 *
 * Every error raised by the library carries one of these; the C API maps
 * them one-to-one onto \c rh_status codes.
 */
enum class ErrorCode
{
    invalid_argument,
    not_interior,
    not_unit,
    not_on_boundary,
    non_positive_frequency,
    non_positive_temperature,
    negative_intensity,
    empty_grid,
    not_bracketable,
    too_coarse,
    inversion_failure,
    max_iter_exceeded,
    negative_source,
    cap_exceeded,
    inner_diverged,
    too_large,
    config_invalid,
    artifact_unreadable,
    io,
    invariant_violation,
};

char const* to_string(ErrorCode code);

//---------------------------------------------------------------------------//
class Error : public std::runtime_error
{
  public:
    Error(ErrorCode code, std::string const& msg)
        : std::runtime_error(msg), code_(code)
    {
    }

    ErrorCode code() const noexcept { return code_; }

  private:
    ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, std::string const& msg);

}  // namespace radheat
