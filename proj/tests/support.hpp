//---------------------------------*-C++-*-----------------------------------//
// Copyright 2026 radheat developers.
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file support.hpp
//! Helpers shared by the unit tests.
//---------------------------------------------------------------------------//
#pragma once

#include <cmath>
#include <string>

#include <doctest.h>

#include "radheat/core.hpp"

namespace radheat::test
{
//! Error code raised by f, or nothing if it returns normally
template<class F>
bool raises(ErrorCode code, F&& f)
{
    try
    {
        f();
    }
    catch (Error const& e)
    {
        return e.code() == code;
    }
    return false;
}

inline double rel_err(double got, double want)
{
    return std::fabs(got - want) / std::fabs(want);
}

inline bool vec_close(Vec3 const& a, Vec3 const& b, double tol)
{
    return norm(a - b) <= tol;
}

}  // namespace radheat::test
