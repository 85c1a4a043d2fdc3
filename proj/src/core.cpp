//---------------------------------*-C++-*-----------------------------------//
// Copyright 2026 radheat developers.
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file core.cpp
//---------------------------------------------------------------------------//
#include "radheat/core.hpp"

namespace radheat
{
char const* to_string(ErrorCode code)
{
    switch (code)
    {
        case ErrorCode::invalid_argument:
            return "InvalidArgument";
        case ErrorCode::not_interior:
            return "NotInterior";
        case ErrorCode::not_unit:
            return "NotUnit";
        case ErrorCode::not_on_boundary:
            return "NotOnBoundary";
        case ErrorCode::non_positive_frequency:
            return "NonPositiveFrequency";
        case ErrorCode::non_positive_temperature:
            return "NonPositiveTemperature";
        case ErrorCode::negative_intensity:
            return "NegativeIntensity";
        case ErrorCode::empty_grid:
            return "EmptyGrid";
        case ErrorCode::not_bracketable:
            return "NotBracketable";
        case ErrorCode::too_coarse:
            return "TooCoarse";
        case ErrorCode::inversion_failure:
            return "InversionFailure";
        case ErrorCode::max_iter_exceeded:
            return "MaxIterExceeded";
        case ErrorCode::negative_source:
            return "NegativeSource";
        case ErrorCode::cap_exceeded:
            return "CapExceeded";
        case ErrorCode::inner_diverged:
            return "InnerDiverged";
        case ErrorCode::too_large:
            return "TooLarge";
        case ErrorCode::config_invalid:
            return "ConfigInvalid";
        case ErrorCode::artifact_unreadable:
            return "ArtifactUnreadable";
        case ErrorCode::io:
            return "IoError";
        case ErrorCode::invariant_violation:
            return "InvariantViolation";
    }
    return "Unknown";
}

void fail(ErrorCode code, std::string const& msg)
{
    throw Error(code, std::string(to_string(code)) + ": " + msg);
}

}  // namespace radheat
