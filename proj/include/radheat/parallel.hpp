//---------------------------------*-C++-*-----------------------------------//
// Copyright 2026 radheat developers.
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file parallel.hpp
//! Static-partition parallel loops and deterministic reductions.
//---------------------------------------------------------------------------//
#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace radheat
{
//---------------------------------------------------------------------------//
//! Worker count used by parallel_for; 0 selects hardware concurrency
void set_thread_count(int n);
int thread_count();

//---------------------------------------------------------------------------//
/*!
 * Run body(begin, end, worker) over contiguous chunks of [0, n).
 *
 * Chunks depend only on n and the thread count, and each index is
 * processed by exactly one worker, so per-index results are independent
 * of scheduling.
 */
void parallel_for(std::size_t n,
                  std::function<void(std::size_t, std::size_t, int)> const& body);

//---------------------------------------------------------------------------//
//! Pairwise (cascade) summation in fixed order
double pairwise_sum(double const* v, std::size_t n);

inline double pairwise_sum(std::vector<double> const& v)
{
    return pairwise_sum(v.data(), v.size());
}

//! Pairwise sum of |v_m|
double l1_norm(std::vector<double> const& v);
//! Pairwise sum of |a_m - b_m|
double l1_distance(std::vector<double> const& a, std::vector<double> const& b);
double max_abs(std::vector<double> const& v);

}  // namespace radheat
