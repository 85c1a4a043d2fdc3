//---------------------------------*-C++-*-----------------------------------//
// Copyright 2026 radheat developers.
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file parallel.cpp
//---------------------------------------------------------------------------//
#include "radheat/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <thread>

namespace radheat
{
namespace
{
std::atomic<int> g_threads{0};
}

void set_thread_count(int n)
{
    g_threads = std::max(0, n);
}

int thread_count()
{
    int n = g_threads;
    if (n <= 0)
        n = int(std::max(1u, std::thread::hardware_concurrency()));
    return n;
}

//---------------------------------------------------------------------------//
void parallel_for(std::size_t n,
                  std::function<void(std::size_t, std::size_t, int)> const& body)
{
    if (n == 0)
        return;
    auto workers = std::size_t(std::min<std::size_t>(thread_count(), n));
    if (workers <= 1)
    {
        body(0, n, 0);
        return;
    }
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(workers);
    std::size_t chunk = (n + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w)
    {
        std::size_t begin = w * chunk;
        std::size_t end = std::min(n, begin + chunk);
        if (begin >= end)
            break;
        pool.emplace_back([&, begin, end, w] {
            try
            {
                body(begin, end, int(w));
            }
            catch (...)
            {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& t : pool)
        t.join();
    for (auto& e : errors)
    {
        if (e)
            std::rethrow_exception(e);
    }
}

//---------------------------------------------------------------------------//
double pairwise_sum(double const* v, std::size_t n)
{
    if (n <= 16)
    {
        double s = 0;
        for (std::size_t i = 0; i < n; ++i)
            s += v[i];
        return s;
    }
    std::size_t half = n / 2;
    return pairwise_sum(v, half) + pairwise_sum(v + half, n - half);
}

namespace
{
template<class F>
double pairwise_map(std::size_t lo, std::size_t hi, F const& f)
{
    if (hi - lo <= 16)
    {
        double s = 0;
        for (std::size_t i = lo; i < hi; ++i)
            s += f(i);
        return s;
    }
    std::size_t mid = lo + (hi - lo) / 2;
    return pairwise_map(lo, mid, f) + pairwise_map(mid, hi, f);
}
}  // namespace

double l1_norm(std::vector<double> const& v)
{
    return pairwise_map(0, v.size(), [&](std::size_t i) { return std::fabs(v[i]); });
}

double l1_distance(std::vector<double> const& a, std::vector<double> const& b)
{
    return pairwise_map(
        0, a.size(), [&](std::size_t i) { return std::fabs(a[i] - b[i]); });
}

double max_abs(std::vector<double> const& v)
{
    double m = 0;
    for (double x : v)
        m = std::max(m, std::fabs(x));
    return m;
}

}  // namespace radheat
