//---------------------------------*-C++-*-----------------------------------//
// Copyright 2026 radheat developers.
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file solvers.cpp
//---------------------------------------------------------------------------//
#include "radheat/solvers.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <map>

#include "radheat/parallel.hpp"

namespace radheat
{
//---------------------------------------------------------------------------//
char const* to_string(Mode m)
{
    switch (m)
    {
        case Mode::scattering:
            return "scattering";
        case Mode::grey:
            return "grey";
        case Mode::spectral:
            return "spectral";
        case Mode::combined:
            return "combined";
    }
    return "unknown";
}

Mode mode_from_string(std::string const& s)
{
    if (s == "scattering")
        return Mode::scattering;
    if (s == "grey")
        return Mode::grey;
    if (s == "spectral")
        return Mode::spectral;
    if (s == "combined")
        return Mode::combined;
    fail(ErrorCode::config_invalid,
         "mode: expected scattering, grey, spectral or combined, got '" + s
             + "'");
}

namespace
{
//---------------------------------------------------------------------------//
class Stopwatch
{
  public:
    double seconds() const
    {
        return std::chrono::duration<double>(std::chrono::steady_clock::now()
                                             - start_)
            .count();
    }

  private:
    std::chrono::steady_clock::time_point start_{
        std::chrono::steady_clock::now()};
};

//---------------------------------------------------------------------------//
//! Residual bookkeeping with the monotone-decay check
class History
{
  public:
    explicit History(SolverReport& rep) : rep_(rep) {}

    void push(double r)
    {
        auto& h = rep_.residual_history;
        if (!std::isfinite(r))
        {
            fail(ErrorCode::invariant_violation,
                 "non-finite residual at iteration " + std::to_string(h.size()));
        }
        if (!h.empty())
        {
            double prev = h.back();
            if (prev > 0)
                rep_.contraction_estimates.push_back(r / prev);
            // The first step from the zero iterate is exempt
            if (h.size() >= 2 && r > prev * (1 + 1e-9) + 1e-12)
            {
                fail(ErrorCode::invariant_violation,
                     "residual increased from " + std::to_string(prev) + " to "
                         + std::to_string(r) + " at iteration "
                         + std::to_string(h.size()));
            }
        }
        h.push_back(r);
    }

  private:
    SolverReport& rep_;
};

double relative_change(std::vector<double> const& next,
                       std::vector<double> const& prev)
{
    double den = l1_norm(next);
    if (den == 0)
        return l1_distance(next, prev) == 0 ? 0 : 1;
    return l1_distance(next, prev) / den;
}

//---------------------------------------------------------------------------//
//! Shared discretization, boundary table and per-frequency coefficients
struct Setup
{
    explicit Setup(Problem const& p)
        : disc(std::make_shared<Discretization>(
            p.domain, p.h, p.angles, p.spectrum, p.ray_h))
        , conv(std::make_unique<LatticeConvolver>(disc->space))
    {
        M = disc->space.size();
        A = disc->angles.size();
        F = disc->spectrum.size();
        nu = disc->spectrum.nodes;
        q = disc->spectrum.weights;
        aa.resize(F);
        as.resize(F);
        for (std::size_t j = 0; j < F; ++j)
        {
            aa[j] = p.medium.absorption(nu[j]);
            as[j] = p.medium.scattering(nu[j]);
        }
        g = p.boundary.tabulate(disc->angles, disc->spectrum);
        T_max = p.options.T_max > 0 ? p.options.T_max : 2 * disc->spectrum.nu_max;
    }

    PeierlsKernel& kernel(double beta, SelfCellRule rule)
    {
        auto it = kernels.find(beta);
        if (it == kernels.end())
        {
            it = kernels
                     .emplace(beta,
                              std::make_unique<PeierlsKernel>(*conv, *disc, beta, rule))
                     .first;
        }
        return *it->second;
    }

    //! (1/4pi) sum_i w_i e^{-beta s(m,i)} gsum_i
    std::vector<double> boundary_term(double beta, std::vector<double> const& gsum) const
    {
        std::vector<double> out(M);
        auto const& ang = disc->angles;
        parallel_for(M, [&](std::size_t b, std::size_t e, int) {
            for (std::size_t m = b; m < e; ++m)
            {
                double sum = 0;
                for (std::size_t i = 0; i < A; ++i)
                {
                    if (gsum[i] != 0)
                        sum += ang.weights[i] * gsum[i] * std::exp(-beta * disc->paths(m, i));
                }
                out[m] = sum / four_pi;
            }
        });
        return out;
    }

    //! sum_{j in freq} c_j g_ij per direction
    std::vector<double> weighted_g(std::vector<std::size_t> const& freq,
                                   std::vector<double> const& c) const
    {
        std::vector<double> out(A, 0.0);
        for (std::size_t i = 0; i < A; ++i)
        {
            for (std::size_t j : freq)
                out[i] += c[j] * g[i * F + j];
        }
        return out;
    }

    //! Boundary mean intensities J_bdy_j for a set of frequencies sharing beta,
    //! written to J[m * F + j]
    void boundary_mean_intensity(double beta,
                                 std::vector<std::size_t> const& freq,
                                 std::vector<double>& J) const
    {
        auto const& ang = disc->angles;
        parallel_for(M, [&](std::size_t b, std::size_t e, int) {
            for (std::size_t m = b; m < e; ++m)
            {
                for (std::size_t j : freq)
                    J[m * F + j] = 0;
                for (std::size_t i = 0; i < A; ++i)
                {
                    double wt = ang.weights[i] * std::exp(-beta * disc->paths(m, i))
                                / four_pi;
                    for (std::size_t j : freq)
                        J[m * F + j] += wt * g[i * F + j];
                }
            }
        });
    }

    std::shared_ptr<Discretization> disc;
    std::unique_ptr<LatticeConvolver> conv;
    std::map<double, std::unique_ptr<PeierlsKernel>> kernels;
    std::size_t M{0}, A{0}, F{0};
    std::vector<double> nu, q, aa, as, g;
    double T_max{0};
};

//---------------------------------------------------------------------------//
//! Frequencies sharing (absorption, scattering) coefficients
struct Group
{
    double a{0};
    double s{0};
    double beta{0};
    std::vector<std::size_t> freq;
    PeierlsKernel* K{nullptr};
    std::vector<double> bdy;
    std::vector<double> W;
    std::vector<double> E;
};

std::vector<Group> make_groups(Setup& st,
                               SelfCellRule rule,
                               bool (*include)(double a, double s))
{
    std::vector<Group> groups;
    for (std::size_t j = 0; j < st.F; ++j)
    {
        double a = st.aa[j], s = st.as[j];
        if (!include(a, s))
            continue;
        auto it = std::find_if(groups.begin(), groups.end(), [&](Group const& g) {
            return g.a == a && g.s == s;
        });
        if (it == groups.end())
        {
            Group g;
            g.a = a;
            g.s = s;
            g.beta = a + s;
            groups.push_back(std::move(g));
            it = groups.end() - 1;
        }
        it->freq.push_back(j);
    }
    for (auto& g : groups)
        g.K = &st.kernel(g.beta, rule);
    return groups;
}

void record_kernels(std::vector<Group> const& groups, SolverReport& rep)
{
    rep.theta = 0;
    rep.min_self_coefficient = std::numeric_limits<double>::infinity();
    for (auto const& g : groups)
    {
        for (double v : g.K->row_mass())
            rep.theta = std::max(rep.theta, v);
        for (double v : g.K->self())
            rep.min_self_coefficient = std::min(rep.min_self_coefficient, v);
    }
    if (groups.empty())
        rep.min_self_coefficient = 0;
    rep.n_groups = groups.size();
}

void check_source(std::vector<double> const& S)
{
    for (std::size_t m = 0; m < S.size(); ++m)
    {
        if (S[m] < 0)
        {
            fail(ErrorCode::negative_source,
                 "boundary source term negative at node " + std::to_string(m));
        }
    }
}

//! Emission sums E_G(m) = sum_{j in G} c_j B_j(T_m)
void emission_sums(Setup const& st,
                   std::vector<Group>& groups,
                   std::vector<double> const& c,
                   std::vector<double> const& T)
{
    for (auto& g : groups)
        g.E.assign(st.M, 0.0);
    parallel_for(st.M, [&](std::size_t b, std::size_t e, int) {
        for (std::size_t m = b; m < e; ++m)
        {
            if (T[m] == 0)
                continue;
            for (auto& g : groups)
            {
                double sum = 0;
                for (std::size_t j : g.freq)
                    sum += c[j] * planck(st.nu[j], T[m]);
                g.E[m] = sum;
            }
        }
    });
}

void invert_all(EmissionMap const& f,
                std::vector<double> const& w,
                std::vector<double>& T)
{
    parallel_for(w.size(), [&](std::size_t b, std::size_t e, int) {
        for (std::size_t m = b; m < e; ++m)
            T[m] = f.inverse(w[m], T[m]);
    });
}

void finish_report(Solution& sol, Stopwatch const& clock)
{
    auto& rep = sol.report;
    rep.n_nodes = sol.T.size();
    double wmax = max_abs(sol.w);
    rep.conservation_abs = max_abs(sol.residual);
    rep.conservation_norm = wmax > 0 ? rep.conservation_abs / (four_pi * wmax) : 0;
    rep.wall_time = clock.seconds();
}

//---------------------------------------------------------------------------//
//! Linear solve W = bdy + (1/beta) K (a E + s W), warm-started from g.W
int inner_solve(Group& g, SolverOptions const& opt)
{
    std::size_t M = g.bdy.size();
    std::vector<double> tmp(M), next(M);
    if (g.s == 0)
    {
        g.K->apply(g.E.data(), tmp.data());
        for (std::size_t m = 0; m < M; ++m)
            g.W[m] = g.bdy[m] + tmp[m];
        return 1;
    }
    std::vector<double> src(M);
    for (int it = 1; it <= opt.inner_max_iter; ++it)
    {
        for (std::size_t m = 0; m < M; ++m)
            src[m] = (g.a * g.E[m] + g.s * g.W[m]) / g.beta;
        g.K->apply(src.data(), tmp.data());
        for (std::size_t m = 0; m < M; ++m)
            next[m] = g.bdy[m] + tmp[m];
        double r = relative_change(next, g.W);
        g.W.swap(next);
        if (!std::isfinite(r))
            break;
        if (r <= opt.inner_tol)
            return it;
    }
    fail(ErrorCode::inner_diverged,
         "inner transport solve did not reach tolerance "
             + std::to_string(opt.inner_tol));
}

//---------------------------------------------------------------------------//
//! Peierls form of the H series: U_{j+1} = (s / beta) K U_j
void h_certificate(Group const& g, double diameter, double eps, SolverReport& rep)
{
    std::size_t M = g.K->escape().size();
    int terms = h_series_terms(g.a, g.s, diameter, eps);
    std::vector<double> U(M), H(M), tmp(M);
    for (std::size_t m = 0; m < M; ++m)
    {
        U[m] = g.a / g.beta * (1 - g.K->escape()[m]);
        H[m] = U[m];
    }
    for (int j = 1; j < terms; ++j)
    {
        g.K->apply(U.data(), tmp.data());
        for (std::size_t m = 0; m < M; ++m)
        {
            U[m] = g.s / g.beta * tmp[m];
            H[m] += U[m];
        }
    }
    double bound = h_bound(g.a, g.s, diameter);
    double hmax = *std::max_element(H.begin(), H.end());
    if (hmax - bound > rep.h_integral_max - rep.h_bound || rep.h_bound == 0)
    {
        rep.h_integral_max = hmax;
        rep.h_bound = bound;
    }
    rep.truncation_terms = std::max(rep.truncation_terms, terms);
    double r = g.s / g.beta * -std::expm1(-g.beta * diameter);
    double b_last = g.a / g.beta * std::pow(r, terms) * -std::expm1(-g.beta * diameter);
    rep.truncation_bound = std::max(rep.truncation_bound, b_last / (1 - r));
    if (hmax > bound + 1e-3)
    {
        fail(ErrorCode::invariant_violation,
             "angular integral of H " + std::to_string(hmax)
                 + " exceeds its bound " + std::to_string(bound));
    }
}

//---------------------------------------------------------------------------//
//! Per-frequency mean intensities for a scattering medium at temperature T
std::vector<double> mean_intensities(Setup& st,
                                     std::vector<double> const& T,
                                     SolverOptions const& opt)
{
    std::size_t M = st.M, F = st.F;
    std::vector<double> J(M * F, 0.0);
    std::map<double, std::vector<std::size_t>> by_beta;
    for (std::size_t j = 0; j < F; ++j)
        by_beta[st.aa[j] + st.as[j]].push_back(j);
    for (auto const& [beta, freq] : by_beta)
        st.boundary_mean_intensity(beta, freq, J);

    Group g;
    g.bdy.resize(M);
    g.E.resize(M);
    g.W.resize(M);
    for (std::size_t j = 0; j < F; ++j)
    {
        g.a = st.aa[j];
        g.s = st.as[j];
        g.beta = g.a + g.s;
        if (g.beta == 0)
            continue;
        g.K = &st.kernel(g.beta, opt.self_cell);
        for (std::size_t m = 0; m < M; ++m)
        {
            g.bdy[m] = J[m * F + j];
            g.E[m] = g.a > 0 && T[m] > 0 ? planck(st.nu[j], T[m]) : 0;
            g.W[m] = g.bdy[m];
        }
        inner_solve(g, opt);
        for (std::size_t m = 0; m < M; ++m)
            J[m * F + j] = g.W[m];
    }
    return J;
}

bool has_absorption(double a, double) { return a > 0; }
bool has_extinction(double a, double s) { return a + s > 0; }

//---------------------------------------------------------------------------//
Solution solve_sweep(Problem const& p, Mode mode);

}  // namespace

//---------------------------------------------------------------------------//
// MODE CHECKS
//---------------------------------------------------------------------------//
void check_mode(Problem const& p, Mode mode)
{
    auto const& med = p.medium;
    auto bad = [mode](std::string const& why) {
        fail(ErrorCode::config_invalid,
             std::string("mode-compatibility: ") + to_string(mode) + " " + why);
    };
    switch (mode)
    {
        case Mode::grey:
            if (!med.absorption.is_constant() || med.absorption.is_zero())
                bad("requires a constant positive absorption coefficient");
            if (!med.scattering.is_zero())
                bad("requires zero scattering");
            break;
        case Mode::spectral:
            if (med.absorption.is_zero())
                bad("requires nonzero absorption");
            if (!med.scattering.is_zero())
                bad("requires zero scattering (use combined)");
            break;
        case Mode::scattering:
            if (!med.absorption.is_zero())
                bad("requires zero absorption (use combined)");
            if (med.scattering.is_zero())
                bad("requires nonzero scattering");
            break;
        case Mode::combined:
            if (med.absorption.is_zero())
            {
                bad("requires nonzero absorption; the temperature is "
                    "indeterminate without it, use scattering mode");
            }
            break;
    }
}

Solution solve(Problem const& p, Mode mode)
{
    check_mode(p, mode);
    switch (mode)
    {
        case Mode::grey:
            return solve_grey(p);
        case Mode::spectral:
            return solve_spectral(p);
        case Mode::scattering:
            return solve_scattering(p);
        case Mode::combined:
            return solve_combined(p);
    }
    fail(ErrorCode::invalid_argument, "unknown mode");
}

//---------------------------------------------------------------------------//
// GREY
//---------------------------------------------------------------------------//
/*!
 * a = sigma T^4 solves a = K_alpha a + S.
 *
 * Working with beta = alpha in physical coordinates is the same as
 * rescaling x -> alpha x and using the unit kernel: the discrete weights
 * kernel_density(alpha, r) h^3 are invariant under that change.
 */
Solution solve_grey(Problem const& p)
{
    check_mode(p, Mode::grey);
    Stopwatch clock;
    Setup st(p);
    auto const& opt = p.options;
    double alpha = p.medium.absorption(1.0);
    auto& K = st.kernel(alpha, opt.self_cell);
    auto S = st.boundary_term(
        alpha, p.boundary.frequency_integrals(st.disc->angles, st.disc->spectrum));
    check_source(S);

    Solution sol;
    sol.mode = Mode::grey;
    sol.disc = st.disc;
    auto& rep = sol.report;
    Group view;
    view.K = &K;
    record_kernels({view}, rep);
    rep.n_groups = 1;

    History hist(rep);
    std::vector<double> a(st.M, 0.0), next(st.M);
    for (int it = 1; it <= opt.max_iter; ++it)
    {
        K.apply(a.data(), next.data());
        for (std::size_t m = 0; m < st.M; ++m)
            next[m] += S[m];
        double r = relative_change(next, a);
        a.swap(next);
        hist.push(r);
        rep.iterations = it;
        if (r <= opt.tol)
        {
            rep.converged = true;
            break;
        }
    }

    K.apply(a.data(), next.data());
    sol.residual.resize(st.M);
    sol.T.resize(st.M);
    for (std::size_t m = 0; m < st.M; ++m)
    {
        sol.residual[m] = four_pi * (a[m] - next[m] - S[m]);
        sol.T[m] = std::pow(std::max(a[m], 0.0) / stefan_sigma(), 0.25);
    }
    sol.w = std::move(a);
    finish_report(sol, clock);
    return sol;
}

//---------------------------------------------------------------------------//
// SPECTRAL
//---------------------------------------------------------------------------//
/*!
 * w = f(T) solves w = S + sum_G K_G E_G(f^{-1}(w)).
 */
Solution solve_spectral(Problem const& p)
{
    check_mode(p, Mode::spectral);
    Stopwatch clock;
    Setup st(p);
    auto const& opt = p.options;
    EmissionMap f(p.medium.absorption, st.disc->spectrum, st.T_max);

    std::vector<double> c(st.F);
    for (std::size_t j = 0; j < st.F; ++j)
        c[j] = st.q[j] * st.aa[j];
    auto groups = make_groups(st, opt.self_cell, has_absorption);
    std::vector<double> S(st.M, 0.0);
    for (auto& g : groups)
    {
        g.bdy = st.boundary_term(g.beta, st.weighted_g(g.freq, c));
        for (std::size_t m = 0; m < st.M; ++m)
            S[m] += g.bdy[m];
    }
    check_source(S);

    Solution sol;
    sol.mode = Mode::spectral;
    sol.disc = st.disc;
    auto& rep = sol.report;
    record_kernels(groups, rep);
    double smax = S.empty() ? 0 : *std::max_element(S.begin(), S.end());
    rep.cap = rep.theta < 1 ? smax / (1 - rep.theta)
                            : std::numeric_limits<double>::infinity();

    std::vector<double> T(st.M, 0.0), tmp(st.M);
    auto apply_map = [&](std::vector<double> const& w, std::vector<double>& out) {
        invert_all(f, w, T);
        emission_sums(st, groups, c, T);
        out = S;
        for (auto& g : groups)
        {
            g.K->apply(g.E.data(), tmp.data());
            for (std::size_t m = 0; m < st.M; ++m)
                out[m] += tmp[m];
        }
    };

    History hist(rep);
    std::vector<double> w(st.M, 0.0), next;
    for (int it = 1; it <= opt.max_iter; ++it)
    {
        apply_map(w, next);
        double top = max_abs(next);
        if (top > rep.cap * (1 + 1e-10))
        {
            fail(ErrorCode::cap_exceeded,
                 "iterate " + std::to_string(top) + " exceeds the bound L = "
                     + std::to_string(rep.cap));
        }
        double r = relative_change(next, w);
        w.swap(next);
        hist.push(r);
        rep.iterations = it;
        if (r <= opt.tol)
        {
            rep.converged = true;
            break;
        }
    }

    apply_map(w, next);
    sol.T = T;
    sol.residual.resize(st.M);
    for (std::size_t m = 0; m < st.M; ++m)
        sol.residual[m] = four_pi * (w[m] - next[m]);
    sol.w = std::move(w);
    finish_report(sol, clock);
    return sol;
}

//---------------------------------------------------------------------------//
// SCATTERING
//---------------------------------------------------------------------------//
/*!
 * Pure scattering: W_G = sum_{j in G} q_j J_j iterates W <- bdy + K W from
 * the boundary-only field. The radiation temperature T solves
 * sum_j q_j B_j(T) = sum_G W_G.
 */
Solution solve_scattering(Problem const& p)
{
    check_mode(p, Mode::scattering);
    if (!p.medium.kernel.is_isotropic())
        return solve_sweep(p, Mode::scattering);
    Stopwatch clock;
    Setup st(p);
    auto const& opt = p.options;

    auto groups = make_groups(st, opt.self_cell, has_extinction);
    for (auto& g : groups)
    {
        g.bdy = st.boundary_term(g.beta, st.weighted_g(g.freq, st.q));
        g.W = g.bdy;
    }
    // Transparent channels keep their boundary value
    std::vector<std::size_t> clear;
    for (std::size_t j = 0; j < st.F; ++j)
    {
        if (st.as[j] == 0)
            clear.push_back(j);
    }
    std::vector<double> W0(st.M, 0.0);
    if (!clear.empty())
        W0 = st.boundary_term(0, st.weighted_g(clear, st.q));

    Solution sol;
    sol.mode = Mode::scattering;
    sol.disc = st.disc;
    auto& rep = sol.report;
    record_kernels(groups, rep);

    auto total = [&]() {
        std::vector<double> t = W0;
        for (auto const& g : groups)
        {
            for (std::size_t m = 0; m < st.M; ++m)
                t[m] += g.W[m];
        }
        return t;
    };

    History hist(rep);
    std::vector<double> tmp(st.M);
    std::vector<double> cur = total();
    for (int it = 1; it <= opt.max_iter; ++it)
    {
        for (auto& g : groups)
        {
            g.K->apply(g.W.data(), tmp.data());
            for (std::size_t m = 0; m < st.M; ++m)
                g.W[m] = g.bdy[m] + tmp[m];
        }
        auto next = total();
        double dmax = 0, wmax = 0;
        for (std::size_t m = 0; m < st.M; ++m)
        {
            dmax = std::max(dmax, std::fabs(next[m] - cur[m]));
            wmax = std::max(wmax, std::fabs(next[m]));
        }
        double r = wmax > 0 ? dmax / wmax : 0;
        cur.swap(next);
        hist.push(r);
        rep.iterations = it;
        if (r <= opt.tol)
        {
            rep.converged = true;
            break;
        }
    }

    sol.residual.assign(st.M, 0.0);
    std::vector<double> mapped = W0;
    for (auto& g : groups)
    {
        g.K->apply(g.W.data(), tmp.data());
        for (std::size_t m = 0; m < st.M; ++m)
            mapped[m] += g.bdy[m] + tmp[m];
    }
    EmissionMap radiation(AbsorptionProfile(1.0), st.disc->spectrum, st.T_max);
    sol.T.assign(st.M, 0.0);
    invert_all(radiation, cur, sol.T);
    for (std::size_t m = 0; m < st.M; ++m)
        sol.residual[m] = four_pi * (cur[m] - mapped[m]);
    sol.w = cur;
    if (opt.keep_mean_intensity)
        sol.mean_intensity = mean_intensities(st, sol.T, opt);
    finish_report(sol, clock);
    return sol;
}

//---------------------------------------------------------------------------//
// COMBINED
//---------------------------------------------------------------------------//
/*!
 * Outer Picard iteration on w = f(T); each step solves the linear
 * transport problem at fixed T group by group in its angle-integrated form
 * W_G = bdy_G + (1/beta) K_G (a E_G + s W_G) and sets w = sum_G W_G.
 */
Solution solve_combined(Problem const& p)
{
    check_mode(p, Mode::combined);
    if (!p.medium.kernel.is_isotropic() && !p.medium.scattering.is_zero())
        return solve_sweep(p, Mode::combined);
    Stopwatch clock;
    Setup st(p);
    auto const& opt = p.options;
    EmissionMap f(p.medium.absorption, st.disc->spectrum, st.T_max);

    std::vector<double> c(st.F);
    for (std::size_t j = 0; j < st.F; ++j)
        c[j] = st.q[j] * st.aa[j];
    auto groups = make_groups(st, opt.self_cell, has_absorption);
    for (auto& g : groups)
    {
        g.bdy = st.boundary_term(g.beta, st.weighted_g(g.freq, c));
        g.W.assign(st.M, 0.0);
    }

    Solution sol;
    sol.mode = Mode::combined;
    sol.disc = st.disc;
    auto& rep = sol.report;
    record_kernels(groups, rep);
    double D = st.disc->domain.diameter();
    for (auto const& g : groups)
        h_certificate(g, D, opt.h_eps, rep);

    std::vector<double> T(st.M, 0.0);
    auto apply_map = [&](std::vector<double> const& w, std::vector<double>& out) {
        invert_all(f, w, T);
        emission_sums(st, groups, c, T);
        out.assign(st.M, 0.0);
        for (auto& g : groups)
        {
            rep.inner_iterations += inner_solve(g, opt);
            for (std::size_t m = 0; m < st.M; ++m)
                out[m] += g.W[m];
        }
    };

    History hist(rep);
    std::vector<double> w(st.M, 0.0), next;
    for (int it = 1; it <= opt.max_iter; ++it)
    {
        apply_map(w, next);
        double r = relative_change(next, w);
        w.swap(next);
        hist.push(r);
        rep.iterations = it;
        if (r <= opt.tol)
        {
            rep.converged = true;
            break;
        }
    }

    apply_map(w, next);
    sol.T = T;
    sol.residual.resize(st.M);
    for (std::size_t m = 0; m < st.M; ++m)
        sol.residual[m] = four_pi * (w[m] - next[m]);
    sol.w = std::move(w);
    if (opt.keep_mean_intensity && !p.medium.scattering.is_zero())
        sol.mean_intensity = mean_intensities(st, sol.T, opt);
    finish_report(sol, clock);
    return sol;
}

//---------------------------------------------------------------------------//
std::vector<double> conservation_residual(Problem const& p, Solution const& s)
{
    if (!s.residual.empty())
        return s.residual;
    return solve(p, s.mode).residual;
}

//---------------------------------------------------------------------------//
// SWEEP ENGINE
//---------------------------------------------------------------------------//
SweepEngine::SweepEngine(Discretization const& disc, std::vector<Channel> channels)
    : disc_(disc), channels_(std::move(channels))
{
}

void SweepEngine::emission_lattice(std::vector<double> const& T_lattice,
                                   std::vector<double>& E_lattice) const
{
    std::size_t L = T_lattice.size(), F = channels_.size();
    E_lattice.assign(L * F, 0.0);
    parallel_for(L, [&](std::size_t b, std::size_t e, int) {
        for (std::size_t idx = b; idx < e; ++idx)
        {
            double T = std::max(0.0, T_lattice[idx]);
            if (T == 0)
                continue;
            for (std::size_t j = 0; j < F; ++j)
            {
                auto const& ch = channels_[j];
                if (ch.absorb == 0)
                    continue;
                double em = grey_ ? stefan_sigma() * T * T * T * T : planck(ch.nu, T);
                E_lattice[idx * F + j] = ch.absorb * em;
            }
        }
    });
}

void SweepEngine::ray(Vec3 const& x,
                      Vec3 const& n,
                      double s,
                      double const* bdy,
                      double const* E_lattice,
                      double const* S_lattice,
                      std::size_t n_src,
                      std::size_t dir,
                      double* out) const
{
    std::size_t F = channels_.size();
    for (std::size_t j = 0; j < F; ++j)
        out[j] = bdy ? bdy[j] * std::exp(-channels_[j].beta * s) : 0;
    if (!(s > 0) || (!E_lattice && !S_lattice))
        return;
    int K = ray_steps(s, disc_.ray_h);
    double d = s / K;
    thread_local std::vector<double> src;
    thread_local std::vector<double> omega;
    src.assign(std::size_t(K + 1) * F, 0.0);
    omega.resize(K + 1);
    std::size_t slot = n_src == 1 ? 0 : dir;
    for (int k = 0; k <= K; ++k)
    {
        Vec3 p = x - (s - k * d) * n;
        auto stl = disc_.lattice.stencil(p);
        double* v = src.data() + std::size_t(k) * F;
        for (int c = 0; c < 8; ++c)
        {
            double wc = stl.weight[c];
            if (wc == 0)
                continue;
            if (E_lattice)
            {
                double const* row = E_lattice + stl.index[c] * F;
                for (std::size_t j = 0; j < F; ++j)
                    v[j] += wc * row[j];
            }
            if (S_lattice)
            {
                double const* row = S_lattice + (stl.index[c] * n_src + slot) * F;
                for (std::size_t j = 0; j < F; ++j)
                    v[j] += wc * row[j];
            }
        }
    }
    for (std::size_t j = 0; j < F; ++j)
    {
        exponential_weights(s, K, channels_[j].beta, omega.data());
        double sum = 0;
        for (int k = 0; k <= K; ++k)
            sum += omega[k] * src[std::size_t(k) * F + j];
        out[j] += sum;
    }
}

void SweepEngine::sweep(std::vector<double> const* g_table,
                        double const* E_lattice,
                        double const* S_lattice,
                        std::size_t n_src,
                        RadiationField& I) const
{
    std::size_t M = disc_.space.size(), A = disc_.angles.size(),
                F = channels_.size();
    I.n_nodes = M;
    I.n_dirs = A;
    I.n_freq = F;
    I.values.resize(M * A * F);
    parallel_for(M, [&](std::size_t b, std::size_t e, int) {
        for (std::size_t m = b; m < e; ++m)
        {
            for (std::size_t i = 0; i < A; ++i)
            {
                double const* bdy = g_table ? g_table->data() + i * F : nullptr;
                this->ray(disc_.space.centers[m],
                          disc_.angles.nodes[i],
                          disc_.paths(m, i),
                          bdy,
                          E_lattice,
                          S_lattice,
                          n_src,
                          i,
                          &I(m, i, 0));
            }
        }
    });
}

void SweepEngine::scattering_lattice(RadiationField const& I,
                                     ScatteringKernel const& K,
                                     std::vector<double> const& alpha_s,
                                     std::vector<double>& lattice,
                                     std::size_t& n_src) const
{
    std::size_t M = I.n_nodes, A = I.n_dirs, F = I.n_freq;
    auto const& w = disc_.angles.weights;
    std::vector<double> nodal;
    if (K.is_isotropic())
    {
        n_src = 1;
        nodal.assign(M * F, 0.0);
        for (std::size_t m = 0; m < M; ++m)
        {
            for (std::size_t i = 0; i < A; ++i)
            {
                for (std::size_t j = 0; j < F; ++j)
                    nodal[m * F + j] += w[i] * I(m, i, j);
            }
            for (std::size_t j = 0; j < F; ++j)
                nodal[m * F + j] *= alpha_s[j] / four_pi;
        }
    }
    else
    {
        n_src = A;
        nodal.assign(M * A * F, 0.0);
        parallel_for(M, [&](std::size_t b, std::size_t e, int) {
            for (std::size_t m = b; m < e; ++m)
            {
                for (std::size_t i = 0; i < A; ++i)
                {
                    double* out = nodal.data() + (m * A + i) * F;
                    for (std::size_t ip = 0; ip < A; ++ip)
                    {
                        double kw = w[ip] * K(i, ip);
                        for (std::size_t j = 0; j < F; ++j)
                            out[j] += kw * I(m, ip, j);
                    }
                    for (std::size_t j = 0; j < F; ++j)
                        out[j] *= alpha_s[j];
                }
            }
        });
    }
    disc_.lattice.extend(nodal.data(), n_src * F, lattice);
}

void SweepEngine::node_lattice(std::vector<double> const& v,
                               std::vector<double>& lattice) const
{
    disc_.lattice.extend(v.data(), channels_.size(), lattice);
}

//---------------------------------------------------------------------------//
RadiationField reconstruct_radiance(Problem const& p, Solution const& s)
{
    if (!s.radiance.values.empty())
        return s.radiance;
    auto const& disc = *s.disc;
    std::size_t M = disc.space.size(), A = disc.angles.size(),
                F = disc.spectrum.size();
    if (M * A * F > 50'000'000)
    {
        fail(ErrorCode::too_large,
             "radiation field of " + std::to_string(M * A * F)
                 + " values exceeds the reconstruction limit");
    }
    std::vector<SweepEngine::Channel> ch(F);
    std::vector<double> as(F);
    for (std::size_t j = 0; j < F; ++j)
    {
        double nu = disc.spectrum.nodes[j];
        ch[j].nu = nu;
        ch[j].absorb = p.medium.absorption(nu);
        as[j] = p.medium.scattering(nu);
        ch[j].beta = ch[j].absorb + as[j];
    }
    SweepEngine engine(disc, ch);
    auto g = p.boundary.tabulate(disc.angles, disc.spectrum);
    std::vector<double> E_lat;
    bool emit = s.mode != Mode::scattering;
    if (emit)
        engine.emission_lattice(disc.lattice.extend(s.T), E_lat);
    std::vector<double> S_lat;
    if (!s.mean_intensity.empty())
    {
        std::vector<double> src(M * F);
        for (std::size_t m = 0; m < M; ++m)
        {
            for (std::size_t j = 0; j < F; ++j)
                src[m * F + j] = as[j] * s.mean_intensity[m * F + j];
        }
        engine.node_lattice(src, S_lat);
    }
    RadiationField I;
    engine.sweep(&g,
                 emit ? E_lat.data() : nullptr,
                 S_lat.empty() ? nullptr : S_lat.data(),
                 1,
                 I);
    return I;
}

//---------------------------------------------------------------------------//
// H SERIES
//---------------------------------------------------------------------------//
double h_bound(double alpha_a, double alpha_s, double diameter)
{
    double beta = alpha_a + alpha_s;
    double e = std::exp(-beta * diameter);
    return alpha_a * (1 - e) / (alpha_a + alpha_s * e);
}

/*!
 * Term j is bounded by b_j = (a/beta) r^j (1 - e^{-beta D}) with
 * r = (s/beta)(1 - e^{-beta D}); the tail from term J on is b_J / (1 - r).
 */
int h_series_terms(double alpha_a, double alpha_s, double diameter, double eps)
{
    double beta = alpha_a + alpha_s;
    double one_minus = -std::expm1(-beta * diameter);
    double r = alpha_s / beta * one_minus;
    double b = alpha_a / beta * one_minus;
    int J = 1;
    b *= r;
    while (b / (1 - r) > eps && J < 100000)
    {
        b *= r;
        ++J;
    }
    return J;
}

HResult compute_H(Discretization const& disc,
                  double alpha_a,
                  double alpha_s,
                  ScatteringKernel const& kernel,
                  double eps)
{
    double beta = alpha_a + alpha_s;
    if (!(beta > 0))
        fail(ErrorCode::invalid_argument, "compute_H needs alpha_a + alpha_s > 0");
    double D = disc.domain.diameter();
    HResult res;
    res.bound = h_bound(alpha_a, alpha_s, D);
    res.terms = h_series_terms(alpha_a, alpha_s, D, eps);
    double one_minus = -std::expm1(-beta * D);
    double r = alpha_s / beta * one_minus;
    res.truncation_bound = alpha_a / beta * std::pow(r, res.terms) * one_minus / (1 - r);

    std::size_t M = disc.space.size(), A = disc.angles.size();
    auto const& w = disc.angles.weights;
    RadiationField t;
    t.n_nodes = M;
    t.n_dirs = A;
    t.n_freq = 1;
    t.values.resize(M * A);
    for (std::size_t m = 0; m < M; ++m)
    {
        for (std::size_t i = 0; i < A; ++i)
            t(m, i, 0) = alpha_a / (four_pi * beta) * -std::expm1(-beta * disc.paths(m, i));
    }
    auto integrate = [&](RadiationField const& f, std::vector<double>& acc) {
        double top = 0;
        for (std::size_t m = 0; m < M; ++m)
        {
            double u = 0;
            for (std::size_t i = 0; i < A; ++i)
                u += w[i] * f(m, i, 0);
            if (u < 0)
                res.monotone = false;
            acc[m] += u;
            top = std::max(top, u);
        }
        return top;
    };
    res.integral.assign(M, 0.0);
    res.term_max.push_back(integrate(t, res.integral));

    SweepEngine engine(disc, {{1.0, beta, 0.0}});
    std::vector<double> lattice;
    std::vector<double> as{alpha_s};
    RadiationField next;
    for (int j = 1; j < res.terms; ++j)
    {
        std::size_t n_src = 1;
        engine.scattering_lattice(t, kernel, as, lattice, n_src);
        engine.sweep(nullptr, nullptr, lattice.data(), n_src, next);
        std::swap(t, next);
        res.term_max.push_back(integrate(t, res.integral));
    }
    return res;
}

//---------------------------------------------------------------------------//
// ORACLE
//---------------------------------------------------------------------------//
namespace
{
//! Temperature from mean radiances for the oracle and sweep solvers
struct ThermalUpdate
{
    Mode mode;
    std::vector<double> weight;  // per channel: q_j a_j, q_j, or 1
    std::unique_ptr<EmissionMap> f;

    void operator()(RadiationField const& I,
                    AngularGrid const& ang,
                    std::vector<double>& w,
                    std::vector<double>& T) const
    {
        std::size_t M = I.n_nodes, A = I.n_dirs, F = I.n_freq;
        w.assign(M, 0.0);
        T.resize(M, 0.0);
        for (std::size_t m = 0; m < M; ++m)
        {
            double sum = 0;
            for (std::size_t j = 0; j < F; ++j)
            {
                if (weight[j] == 0)
                    continue;
                double acc = 0;
                for (std::size_t i = 0; i < A; ++i)
                    acc += ang.weights[i] * I(m, i, j);
                sum += weight[j] * acc;
            }
            w[m] = sum / four_pi;
        }
        if (mode == Mode::grey)
        {
            for (std::size_t m = 0; m < M; ++m)
                T[m] = std::pow(std::max(w[m], 0.0) / stefan_sigma(), 0.25);
        }
        else
        {
            invert_all(*f, w, T);
        }
    }
};

struct SweepModel
{
    std::vector<SweepEngine::Channel> channels;
    std::vector<double> alpha_s;
    std::vector<double> g;
    ThermalUpdate update;
    bool emits{true};
    bool scatters{false};
};

SweepModel make_sweep_model(Problem const& p, Discretization const& disc, Mode mode)
{
    auto const& spec = disc.spectrum;
    std::size_t F = spec.size();
    double T_max = p.options.T_max > 0 ? p.options.T_max : 2 * spec.nu_max;
    SweepModel sm;
    sm.update.mode = mode;
    if (mode == Mode::grey)
    {
        double a = p.medium.absorption(1.0);
        sm.channels = {{1.0, a, a}};
        sm.alpha_s = {0.0};
        sm.g = p.boundary.frequency_integrals(disc.angles, spec);
        sm.update.weight = {a};
        return sm;
    }
    sm.g = p.boundary.tabulate(disc.angles, spec);
    sm.channels.resize(F);
    sm.alpha_s.resize(F);
    sm.update.weight.resize(F);
    for (std::size_t j = 0; j < F; ++j)
    {
        double nu = spec.nodes[j];
        double a = p.medium.absorption(nu);
        double s = p.medium.scattering(nu);
        sm.channels[j] = {nu, a + s, a};
        sm.alpha_s[j] = s;
        if (s > 0)
            sm.scatters = true;
        sm.update.weight[j] = spec.weights[j] * (mode == Mode::scattering ? 1 : a);
    }
    sm.emits = mode != Mode::scattering;
    AbsorptionProfile profile = mode == Mode::scattering ? AbsorptionProfile(1.0)
                                                         : p.medium.absorption;
    sm.update.f = std::make_unique<EmissionMap>(profile, spec, T_max);
    return sm;
}

double max_relative_change(std::vector<double> const& next,
                           std::vector<double> const& prev)
{
    double d = 0, top = 0;
    for (std::size_t k = 0; k < next.size(); ++k)
    {
        d = std::max(d, std::fabs(next[k] - prev[k]));
        top = std::max(top, std::fabs(next[k]));
    }
    return top > 0 ? d / top : d;
}

//---------------------------------------------------------------------------//
/*!
 * Angular-sweep solver for anisotropic scattering kernels.
 *
 * Combined: outer Picard on w with inner source iteration on I at fixed T.
 * Scattering: source iteration on I from the boundary-only field.
 */
Solution solve_sweep(Problem const& p, Mode mode)
{
    Stopwatch clock;
    auto disc = std::make_shared<Discretization>(
        p.domain, p.h, p.angles, p.spectrum, p.ray_h);
    std::size_t M = disc->space.size(), A = disc->angles.size(),
                F = disc->spectrum.size();
    if (disc->lattice.lattice_size() * A * F > 30'000'000)
    {
        fail(ErrorCode::too_large,
             "anisotropic scattering needs lattice x directions x frequencies "
             "<= 3e7; coarsen the grids");
    }
    if (p.medium.kernel.grid_size() != A)
    {
        fail(ErrorCode::config_invalid,
             "medium.kernel: table size does not match the angular grid");
    }
    auto const& opt = p.options;
    auto sm = make_sweep_model(p, *disc, mode);
    SweepEngine engine(*disc, sm.channels);

    Solution sol;
    sol.mode = mode;
    sol.disc = disc;
    auto& rep = sol.report;
    rep.n_groups = F;
    History hist(rep);

    RadiationField I, next;
    engine.sweep(&sm.g, nullptr, nullptr, 1, I);
    std::vector<double> lattice, E_lat;
    std::size_t n_src = 1;
    auto inner = [&](double const* E_lattice) {
        for (int it = 1; it <= opt.inner_max_iter; ++it)
        {
            engine.scattering_lattice(I, p.medium.kernel, sm.alpha_s, lattice, n_src);
            engine.sweep(&sm.g, E_lattice, lattice.data(), n_src, next);
            double r = max_relative_change(next.values, I.values);
            std::swap(I, next);
            if (r <= opt.inner_tol)
                return it;
        }
        fail(ErrorCode::inner_diverged, "inner angular sweep did not converge");
    };

    std::vector<double> w(M, 0.0), wn, T(M, 0.0);
    if (mode == Mode::combined)
    {
        std::map<std::pair<double, double>, bool> seen;
        for (std::size_t j = 0; j < F; ++j)
        {
            double a = sm.channels[j].absorb, s = sm.alpha_s[j];
            if (a == 0 || seen[{a, s}])
                continue;
            seen[{a, s}] = true;
            auto H = compute_H(*disc, a, s, p.medium.kernel, opt.h_eps);
            double hmax = *std::max_element(H.integral.begin(), H.integral.end());
            if (hmax > rep.h_integral_max)
            {
                rep.h_integral_max = hmax;
                rep.h_bound = H.bound;
            }
            rep.truncation_terms = std::max(rep.truncation_terms, H.terms);
            rep.truncation_bound = std::max(rep.truncation_bound, H.truncation_bound);
            if (hmax > H.bound + 1e-3)
            {
                fail(ErrorCode::invariant_violation,
                     "angular integral of H exceeds its bound");
            }
        }
        for (int it = 1; it <= opt.max_iter; ++it)
        {
            engine.emission_lattice(disc->lattice.extend(T), E_lat);
            rep.inner_iterations += inner(E_lat.data());
            sm.update(I, disc->angles, wn, T);
            double r = relative_change(wn, w);
            w.swap(wn);
            hist.push(r);
            rep.iterations = it;
            if (r <= opt.tol)
            {
                rep.converged = true;
                break;
            }
        }
        // Residual of the outer map at the returned state
        engine.emission_lattice(disc->lattice.extend(T), E_lat);
        inner(E_lat.data());
        std::vector<double> Tn = T;
        sm.update(I, disc->angles, wn, Tn);
    }
    else
    {
        for (int it = 1; it <= opt.max_iter; ++it)
        {
            engine.scattering_lattice(I, p.medium.kernel, sm.alpha_s, lattice, n_src);
            engine.sweep(&sm.g, nullptr, lattice.data(), n_src, next);
            double dmax = 0, top = 0;
            for (std::size_t m = 0; m < M; ++m)
            {
                double d = 0, v = 0;
                for (std::size_t i = 0; i < A; ++i)
                {
                    for (std::size_t j = 0; j < F; ++j)
                    {
                        double c = disc->angles.weights[i] * disc->spectrum.weights[j];
                        d += c * std::fabs(next(m, i, j) - I(m, i, j));
                        v += c * next(m, i, j);
                    }
                }
                dmax = std::max(dmax, d);
                top = std::max(top, v);
            }
            std::swap(I, next);
            double r = top > 0 ? dmax / top : 0;
            hist.push(r);
            rep.iterations = it;
            if (r <= opt.tol)
            {
                rep.converged = true;
                break;
            }
        }
        sm.update(I, disc->angles, w, T);
        engine.scattering_lattice(I, p.medium.kernel, sm.alpha_s, lattice, n_src);
        engine.sweep(&sm.g, nullptr, lattice.data(), n_src, next);
        std::vector<double> Tn = T;
        sm.update(next, disc->angles, wn, Tn);
    }

    sol.T = T;
    sol.residual.resize(M);
    for (std::size_t m = 0; m < M; ++m)
        sol.residual[m] = four_pi * (w[m] - wn[m]);
    sol.w = w;
    sol.mean_intensity.assign(M * F, 0.0);
    for (std::size_t m = 0; m < M; ++m)
    {
        for (std::size_t i = 0; i < A; ++i)
        {
            for (std::size_t j = 0; j < F; ++j)
                sol.mean_intensity[m * F + j] += disc->angles.weights[i] * I(m, i, j) / four_pi;
        }
    }
    sol.radiance = std::move(I);
    finish_report(sol, clock);
    return sol;
}
}  // namespace

//---------------------------------------------------------------------------//
/*!
 * Iterate I <- sweep(T, I) and T <- temperature(I) jointly.
 *
 * Every iteration marches every (node, direction, frequency) ray through the
 * interpolated temperature and scattering fields; no kernel matrices or
 * angle-integrated shortcuts are used. In grey mode the frequency-integrated
 * radiance is carried with emission sigma T^4.
 */
OracleResult oracle_solve(Problem const& p, Mode mode, double tol, int max_iter)
{
    check_mode(p, mode);
    Discretization disc(p.domain, p.h, p.angles, p.spectrum, p.ray_h);
    std::size_t M = disc.space.size(), A = disc.angles.size(),
                F = mode == Mode::grey ? 1 : disc.spectrum.size();
    if (M * A * F > oracle_max_unknowns)
    {
        fail(ErrorCode::too_large,
             "oracle needs nodes x directions x frequencies <= 1e5, got "
                 + std::to_string(M * A * F));
    }
    if (!p.medium.kernel.is_isotropic() && p.medium.kernel.grid_size() != A)
    {
        fail(ErrorCode::config_invalid,
             "medium.kernel: table size does not match the angular grid");
    }
    auto sm = make_sweep_model(p, disc, mode);
    SweepEngine engine(disc, sm.channels);
    engine.set_grey_emission(mode == Mode::grey);

    OracleResult res;
    RadiationField I, next;
    I.n_nodes = M;
    I.n_dirs = A;
    I.n_freq = F;
    I.values.assign(M * A * F, 0.0);
    std::vector<double> T(M, 0.0), Tn(M, 0.0), w;
    std::vector<double> E_lat, S_lat;
    for (int it = 1; it <= max_iter; ++it)
    {
        if (sm.emits)
            engine.emission_lattice(disc.lattice.extend(T), E_lat);
        std::size_t n_src = 1;
        if (sm.scatters)
            engine.scattering_lattice(I, p.medium.kernel, sm.alpha_s, S_lat, n_src);
        engine.sweep(&sm.g,
                     sm.emits ? E_lat.data() : nullptr,
                     sm.scatters ? S_lat.data() : nullptr,
                     n_src,
                     next);
        double dI = max_relative_change(next.values, I.values);
        std::swap(I, next);
        Tn = T;
        sm.update(I, disc.angles, w, Tn);
        double dT = max_relative_change(Tn, T);
        T.swap(Tn);
        res.iterations = it;
        res.final_change = std::max(dI, dT);
        if (res.final_change <= tol)
        {
            res.T = T;
            res.w = w;
            res.radiance = std::move(I);
            return res;
        }
    }
    fail(ErrorCode::max_iter_exceeded,
         "oracle did not converge in " + std::to_string(max_iter)
             + " iterations");
}

}  // namespace radheat
