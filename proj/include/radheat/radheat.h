/*---------------------------------*-C-*-------------------------------------*
 * Copyright 2026 radheat developers.
 * SPDX-License-Identifier: Apache-2.0
 *---------------------------------------------------------------------------*/
/*! \file radheat.h
 *  C interface to the radheat shared library.
 *
 *  Status codes double as process exit codes. Every call that fails stores
 *  a message retrievable with rh_last_error() on the calling thread.
 */
#ifndef RADHEAT_RADHEAT_H
#define RADHEAT_RADHEAT_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#    define RH_API __declspec(dllexport)
#else
#    define RH_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum rh_status
{
    RH_OK = 0,
    RH_CONFIG_ERROR = 1,
    RH_NOT_CONVERGED = 2,
    RH_INVARIANT_VIOLATION = 3
} rh_status;

/* Command options; create, adjust, pass to rh_cmd_*, destroy */
typedef struct rh_options rh_options;

/* Solved fields held in memory */
typedef struct rh_solution rh_solution;

RH_API char const* rh_version(void);
RH_API char const* rh_status_string(rh_status status);
/* Message of the last failure on this thread ("" if none) */
RH_API char const* rh_last_error(void);

RH_API rh_status rh_options_create(rh_options** out);
RH_API void rh_options_destroy(rh_options* opt);
RH_API rh_status rh_options_set_threads(rh_options* opt, int threads);
RH_API rh_status rh_options_set_output(rh_options* opt, char const* dir);
RH_API rh_status rh_options_set_seed(rh_options* opt, uint64_t seed);
RH_API rh_status rh_options_set_quiet(rh_options* opt, int quiet);

/* Subcommands; opt may be NULL for defaults */
RH_API rh_status rh_cmd_solve(char const* config_path, rh_options const* opt);
RH_API rh_status rh_cmd_validate(rh_options const* opt);
RH_API rh_status rh_cmd_oracle(char const* config_path, rh_options const* opt);
RH_API rh_status rh_cmd_entropy(char const* artifact_path, rh_options const* opt);

/* Solve a config in memory without writing artifacts */
RH_API rh_status rh_solve_config(char const* config_path, rh_solution** out);
RH_API void rh_solution_destroy(rh_solution* sol);
RH_API size_t rh_solution_node_count(rh_solution const* sol);
RH_API int rh_solution_converged(rh_solution const* sol);
RH_API int rh_solution_iterations(rh_solution const* sol);
/* Copy n = node count values into buf */
RH_API rh_status rh_solution_temperature(rh_solution const* sol, double* buf, size_t n);
RH_API rh_status rh_solution_emission(rh_solution const* sol, double* buf, size_t n);
RH_API rh_status rh_solution_positions(rh_solution const* sol, double* xyz, size_t n);

/* Fault injection: scales the transport kernel density (1 restores it) */
RH_API void rh_testing_set_kernel_scale(double scale);

#ifdef __cplusplus
}
#endif

#endif /* RADHEAT_RADHEAT_H */
