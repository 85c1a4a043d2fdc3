/*---------------------------------*-C-*-------------------------------------*
 * Copyright 2026 radheat developers.
 * SPDX-License-Identifier: Apache-2.0
 *---------------------------------------------------------------------------*/
/*! \file test_capi.c
 *  Exercises the shared library through its C header only.
 *
 *  Usage: test_capi SCRATCH_DIR
 */
#include <math.h>
#include <stdio.h>
#include <stdlib.h>
#include <string.h>

#include "radheat/radheat.h"

static int failures = 0;

#define EXPECT(cond)                                                   \
    do                                                                 \
    {                                                                  \
        if (!(cond))                                                   \
        {                                                              \
            fprintf(stderr, "%s:%d: failed: %s\n", __FILE__, __LINE__, \
                    #cond);                                            \
            ++failures;                                                \
        }                                                              \
    } while (0)

static void write_file(char const* path, char const* text)
{
    FILE* f = fopen(path, "w");
    if (!f)
    {
        fprintf(stderr, "cannot write %s\n", path);
        exit(1);
    }
    fputs(text, f);
    fclose(f);
}

int main(int argc, char** argv)
{
    char cfg[512];
    char bad[512];
    size_t n;
    double* T;
    double* xyz;
    double worst = 0;
    size_t m;
    rh_options* opt = NULL;
    rh_solution* sol = NULL;

    if (argc < 2)
    {
        fprintf(stderr, "usage: test_capi SCRATCH_DIR\n");
        return 1;
    }
    snprintf(cfg, sizeof cfg, "%s/capi_eq.json", argv[1]);
    snprintf(bad, sizeof bad, "%s/capi_bad.json", argv[1]);
    write_file(cfg,
               "{\"mode\": \"grey\", \"boundary\": {\"kind\": \"equilibrium\", "
               "\"T0\": 1.0}, \"spatial\": {\"h\": 0.25}, "
               "\"spectral\": {\"n_nodes\": 16}, \"angular\": {\"n_polar\": 4, "
               "\"n_azimuth\": 8}}");
    write_file(bad, "{\"mode\": \"grey\", \"spatial\": {\"h\": -1}}");

    EXPECT(strcmp(rh_version(), "1.0.0") == 0);
    EXPECT(strcmp(rh_status_string(RH_NOT_CONVERGED), "not converged") == 0);

    EXPECT(rh_options_create(&opt) == RH_OK);
    EXPECT(rh_options_set_threads(opt, -1) == RH_CONFIG_ERROR);
    EXPECT(strlen(rh_last_error()) > 0);
    EXPECT(rh_options_set_threads(opt, 1) == RH_OK);
    EXPECT(rh_options_set_quiet(opt, 1) == RH_OK);
    EXPECT(rh_options_set_output(opt, "") == RH_CONFIG_ERROR);

    EXPECT(rh_solve_config(cfg, &sol) == RH_OK);
    n = rh_solution_node_count(sol);
    EXPECT(n > 0);
    EXPECT(rh_solution_converged(sol) == 1);
    EXPECT(rh_solution_iterations(sol) > 0);
    T = malloc(n * sizeof(double));
    xyz = malloc(3 * n * sizeof(double));
    EXPECT(rh_solution_temperature(sol, T, n) == RH_OK);
    EXPECT(rh_solution_temperature(sol, T, n + 1) == RH_CONFIG_ERROR);
    EXPECT(rh_solution_positions(sol, xyz, n) == RH_OK);
    for (m = 0; m < n; ++m)
    {
        if (fabs(T[m] - 1) > worst)
            worst = fabs(T[m] - 1);
        EXPECT(xyz[3 * m] * xyz[3 * m] + xyz[3 * m + 1] * xyz[3 * m + 1]
                   + xyz[3 * m + 2] * xyz[3 * m + 2]
               < 1);
    }
    EXPECT(worst < 1e-2);
    free(T);
    free(xyz);
    rh_solution_destroy(sol);

    sol = NULL;
    EXPECT(rh_solve_config(bad, &sol) == RH_CONFIG_ERROR);
    EXPECT(sol == NULL);
    EXPECT(strstr(rh_last_error(), "spatial.h") != NULL);
    EXPECT(rh_cmd_solve("/nonexistent/config.json", opt) == RH_CONFIG_ERROR);

    EXPECT(rh_cmd_validate(opt) == RH_OK);
    rh_testing_set_kernel_scale(1.01);
    EXPECT(rh_cmd_validate(opt) != RH_OK);
    rh_testing_set_kernel_scale(1.0);
    EXPECT(rh_cmd_validate(opt) == RH_OK);

    rh_options_destroy(opt);
    if (failures)
        fprintf(stderr, "%d failure(s)\n", failures);
    else
        printf("C API checks passed\n");
    return failures ? 1 : 0;
}
