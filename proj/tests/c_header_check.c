/* Compiles as C99 and drives the shared library without any C++ headers. */
#include <math.h>
#include <stdio.h>

#include "satcs.h"

static int failures = 0;

static void expect(int ok, const char* what) {
  if (!ok) {
    fprintf(stderr, "FAIL: %s (%s)\n", what, satcs_last_error());
    ++failures;
  }
}

int main(void) {
  expect(satcs_version() != NULL, "version string");
  expect(satcs_status_string(SATCS_OK) != NULL, "status string");

  satcs_solver_config config;
  satcs_solver_config_default(&config);
  expect(config.max_iter == 2000, "default max_iter");
  expect(config.rho == 1.0, "default rho");

  satcs_penalty* pen = NULL;
  expect(satcs_penalty_l1(0.25, &pen) == SATCS_OK, "penalty_l1");
  satcs_penalty_kind kind;
  double nu = 0.0;
  expect(satcs_penalty_info(pen, &kind, &nu) == SATCS_OK, "penalty_info");
  expect(kind == SATCS_PENALTY_L1 && nu == 0.25, "penalty_info values");
  satcs_penalty_free(pen);

  double lambda0 = 0.0;
  expect(satcs_lambda_numeric(0.0, &lambda0) == SATCS_OK, "lambda_numeric");
  expect(fabs(lambda0 - 0.7978845608028654) <= 1e-9, "lambda_numeric value");

  double bound = 0.0;
  expect(satcs_theorem1_bound_l1(1.0, 1.0, 1, 3.0, 1.0, &bound) == SATCS_OK,
         "bound_l1");
  expect(fabs(bound - 1.0) <= 1e-12, "bound_l1 value");
  expect(satcs_theorem1_bound_l0(1.0, 1.0, 1, 4.0, 1.0, &bound) == SATCS_OK,
         "bound_l0");
  expect(fabs(bound - 1.0) <= 1e-12, "bound_l0 value");

  double x[10];
  expect(satcs_generate_signal(10, 3, 42, x) == SATCS_OK, "generate_signal");
  {
    double norm2 = 0.0;
    int i;
    for (i = 0; i < 10; ++i) norm2 += x[i] * x[i];
    expect(fabs(sqrt(norm2) - 1.0) <= 1e-12, "signal unit norm");
  }

  expect(satcs_generate_signal(10, 0, 1, x) == SATCS_ERR_INVALID_ARGUMENT,
         "k = 0 rejected");

  if (failures == 0) printf("c header check: all checks passed\n");
  return failures == 0 ? 0 : 1;
}
