/* The public header must be usable from plain C. */
#include <stdio.h>

#include "mzi/mzi.h"

int main(void) {
  mzi_params p;
  mzi_solution* s = NULL;
  double g2 = 0.0;
  mzi_params_default(&p);
  if (mzi_solve(&p, 5, &s) != MZI_OK) {
    fprintf(stderr, "solve failed: %s\n", mzi_last_error());
    return 1;
  }
  if (mzi_solution_g2(s, p.phi, MZI_PORT_MAIN, &g2) != MZI_OK || !(g2 < 0.1)) {
    fprintf(stderr, "unexpected g2 %g\n", g2);
    mzi_solution_free(s);
    return 1;
  }
  mzi_solution_free(s);
  printf("g2(0) = %.6g\n", g2);
  return 0;
}
