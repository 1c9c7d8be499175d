// A dictionary with a decoy atom that is nearly parallel to a true atom but
// has twice its norm. OMP ranks atoms by raw correlation and takes the
// decoy; OLS scores the projected, normalized atoms and recovers the support.

#include <cmath>
#include <iostream>

#include "olsrec/olsrec.hpp"

namespace {

void print_support(const char* label, const olsrec::SolverTrace& t) {
  std::cout << label << " picks (in order):";
  for (auto j : t.selected) std::cout << ' ' << j + 1;
  std::cout << "  residual " << t.residual_norms.back() << '\n';
}

}  // namespace

int main() {
  using namespace olsrec;
  const double theta = 0.2;
  // Columns: e1, e2, and a decoy 2 (cos theta, 0, sin theta).
  Matrix H(3, 3);
  H << 1.0, 0.0, 2.0 * std::cos(theta),
       0.0, 1.0, 0.0,
       0.0, 0.0, 2.0 * std::sin(theta);
  Vector beta(3);
  beta << 1.0, 1.2, 0.0;
  const MeasurementInstance inst = make_noiseless_instance(H, beta, 2);

  std::cout << "true support: 1 2\n";
  print_support("OLS", ols_solve(inst));
  print_support("OMP", omp_solve(inst));

  // With unit-norm columns the first picks coincide.
  SolverOptions unit;
  unit.normalize_columns = true;
  print_support("OMP on unit columns", omp_solve(inst, unit));
  return 0;
}
