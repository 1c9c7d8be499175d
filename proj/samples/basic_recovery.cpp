// Draws a noisy Gaussian instance, recovers the support with OLS and OMP and
// prints the certificates along the OLS path.

#include <iostream>

#include "olsrec/olsrec.hpp"

int main() {
  using namespace olsrec;
  const std::size_t n = 40, m = 80, k = 3;
  const std::uint64_t seed = 7;

  const Matrix H = draw_matrix({EnsembleKind::Gaussian, n, m,
                                derive_seed(seed, StreamRole::Matrix), /*unit_columns=*/true});
  const SparseSignal sig = draw_signal({m, k, 1.0, MagnitudeLaw::Constant, SignLaw::Random,
                                        derive_seed(seed, StreamRole::Signal)});
  const Vector eta = draw_noise({n, 0.05, NoiseMode::ExactNorm, derive_seed(seed, StreamRole::Noise)});
  const MeasurementInstance inst = make_instance(H, sig.beta, eta, k);

  const SolverTrace ols = ols_solve(inst);
  const SolverTrace omp = omp_solve(inst);

  auto print = [](const char* name, const IndexList& idx) {
    std::cout << name << ":";
    for (auto j : idx) std::cout << ' ' << j + 1;
    std::cout << '\n';
  };
  print("true support", sig.support);
  print("OLS support ", ols.support());
  print("OMP support ", omp.support());

  const ErcReport erc = erc_ols_path(H, sig.support, true_prefix(ols.selected, sig.support));
  std::cout << "M_OMP = " << erc.m_omp << '\n';
  for (std::size_t i = 0; i < erc.m_ols_per_iter.size(); ++i)
    std::cout << "M_" << i + 1 << " = " << erc.m_ols_per_iter[i] << '\n';
  return 0;
}
