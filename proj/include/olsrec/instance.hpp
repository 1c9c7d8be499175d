#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <string>

#include "olsrec/linalg.hpp"

namespace olsrec {

/// y = H beta + eta with sparsity level k. beta and eta are known only for
/// synthetic instances.
struct MeasurementInstance {
  Matrix H;
  Vector y;
  std::optional<Vector> beta_true;
  std::optional<Vector> eta;
  std::size_t k = 0;

  Eigen::Index n() const noexcept { return H.rows(); }
  Eigen::Index m() const noexcept { return H.cols(); }

  /// Indices of the nonzeros of beta_true, ascending.
  IndexList true_support() const {
    IndexList s;
    if (!beta_true) return s;
    for (Eigen::Index j = 0; j < beta_true->size(); ++j)
      if ((*beta_true)(j) != 0.0) s.push_back(static_cast<std::size_t>(j));
    return s;
  }

  void validate() const {
    if (H.rows() < 1 || H.cols() < 1) throw InvalidInstance("H must be nonempty");
    if (!H.allFinite()) throw InvalidInstance("H has non-finite entries");
    if (y.size() != H.rows())
      throw InvalidInstance("y has length " + std::to_string(y.size()) +
                            " but H has " + std::to_string(H.rows()) + " rows");
    if (!y.allFinite()) throw InvalidInstance("y has non-finite entries");
    if (k < 1) throw InvalidInstance("k must be at least 1");
    if (k > static_cast<std::size_t>(H.rows()) || k > static_cast<std::size_t>(H.cols()))
      throw InvalidInstance("k = " + std::to_string(k) + " exceeds min(n, m) for a " +
                            std::to_string(H.rows()) + "x" + std::to_string(H.cols()) +
                            " matrix");
    if (beta_true) {
      if (beta_true->size() != H.cols()) throw InvalidInstance("beta has wrong length");
      if (true_support().size() > k) throw InvalidInstance("beta has more than k nonzeros");
    }
    if (eta && eta->size() != H.rows()) throw InvalidInstance("eta has wrong length");
    if (beta_true && eta) {
      const double gap = (H * *beta_true + *eta - y).norm();
      const double scale = std::max(1.0, y.norm());
      if (gap > 1e-12 * scale)
        throw InvalidInstance("y differs from H beta + eta by " + std::to_string(gap));
    }
  }
};

/// Builds y = H beta + eta.
inline MeasurementInstance make_instance(Matrix H, Vector beta, Vector eta, std::size_t k) {
  if (beta.size() != H.cols() || eta.size() != H.rows())
    throw InvalidInstance("beta or eta does not match a " + std::to_string(H.rows()) + "x" +
                          std::to_string(H.cols()) + " matrix");
  MeasurementInstance inst;
  inst.y = H * beta + eta;
  inst.H = std::move(H);
  inst.beta_true = std::move(beta);
  inst.eta = std::move(eta);
  inst.k = k;
  inst.validate();
  return inst;
}

inline MeasurementInstance make_noiseless_instance(Matrix H, Vector beta, std::size_t k) {
  Vector eta = Vector::Zero(H.rows());
  return make_instance(std::move(H), std::move(beta), std::move(eta), k);
}

}  // namespace olsrec
