#pragma once

// Dense primitives shared by the solvers and the certificates: complement
// projectors, the rank-one projector downdate, least squares through an
// orthogonal factorization, extreme singular values and the induced (1,1)
// operator norm.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "olsrec/errors.hpp"

namespace olsrec {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using IndexList = std::vector<std::size_t>;

/// Relative singular-value threshold for rank decisions.
inline constexpr double kRankTol = 1e-10;
/// Tolerance for idempotence / symmetry checks on projectors.
inline constexpr double kProjTol = 1e-8;

/// Gathers the listed columns of `H`, in list order.
inline Matrix select_columns(const Matrix& H, std::span<const std::size_t> cols) {
  Matrix out(H.rows(), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t c = 0; c < cols.size(); ++c)
    out.col(static_cast<Eigen::Index>(c)) = H.col(static_cast<Eigen::Index>(cols[c]));
  return out;
}

inline Vector select_entries(const Vector& v, std::span<const std::size_t> idx) {
  Vector out(static_cast<Eigen::Index>(idx.size()));
  for (std::size_t c = 0; c < idx.size(); ++c)
    out(static_cast<Eigen::Index>(c)) = v(static_cast<Eigen::Index>(idx[c]));
  return out;
}

inline bool all_finite(const Matrix& A) { return A.allFinite(); }

/// Orthogonal projector stored as an explicit symmetric n x n matrix.
class Projector {
public:
  Projector() = default;
  explicit Projector(Matrix m) : m_(std::move(m)) {}

  static Projector identity(Eigen::Index n) {
    return Projector(Matrix::Identity(n, n));
  }

  Eigen::Index dim() const noexcept { return m_.rows(); }
  const Matrix& matrix() const noexcept { return m_; }

  Vector apply(const Vector& v) const { return m_ * v; }
  Matrix apply(const Matrix& A) const { return m_ * A; }

  /// ||P^2 - P||_F
  double idempotence_error() const { return (m_ * m_ - m_).norm(); }
  double symmetry_error() const { return (m_ - m_.transpose()).norm(); }

private:
  Matrix m_;
};

struct SpectralExtremes {
  double sigma_min = 0.0;
  double sigma_max = 0.0;
};

namespace detail {

// Throws RankDeficient unless the singular values clear the relative
// threshold and the matrix is at least as tall as it is wide.
inline void require_full_column_rank(const Eigen::JacobiSVD<Matrix>& svd,
                                     Eigen::Index rows, Eigen::Index cols) {
  const auto& s = svd.singularValues();
  if (cols == 0) return;
  if (rows < cols) throw RankDeficient(0.0);
  const double smax = s(0);
  const double smin = s(s.size() - 1);
  if (!(smax > 0.0) || smin <= kRankTol * smax) throw RankDeficient(smin);
}

}  // namespace detail

/// Returns I - B B^+ for a full-column-rank B. An empty B yields the identity.
inline Projector complement_projector(const Matrix& B) {
  const Eigen::Index n = B.rows();
  if (B.cols() == 0) return Projector::identity(n);
  Eigen::JacobiSVD<Matrix> svd(B, Eigen::ComputeThinU);
  detail::require_full_column_rank(svd, B.rows(), B.cols());
  const Matrix& U = svd.matrixU();
  Matrix P = Matrix::Identity(n, n) - U * U.transpose();
  return Projector(std::move(P));
}

/// Default degeneracy threshold of the downdate: 1e-10 * ||a||_2.
inline double default_downdate_tol(const Vector& a) { return kRankTol * a.norm(); }

/// Rank-one downdate P - (P a a^T P) / ||P a||^2, i.e. the complement
/// projector after appending column `a` to the selected set.
inline Projector projector_downdate(const Projector& P, const Vector& a,
                                    std::optional<double> tol = std::nullopt) {
  const Vector Pa = P.apply(a);
  const double norm = Pa.norm();
  const double threshold = tol.value_or(default_downdate_tol(a));
  if (!(norm > threshold)) throw DegenerateColumn(0);
  const Vector v = Pa / norm;
  Matrix next = P.matrix();
  next.noalias() -= v * v.transpose();
  return Projector(std::move(next));
}

/// B^+ Y for full-column-rank B, via a thin SVD. Works for one or many
/// right-hand sides.
inline Matrix least_squares(const Matrix& B, const Matrix& Y) {
  if (B.rows() != Y.rows()) throw InvalidInstance("least_squares: row mismatch");
  if (B.cols() == 0) return Matrix::Zero(0, Y.cols());
  Eigen::JacobiSVD<Matrix> svd(B, Eigen::ComputeThinU | Eigen::ComputeThinV);
  detail::require_full_column_rank(svd, B.rows(), B.cols());
  return svd.solve(Y);
}

inline Vector least_squares(const Matrix& B, const Vector& y) {
  return least_squares(B, Matrix(y)).col(0);
}

inline SpectralExtremes spectral_extremes(const Matrix& B) {
  if (B.size() == 0) throw InvalidInstance("spectral_extremes: empty matrix");
  Eigen::JacobiSVD<Matrix> svd(B);
  const auto& s = svd.singularValues();
  return {s(s.size() - 1), s(0)};
}

/// Operator norm induced by the l1 vector norm: the largest absolute
/// column sum. Zero for a matrix without columns.
inline double induced_norm_1_1(const Matrix& A) {
  if (A.cols() == 0 || A.rows() == 0) return 0.0;
  return A.cwiseAbs().colwise().sum().maxCoeff();
}

/// Operator norm induced by the l-infinity vector norm: the largest absolute
/// row sum.
inline double induced_norm_inf_inf(const Matrix& A) {
  if (A.cols() == 0 || A.rows() == 0) return 0.0;
  return A.cwiseAbs().rowwise().sum().maxCoeff();
}

}  // namespace olsrec
