#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "recollab/sparse_tensor.hpp"

namespace recollab {

struct CPConfig {
  int rank = 1;
  int max_iters = 100;
  double tol = 1e-4;  // stop when the fit changes by less than this
  std::uint64_t seed = 0;

  void validate() const;
};

/// Rank-K factorization X ~ sum_f lambda_f * a_f o b_f o c_f.
/// Columns of A, B, C have unit Euclidean norm (a zero column only alongside
/// lambda_f = 0) and lambda is non-negative, sorted descending.
struct CPModel {
  int rank = 0;
  Eigen::VectorXd lambda;
  Eigen::MatrixXd A;  // dim0 x K
  Eigen::MatrixXd B;  // dim1 x K
  Eigen::MatrixXd C;  // dim2 x K
  double fit = 0.0;
  int iterations = 0;
  /// Squared reconstruction error after each completed sweep.
  std::vector<double> sweep_sqerr;
};

/// Alternating least squares with deterministic counter-based initialization:
/// the starting factors depend only on (dims, seed), never on tensor content.
CPModel cp_als(const SparseTensor3& tensor, const CPConfig& config);

/// 1 - |X - Xhat|_F / |X|_F, evaluated sparsely (model cross-terms plus the
/// tensor's own coordinates; the dense reconstruction is never formed).
double cp_fit(const CPModel& model, const SparseTensor3& tensor);

/// Single reconstructed cell: sum_f lambda_f A(i,f) B(j,f) C(t,f).
double reconstruct_at(const CPModel& model, std::size_t i, std::size_t j, std::size_t t);

}  // namespace recollab
