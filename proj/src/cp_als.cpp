#include "recollab/cp_als.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "recollab/errors.hpp"
#include "recollab/rng.hpp"

namespace recollab {

void CPConfig::validate() const {
  if (rank < 1) throw ConfigError("CP rank must be at least 1");
  if (max_iters < 1) throw ConfigError("max_iters must be at least 1");
  if (!(tol > 0.0)) throw ConfigError("tol must be positive");
}

namespace {

// Matricized-tensor times Khatri-Rao product, straight off the coordinate
// list. Accumulation follows the sorted entry order, so results are
// bit-stable run to run. U1/U2 are the factors of the two other modes in
// ascending mode order.
Eigen::MatrixXd mttkrp(const SparseTensor3& X, int mode, const Eigen::MatrixXd& U1,
                       const Eigen::MatrixXd& U2, std::size_t target_rows) {
  const auto K = U1.cols();
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(target_rows), K);
  for (const auto& e : X.entries()) {
    std::size_t target, r1, r2;
    switch (mode) {
      case 0: target = e.i; r1 = e.j; r2 = e.t; break;
      case 1: target = e.j; r1 = e.i; r2 = e.t; break;
      default: target = e.t; r1 = e.i; r2 = e.j; break;
    }
    M.row(static_cast<Eigen::Index>(target)) +=
        e.value * U1.row(static_cast<Eigen::Index>(r1))
                      .cwiseProduct(U2.row(static_cast<Eigen::Index>(r2)));
  }
  return M;
}

// factor = M * pinv(gram), solved as gram * factor^T = M^T. A rank-deficient
// gram (over-ranked K, dead components) gets a 1e-12 ridge before the solve.
Eigen::MatrixXd solve_normal(Eigen::MatrixXd gram, const Eigen::MatrixXd& M) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram, Eigen::EigenvaluesOnly);
  const double hi = es.eigenvalues().maxCoeff();
  const double lo = es.eigenvalues().minCoeff();
  if (!(lo > hi * 1e-12)) gram.diagonal().array() += 1e-12;
  return gram.ldlt().solve(M.transpose()).transpose();
}

double model_norm_sq(const Eigen::VectorXd& lambda, const Eigen::MatrixXd& A,
                     const Eigen::MatrixXd& B, const Eigen::MatrixXd& C) {
  const Eigen::MatrixXd G = (A.transpose() * A)
                                .cwiseProduct(B.transpose() * B)
                                .cwiseProduct(C.transpose() * C);
  return lambda.dot(G * lambda);
}

double inner_product(const SparseTensor3& X, const Eigen::VectorXd& lambda,
                     const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                     const Eigen::MatrixXd& C) {
  double ip = 0.0;
  for (const auto& e : X.entries()) {
    const auto term = A.row(e.i).cwiseProduct(B.row(e.j)).cwiseProduct(C.row(e.t));
    ip += e.value * term.dot(lambda.transpose());
  }
  return ip;
}

// |X - Xhat|_F^2 through the cross-term expansion; no dense reconstruction.
double squared_error(const SparseTensor3& X, double norm_x, const Eigen::VectorXd& lambda,
                     const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                     const Eigen::MatrixXd& C) {
  return norm_x * norm_x - 2.0 * inner_product(X, lambda, A, B, C) +
         model_norm_sq(lambda, A, B, C);
}

Eigen::MatrixXd init_factor(std::size_t rows, int rank, std::uint64_t seed, std::uint64_t salt) {
  Eigen::MatrixXd F(static_cast<Eigen::Index>(rows), rank);
  const std::uint64_t stream = derive_seed(seed, salt);
  std::uint64_t counter = 0;
  for (Eigen::Index r = 0; r < F.rows(); ++r)
    for (Eigen::Index c = 0; c < F.cols(); ++c) F(r, c) = counter_u01(stream, counter++);
  return F;
}

}  // namespace

CPModel cp_als(const SparseTensor3& tensor, const CPConfig& config) {
  config.validate();
  if (tensor.nnz() == 0) throw ComputeError("degenerate tensor: all entries are zero");
  const double norm_x = tensor.norm();
  if (!std::isfinite(norm_x)) throw ComputeError("non-finite tensor norm");

  const auto& dims = tensor.dims();
  const int K = config.rank;
  Eigen::MatrixXd A = init_factor(dims[0], K, config.seed, 1);
  Eigen::MatrixXd B = init_factor(dims[1], K, config.seed, 2);
  Eigen::MatrixXd C = init_factor(dims[2], K, config.seed, 3);
  Eigen::VectorXd lambda = Eigen::VectorXd::Ones(K);

  CPModel model;
  double fit = 0.0, prev_fit = 0.0;
  for (int iter = 1; iter <= config.max_iters; ++iter) {
    // The first solve of a sweep re-absorbs whatever scale normalization
    // moved into lambda, so lambda never feeds back into the updates.
    A = solve_normal((B.transpose() * B).cwiseProduct(C.transpose() * C),
                     mttkrp(tensor, 0, B, C, dims[0]));
    B = solve_normal((A.transpose() * A).cwiseProduct(C.transpose() * C),
                     mttkrp(tensor, 1, A, C, dims[1]));
    C = solve_normal((A.transpose() * A).cwiseProduct(B.transpose() * B),
                     mttkrp(tensor, 2, A, B, dims[2]));

    for (int f = 0; f < K; ++f) {
      const double na = A.col(f).norm();
      const double nb = B.col(f).norm();
      const double nc = C.col(f).norm();
      lambda(f) = na * nb * nc;
      if (na > 0.0) A.col(f) /= na;
      if (nb > 0.0) B.col(f) /= nb;
      if (nc > 0.0) C.col(f) /= nc;
    }

    const double sqerr = squared_error(tensor, norm_x, lambda, A, B, C);
    model.sweep_sqerr.push_back(std::max(sqerr, 0.0));
    fit = 1.0 - std::sqrt(std::max(sqerr, 0.0)) / norm_x;
    if (!std::isfinite(fit)) throw ComputeError("CP-ALS produced non-finite fit");
    model.iterations = iter;
    if (iter > 1 && std::abs(fit - prev_fit) < config.tol) break;
    prev_fit = fit;
  }

  // Components ordered by descending weight; ties keep their column order.
  std::vector<int> order(static_cast<std::size_t>(K));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return lambda(a) > lambda(b); });

  model.rank = K;
  model.lambda.resize(K);
  model.A.resize(A.rows(), K);
  model.B.resize(B.rows(), K);
  model.C.resize(C.rows(), K);
  for (int f = 0; f < K; ++f) {
    model.lambda(f) = lambda(order[static_cast<std::size_t>(f)]);
    model.A.col(f) = A.col(order[static_cast<std::size_t>(f)]);
    model.B.col(f) = B.col(order[static_cast<std::size_t>(f)]);
    model.C.col(f) = C.col(order[static_cast<std::size_t>(f)]);
  }
  model.fit = fit;
  return model;
}

double cp_fit(const CPModel& model, const SparseTensor3& tensor) {
  const auto& dims = tensor.dims();
  if (model.A.rows() != static_cast<Eigen::Index>(dims[0]) ||
      model.B.rows() != static_cast<Eigen::Index>(dims[1]) ||
      model.C.rows() != static_cast<Eigen::Index>(dims[2]))
    throw std::invalid_argument("model and tensor dimensions disagree");
  const double norm_x = tensor.norm();
  if (norm_x == 0.0) throw ComputeError("fit undefined for a zero-norm tensor");
  const double sqerr = squared_error(tensor, norm_x, model.lambda, model.A, model.B, model.C);
  return 1.0 - std::sqrt(std::max(sqerr, 0.0)) / norm_x;
}

double reconstruct_at(const CPModel& model, std::size_t i, std::size_t j, std::size_t t) {
  if (static_cast<Eigen::Index>(i) >= model.A.rows() ||
      static_cast<Eigen::Index>(j) >= model.B.rows() ||
      static_cast<Eigen::Index>(t) >= model.C.rows())
    throw std::out_of_range("reconstruction index out of range");
  const auto term = model.A.row(static_cast<Eigen::Index>(i))
                        .cwiseProduct(model.B.row(static_cast<Eigen::Index>(j)))
                        .cwiseProduct(model.C.row(static_cast<Eigen::Index>(t)));
  return term.dot(model.lambda.transpose());
}

}  // namespace recollab
