#include "lpcm/procrustes.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>

namespace lpcm {

namespace {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

Eigen::Map<const RowMatrix> view(const Positions& p) {
  return {p.data().data(), static_cast<Eigen::Index>(p.rows()), static_cast<Eigen::Index>(p.dim())};
}

}  // namespace

Positions procrustes_align(const Positions& z, const Positions& ref) {
  if (z.rows() != ref.rows() || z.dim() != ref.dim()) throw std::invalid_argument("Procrustes shapes differ");
  if (z.rows() < 2) throw std::invalid_argument("Procrustes needs at least two points");
  const auto a = view(z);
  const auto b = view(ref);
  const Eigen::RowVectorXd ca = a.colwise().mean();
  const Eigen::RowVectorXd cb = b.colwise().mean();
  const Eigen::MatrixXd a0 = a.rowwise() - ca;
  const Eigen::MatrixXd b0 = b.rowwise() - cb;

  Eigen::MatrixXd rotation = Eigen::MatrixXd::Identity(z.dim(), z.dim());
  if (a0.squaredNorm() > 0.0 && b0.squaredNorm() > 0.0) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(a0.transpose() * b0, Eigen::ComputeFullU | Eigen::ComputeFullV);
    rotation = svd.matrixU() * svd.matrixV().transpose();
  }
  RowMatrix out = (a0 * rotation).rowwise() + cb;
  Positions result(z.rows(), z.dim());
  Eigen::Map<RowMatrix>(result.data().data(), out.rows(), out.cols()) = out;
  return result;
}

double frobenius_residual(const Positions& z, const Positions& ref) {
  if (z.rows() != ref.rows() || z.dim() != ref.dim()) throw std::invalid_argument("shapes differ");
  return (view(z) - view(ref)).norm();
}

}  // namespace lpcm
