#include "hybent/linalg.hpp"

#include <stdexcept>

#include <Eigen/Dense>

namespace hybent::linalg {

std::vector<double> hermitian_eigenvalues(
    const std::vector<std::complex<double>>& row_major, std::size_t dim) {
  if (row_major.size() != dim * dim) {
    throw std::invalid_argument("hermitian_eigenvalues: size mismatch");
  }
  if (dim == 0) return {};
  Eigen::MatrixXcd m(dim, dim);
  for (std::size_t i = 0; i < dim; ++i) {
    for (std::size_t j = 0; j < dim; ++j) {
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          row_major[i * dim + j];
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(m, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("hermitian_eigenvalues: solver failed");
  }
  const auto& ev = solver.eigenvalues();
  return std::vector<double>(ev.data(), ev.data() + ev.size());
}

}  // namespace hybent::linalg
