#ifndef HYBENT_LINALG_HPP
#define HYBENT_LINALG_HPP

#include <complex>
#include <cstddef>
#include <vector>

namespace hybent::linalg {

// Eigenvalues of a Hermitian matrix given in row-major order, ascending.
std::vector<double> hermitian_eigenvalues(
    const std::vector<std::complex<double>>& row_major, std::size_t dim);

}  // namespace hybent::linalg

#endif
