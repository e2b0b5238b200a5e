#include "chshkit/state.hpp"

#include <string>

#include "chshkit/error.hpp"

namespace chshkit {

const ComplexMatrix2& pauli(std::size_t i) {
  using namespace std::complex_literals;
  static const std::array<ComplexMatrix2, 4> sigma = {
      ComplexMatrix2{{{{1.0, 0.0}, {0.0, 1.0}}}},
      ComplexMatrix2{{{{0.0, 1.0}, {1.0, 0.0}}}},
      ComplexMatrix2{{{{0.0, -1.0i}, {1.0i, 0.0}}}},
      ComplexMatrix2{{{{1.0, 0.0}, {0.0, -1.0}}}},
  };
  return sigma.at(i);
}

ComplexMatrix4 pauli_product(std::size_t i, std::size_t j) { return kron(pauli(i), pauli(j)); }

DensityMatrix DensityMatrix::validate(const ComplexMatrix4& mat) {
  if (!all_finite(mat)) throw Error(Errc::NotHermitian, "matrix has non-finite entries");
  const double asym = max_abs_diff(mat, adjoint(mat));
  if (asym > kHermitianTol) throw Error(Errc::NotHermitian, "max |m - m^H| = " + std::to_string(asym));
  const double tr = std::real(trace(mat));
  if (std::abs(tr - 1.0) > kTraceTol) throw Error(Errc::TraceNotOne, "trace = " + std::to_string(tr));
  const auto spec = eig_hermitian(mat);
  if (spec.values[3] < -kPsdTol)
    throw Error(Errc::NotPositive, "smallest eigenvalue " + std::to_string(spec.values[3]));
  return DensityMatrix(mat);
}

namespace {

// Re Tr(x y) without forming the product.
double trace_of_product(const ComplexMatrix4& x, const ComplexMatrix4& y) {
  Complex t{};
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t k = 0; k < 4; ++k) t += x(i, k) * y(k, i);
  return std::real(t);
}

}  // namespace

PauliDecomposition decompose(const DensityMatrix& rho) {
  PauliDecomposition pd;
  const auto& m = rho.matrix();
  for (std::size_t i = 0; i < 3; ++i) {
    pd.bloch_a[i] = trace_of_product(m, pauli_product(i + 1, 0));
    pd.bloch_b[i] = trace_of_product(m, pauli_product(0, i + 1));
    for (std::size_t j = 0; j < 3; ++j) pd.correlation(i, j) = trace_of_product(m, pauli_product(i + 1, j + 1));
  }
  return pd;
}

DensityMatrix compose(const PauliDecomposition& pd) {
  ComplexMatrix4 m = ComplexMatrix4::identity();
  for (std::size_t i = 0; i < 3; ++i) {
    m = m + pd.bloch_a[i] * pauli_product(i + 1, 0);
    m = m + pd.bloch_b[i] * pauli_product(0, i + 1);
    for (std::size_t j = 0; j < 3; ++j) m = m + pd.correlation(i, j) * pauli_product(i + 1, j + 1);
  }
  return DensityMatrix::validate(0.25 * m);
}

double purity(const DensityMatrix& rho) { return trace_of_product(rho.matrix(), rho.matrix()); }

}  // namespace chshkit
