#include "xbarsim/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "xbarsim/errors.hpp"
#include "xbarsim/rng.hpp"

namespace xbarsim {

ComplexMatrix::ComplexMatrix(Eigen::Index rows, Eigen::Index cols)
    : ComplexMatrix(Storage::Zero(rows, cols)) {}

ComplexMatrix::ComplexMatrix(Storage data) : data_(std::move(data)) {
  if (data_.rows() < 1 || data_.cols() < 1) {
    throw DimensionError("matrix must be at least 1x1, got " +
                         std::to_string(data_.rows()) + "x" +
                         std::to_string(data_.cols()));
  }
  if (!data_.allFinite()) {
    throw DomainError("matrix has non-finite entries");
  }
}

ComplexMatrix ComplexMatrix::identity(Eigen::Index n) {
  return ComplexMatrix(Storage::Identity(n, n));
}

ComplexMatrix ComplexMatrix::diagonal(const std::vector<Complex>& entries) {
  const auto n = static_cast<Eigen::Index>(entries.size());
  Storage m = Storage::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) m(i, i) = entries[static_cast<size_t>(i)];
  return ComplexMatrix(std::move(m));
}

double ComplexMatrix::max_abs() const { return data_.cwiseAbs().maxCoeff(); }

double ComplexMatrix::max_abs_diff(const ComplexMatrix& other) const {
  if (rows() != other.rows() || cols() != other.cols()) {
    throw DimensionError("shape mismatch in matrix comparison");
  }
  return (data_ - other.data_).cwiseAbs().maxCoeff();
}

bool ComplexMatrix::approx_equal(const ComplexMatrix& other, double tol) const {
  return rows() == other.rows() && cols() == other.cols() &&
         max_abs_diff(other) <= tol;
}

ComplexMatrix ComplexMatrix::scaled(Complex factor) const {
  return ComplexMatrix(Storage(data_ * factor));
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols() != b.rows()) {
    throw DimensionError("inner dimensions differ in matrix product");
  }
  return ComplexMatrix(ComplexMatrix::Storage(a.data_ * b.data_));
}

double unitarity_residual(const ComplexMatrix& m) {
  if (!m.is_square()) throw DimensionError("unitarity check needs a square matrix");
  const auto& d = m.data();
  const ComplexMatrix::Storage gram = d.adjoint() * d;
  return (gram - ComplexMatrix::Storage::Identity(d.rows(), d.cols()))
      .cwiseAbs()
      .maxCoeff();
}

ComplexMatrix SvdFactors::reconstruct() const {
  std::vector<Complex> s(sigma.begin(), sigma.end());
  return u * ComplexMatrix::diagonal(s) * v_dagger;
}

SvdFactors svd_factorize(const ComplexMatrix& d) {
  if (!d.is_square()) {
    throw DimensionError("svd_factorize expects a square matrix, got " +
                         std::to_string(d.rows()) + "x" + std::to_string(d.cols()));
  }
  Eigen::JacobiSVD<ComplexMatrix::Storage> svd(
      d.data(), Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Eigen::VectorXd& s = svd.singularValues();
  std::vector<double> sigma(s.data(), s.data() + s.size());
  return SvdFactors{ComplexMatrix(svd.matrixU()), std::move(sigma),
                    ComplexMatrix(ComplexMatrix::Storage(svd.matrixV().adjoint()))};
}

double fidelity(const ComplexMatrix& y_exp, const ComplexMatrix& y) {
  if (y_exp.rows() != y.rows() || y_exp.cols() != y.cols()) {
    throw DimensionError("fidelity operands differ in shape");
  }
  const double norm_exp = y_exp.data().squaredNorm();
  const double norm_target = y.data().squaredNorm();
  if (norm_exp == 0.0 || norm_target == 0.0) {
    throw DomainError("fidelity is undefined for a zero matrix");
  }
  // tr(Y^dagger Y_exp) is the Frobenius inner product <Y, Y_exp>.
  const Complex overlap = y.data().cwiseProduct(y_exp.data().conjugate()).sum();
  const double f = std::norm(overlap) / (norm_exp * norm_target);
  return std::clamp(f, 0.0, 1.0);
}

ComplexMatrix random_ginibre(Eigen::Index rows, Eigen::Index cols,
                             RandomStream& stream) {
  ComplexMatrix::Storage m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c) {
      const double re = stream.normal();
      const double im = stream.normal();
      m(r, c) = Complex(re, im);
    }
  }
  return ComplexMatrix(std::move(m));
}

ComplexMatrix random_target_matrix(int n, std::uint64_t seed) {
  if (n < 2) throw DomainError("random_target_matrix needs n >= 2");
  RandomStream stream(seed);
  const ComplexMatrix raw = random_ginibre(n, n, stream);
  return raw.scaled(1.0 / raw.max_abs());
}

}  // namespace xbarsim
