#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

namespace xbarsim {

using Complex = std::complex<double>;

/// Library-wide absolute tolerance for matrix comparisons.
inline constexpr double kDefaultTolerance = 1e-10;

/// Dense complex matrix of electric-field transfer coefficients.
///
/// Always at least 1x1 with finite entries; the constructors enforce this.
/// Instances are immutable, so a validated matrix stays valid.
class ComplexMatrix {
 public:
  using Storage = Eigen::MatrixXcd;

  /// Zero-filled rows x cols matrix.
  ComplexMatrix(Eigen::Index rows, Eigen::Index cols);
  /// Wraps `data`; throws DimensionError when empty, DomainError on NaN/Inf.
  explicit ComplexMatrix(Storage data);

  static ComplexMatrix identity(Eigen::Index n);
  static ComplexMatrix diagonal(const std::vector<Complex>& entries);

  Eigen::Index rows() const { return data_.rows(); }
  Eigen::Index cols() const { return data_.cols(); }
  bool is_square() const { return data_.rows() == data_.cols(); }

  Complex operator()(Eigen::Index r, Eigen::Index c) const { return data_(r, c); }
  const Storage& data() const { return data_; }

  /// Largest entry magnitude.
  double max_abs() const;
  /// Max-entry distance to `other`; throws DimensionError on shape mismatch.
  double max_abs_diff(const ComplexMatrix& other) const;
  bool approx_equal(const ComplexMatrix& other,
                    double tol = kDefaultTolerance) const;

  ComplexMatrix adjoint() const { return ComplexMatrix(Storage(data_.adjoint())); }
  ComplexMatrix transpose() const { return ComplexMatrix(Storage(data_.transpose())); }
  ComplexMatrix scaled(Complex factor) const;

  friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);

 private:
  Storage data_;
};

/// max |M^dagger M - I| over all entries. M must be square.
double unitarity_residual(const ComplexMatrix& m);

/// D = U diag(sigma) V^dagger with sigma sorted descending.
struct SvdFactors {
  ComplexMatrix u;
  std::vector<double> sigma;
  ComplexMatrix v_dagger;

  ComplexMatrix reconstruct() const;
};

/// Full SVD of a square matrix.
///
/// Deterministic for a fixed input. Degenerate singular values keep the order
/// produced by the Jacobi sweep, which follows input column order.
SvdFactors svd_factorize(const ComplexMatrix& d);

/// Frobenius-inner-product fidelity |tr(Y^dagger Y_exp)|^2 / (|Y|_F^2 |Y_exp|_F^2).
///
/// Symmetric, invariant under nonzero complex scaling of either argument and
/// clamped to [0, 1]. Throws DimensionError on shape mismatch and DomainError
/// when either argument is the zero matrix.
double fidelity(const ComplexMatrix& y_exp, const ComplexMatrix& y);

class RandomStream;

/// rows x cols Ginibre sample: Re, Im of every entry i.i.d. Normal(0, 1),
/// drawn row-major (Re before Im). No normalization.
ComplexMatrix random_ginibre(Eigen::Index rows, Eigen::Index cols,
                             RandomStream& stream);

/// n x n Ginibre matrix rescaled so its largest entry magnitude is exactly 1.
/// Throws DomainError for n < 2.
ComplexMatrix random_target_matrix(int n, std::uint64_t seed);

}  // namespace xbarsim
