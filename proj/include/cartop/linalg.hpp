#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace cartop {

using Complex = std::complex<double>;

/// Frobenius tolerance used wherever a Hermitian input is required.
inline constexpr double kHermitianTol = 1e-10;

/// Dense square complex matrix with row-major storage.
///
/// Values are immutable once built: every operation below returns a fresh
/// matrix. Construction rejects dim 0, a storage size other than dim*dim, and
/// non-finite entries.
class ComplexMatrix {
 public:
  ComplexMatrix(std::size_t dim, std::vector<Complex> entries);
  ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows);

  static ComplexMatrix zero(std::size_t dim);
  static ComplexMatrix identity(std::size_t dim);
  static ComplexMatrix diagonal(std::span<const Complex> values);
  static ComplexMatrix diagonal(std::span<const double> values);

  std::size_t dim() const noexcept { return dim_; }
  const Complex& operator()(std::size_t row, std::size_t col) const noexcept {
    return entries_[row * dim_ + col];
  }
  std::span<const Complex> entries() const noexcept { return entries_; }

  bool operator==(const ComplexMatrix&) const = default;

 private:
  std::size_t dim_;
  std::vector<Complex> entries_;
};

ComplexMatrix operator+(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix operator-(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix operator*(Complex s, const ComplexMatrix& m);
ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);

ComplexMatrix adjoint(const ComplexMatrix& m);
ComplexMatrix transpose(const ComplexMatrix& m);
ComplexMatrix conjugate(const ComplexMatrix& m);
ComplexMatrix multiply(const ComplexMatrix& a, const ComplexMatrix& b);
/// xy - yx
ComplexMatrix commutator(const ComplexMatrix& x, const ComplexMatrix& y);
Complex trace(const ComplexMatrix& m);
double frobenius_norm(const ComplexMatrix& m);

/// Kronecker product; the first factor is the slow index:
/// (a ⊗ b)[i*db + k][j*db + l] = a[i][j] * b[k][l].
ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b);

enum class Subsystem { first, second };

/// Reduced operator on `keep` for an operator on a (dim_a x dim_b) product space.
ComplexMatrix partial_trace(const ComplexMatrix& m, std::size_t dim_a, std::size_t dim_b,
                            Subsystem keep);

std::vector<Complex> apply(const ComplexMatrix& m, std::span<const Complex> v);

/// ||m - m†||_F
double hermiticity_defect(const ComplexMatrix& m);
/// ||m†m - I||_F
double unitarity_defect(const ComplexMatrix& m);

/// Spectrum of a Hermitian matrix.
///
/// `eigenvalues` ascend; column k of `vectors` is the eigenvector for
/// eigenvalue k. Degenerate eigenvalues keep the order the solver produced.
struct HermitianEigensystem {
  std::vector<double> eigenvalues;
  ComplexMatrix vectors;
};

/// Cyclic complex Jacobi diagonalization.
///
/// Throws InvariantError("hermiticity", ...) if ||h - h†||_F exceeds
/// kHermitianTol.
HermitianEigensystem hermitian_eig(const ComplexMatrix& h);

/// V diag(lambda) V†
ComplexMatrix reconstruct(const HermitianEigensystem& es);

}  // namespace cartop
