#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "cartop/linalg.hpp"
#include "cartop/random.hpp"

namespace cartop {

/// Normalized state vector; construction rejects |sum |a|^2 - 1| > 1e-12.
class PureState {
 public:
  explicit PureState(std::vector<Complex> amplitudes);

  std::size_t dim() const noexcept { return amplitudes_.size(); }
  std::span<const Complex> amplitudes() const noexcept { return amplitudes_; }

 private:
  std::vector<Complex> amplitudes_;
};

/// Validated density matrix: Hermitian within kHermitianTol, unit trace within
/// 1e-12, eigenvalues >= -1e-10. Violations throw InvariantError naming the
/// failed property ("hermiticity", "unit-trace", "positivity").
class DensityState {
 public:
  explicit DensityState(ComplexMatrix matrix);
  static DensityState from_pure(const PureState& psi);
  static DensityState maximally_mixed(std::size_t dim);

  std::size_t dim() const noexcept { return matrix_.dim(); }
  const ComplexMatrix& matrix() const noexcept { return matrix_; }

 private:
  ComplexMatrix matrix_;
};

/// Born-rule outcome list, one entry per distinct eigenvalue (ascending).
struct OutcomeDistribution {
  std::vector<double> eigenvalues;
  std::vector<double> probabilities;
};

/// Eigenvalues closer than this are one measurement outcome.
inline constexpr double kDegeneracyTol = 1e-9;

/// One outcome of a projective measurement: its value and the eigenvector
/// columns spanning its eigenspace.
struct EigenLevel {
  double value;
  std::vector<std::size_t> columns;
};

/// Groups ascending eigenvalues into levels; consecutive eigenvalues within
/// kDegeneracyTol of each other merge. A level's value is the mean of its
/// members.
std::vector<EigenLevel> eigen_levels(const HermitianEigensystem& es);

PureState singlet();
PureState maximally_entangled(std::size_t d);

/// Tr(rho a). Throws DimensionError on mismatch.
Complex expectation(const DensityState& rho, const ComplexMatrix& a);
/// <psi| a |psi>
Complex expectation(const PureState& psi, const ComplexMatrix& a);

/// Probability of each level k is the sum over its eigenvectors v of <v|rho|v>.
OutcomeDistribution born_distribution(const DensityState& state, const HermitianEigensystem& obs);

/// Inverse-CDF draw in ascending-eigenvalue order.
std::size_t sample_outcome(const OutcomeDistribution& dist, RandomStream& rng);

}  // namespace cartop
