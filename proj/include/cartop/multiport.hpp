#pragma once

#include <cstddef>
#include <vector>

#include "cartop/linalg.hpp"
#include "cartop/state.hpp"

namespace cartop {

/// Beam-splitter/phase-shifter element acting on modes m < n:
///
///   [ e^{i phi} cos(theta)   -sin(theta) ]
///   [ e^{i phi} sin(theta)    cos(theta) ]
///
/// with theta in [0, pi/2] and phi in [0, 2 pi).
struct TwoLevelRotation {
  std::size_t m;
  std::size_t n;
  double theta;
  double phi;

  ComplexMatrix embed(std::size_t dim) const;
};

/// Triangular mesh realizing a unitary. Light meets `factors` in list order
/// and then the output phase screen, so
///
///   U = diag(output_phases) * T_{k-1} * ... * T_1 * T_0.
struct MultiportPlan {
  std::size_t dim;
  std::vector<TwoLevelRotation> factors;
  std::vector<Complex> output_phases;
};

/// Entries with modulus below this count as already nulled.
inline constexpr double kNullTol = 1e-14;
inline constexpr double kUnitaryTol = 1e-10;

/// Reck-style nulling: for rows r = d-1 down to 1, null u[r][c] for c < r by
/// right-multiplying with T_{c,r}†, leaving a diagonal phase matrix.
/// Throws InvariantError("unitarity", deviation) when ||u†u - I||_F > kUnitaryTol.
MultiportPlan reck_decompose(const ComplexMatrix& u);

ComplexMatrix reconstruct(const MultiportPlan& plan);

/// Measurement of a Hermitian observable as a network plus mode detection:
/// `plan` realizes the eigenvector unitary V, so running it in reverse sends
/// eigenstate k to mode k.
struct MeasurementRealization {
  ComplexMatrix observable;
  std::vector<double> eigenvalues;
  MultiportPlan plan;
};

MeasurementRealization realize_measurement(const ComplexMatrix& h);

struct NetworkBornComparison {
  /// Detection probability per output mode.
  std::vector<double> mode_probabilities;
  /// Mode probabilities summed per outcome level.
  std::vector<double> network_probabilities;
  /// born_distribution on the observable.
  OutcomeDistribution born;
  double max_abs_difference;
};

NetworkBornComparison network_born_check(const DensityState& state,
                                         const MeasurementRealization& realization);

}  // namespace cartop
