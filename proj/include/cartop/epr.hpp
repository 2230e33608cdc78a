#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "cartop/decompose.hpp"
#include "cartop/linalg.hpp"
#include "cartop/state.hpp"

namespace cartop {

/// Entangled two-particle source. The singlet exists only for d = 2; the
/// canonical state (1/sqrt d) sum_i |ii> exists for every d >= 2.
enum class Source { singlet, canonical };

enum class Mode { counterfactual, direct };

std::string_view to_string(Source s);
std::string_view to_string(Mode m);

/// Singlet for d = 2, canonical otherwise.
Source default_source(std::size_t d);
PureState source_state(Source source, std::size_t d);

/// An observable on particle 1 whose outcome predicts, with certainty, the
/// outcome of `original` on particle 2.
///
/// `levels` are the eigen-levels of `original`; `mirrored_eig` shares the
/// eigenvalues of `original_eig`, so level j of the mirror and level j of the
/// original carry the same value. `value_map[j]` is the original-level index
/// predicted by mirror-level j.
struct MirrorObservable {
  Source source;
  ComplexMatrix original;
  ComplexMatrix mirrored;
  HermitianEigensystem original_eig;
  HermitianEigensystem mirrored_eig;
  std::vector<EigenLevel> levels;
  std::vector<std::size_t> value_map;
  double off_correspondence_mass;
};

/// Throws InvariantError("hermiticity", ...) for non-Hermitian h and
/// DimensionError when h does not fit the source.
MirrorObservable mirror_observable(const ComplexMatrix& h, Source source);

/// P(j, k) = <psi| Q_j (x) R_k |psi> over the levels of two observables, one on
/// each particle. Row-major, rows index particle-1 levels.
struct JointDistribution {
  std::size_t rows;
  std::size_t cols;
  std::vector<double> probabilities;

  double at(std::size_t j, std::size_t k) const { return probabilities[j * cols + k]; }
};

JointDistribution joint_distribution(const PureState& psi, const HermitianEigensystem& particle1,
                                     const HermitianEigensystem& particle2);

struct ProtocolConfig {
  ComplexMatrix op;
  Source source = Source::canonical;
  std::size_t shots = 0;
  std::uint64_t seed = 0;
  Mode mode = Mode::counterfactual;
  /// Normality tolerance; <= 0 selects default_normality_tol(op).
  double normality_tol = 0.0;
  /// Worker threads for shot batches. Output does not depend on this.
  unsigned threads = 1;
};

/// Counterfactual mode: outcome1 is the mirror(A1) level seen on particle 1,
/// outcome2 the A2 level seen on particle 2. Direct mode: outcome1 is the A1
/// level and outcome2 the index of the common eigenvector.
struct ShotRecord {
  std::size_t shot;
  std::size_t outcome1;
  std::size_t outcome2;
  double lambda1;
  double lambda2;
  Complex combined;
};

struct ProtocolReport {
  Mode mode;
  std::size_t dim;
  Complex mean;
  double stderr_re;
  double stderr_im;
  Complex exact;
  double exact_a1;
  double exact_a2;
  double commutator_norm;
  bool normal;
  std::size_t shots;
  std::uint64_t seed;
  std::string rng;
};

struct ProtocolRun {
  std::vector<ShotRecord> records;
  ProtocolReport report;
};

/// Shots per independently seeded batch.
inline constexpr std::size_t kShotBatch = 8192;

/// Throws std::invalid_argument for zero shots, DimensionError when the
/// operator does not fit the source, NonNormalError in direct mode for a
/// non-normal operator.
ProtocolRun run_protocol(const ProtocolConfig& config);

struct CertaintyReport {
  std::size_t shots;
  std::uint64_t seed;
  std::size_t agreements;
  double agreement_fraction;
  /// Exact joint Born mass on non-corresponding outcome pairs.
  double off_correspondence_mass;
};

CertaintyReport verify_certainty(const ComplexMatrix& h, Source source, std::size_t shots,
                                 std::uint64_t seed, unsigned threads = 1);

/// Non-counterfactual path for normal operators: sample the common eigenbasis
/// of the commuting parts. Throws NonNormalError otherwise.
ProtocolRun direct_joint_measure(const ComplexMatrix& a, const DensityState& rho, std::size_t shots,
                                 std::uint64_t seed, double normality_tol = 0.0,
                                 unsigned threads = 1);

/// Common eigenbasis of A1 and A2 for a normal operator, columns ordered by
/// A1 level then by A2 eigenvalue within the level.
struct CommonEigenbasis {
  ComplexMatrix vectors;
  std::vector<double> lambda1;
  std::vector<double> lambda2;
  std::vector<std::size_t> level1;
};

CommonEigenbasis common_eigenbasis(const CartesianDecomposition& d);

}  // namespace cartop
