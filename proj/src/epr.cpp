#include "cartop/epr.hpp"

#include <cmath>
#include <functional>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "cartop/errors.hpp"
#include "cartop/random.hpp"

namespace cartop {

namespace {

constexpr double kCertaintyTol = 1e-12;

const ComplexMatrix& pauli_y() {
  static const ComplexMatrix y{{0.0, Complex{0.0, -1.0}}, {Complex{0.0, 1.0}, 0.0}};
  return y;
}

void require_fits_source(std::size_t d, Source source) {
  if (source == Source::singlet && d != 2) {
    std::ostringstream msg;
    msg << "singlet source requires a dim-2 operator, got dim " << d;
    throw DimensionError(msg.str());
  }
  if (d < 2) throw DimensionError("entangled sources require single-particle dim >= 2");
}

/// amplitude matrix Psi[x][y] = psi[x*d + y]
ComplexMatrix amplitude_matrix(const PureState& psi, std::size_t d) {
  const auto amp = psi.amplitudes();
  return ComplexMatrix(d, std::vector<Complex>(amp.begin(), amp.end()));
}

/// Runs `fill(rng, begin, end)` over consecutive batches of kShotBatch shots.
/// Batch b always draws from RandomStream::derive(seed, b), so the result is
/// independent of the number of threads.
void for_each_batch(std::size_t shots, std::uint64_t seed, unsigned threads,
                    const std::function<void(RandomStream&, std::size_t, std::size_t)>& fill) {
  const std::size_t batches = (shots + kShotBatch - 1) / kShotBatch;
  auto work = [&](std::size_t first, std::size_t stride) {
    for (std::size_t b = first; b < batches; b += stride) {
      RandomStream rng = RandomStream::derive(seed, b);
      fill(rng, b * kShotBatch, std::min(shots, (b + 1) * kShotBatch));
    }
  };
  const std::size_t workers = std::max<std::size_t>(1, std::min<std::size_t>(threads, batches));
  if (workers == 1) {
    work(0, 1);
    return;
  }
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (std::size_t t = 0; t < workers; ++t) pool.emplace_back(work, t, workers);
}

double stderr_of(const std::vector<ShotRecord>& records, double mean, bool imag) {
  const std::size_t n = records.size();
  if (n < 2) return 0.0;
  double ss = 0.0;
  for (const auto& r : records) {
    const double x = (imag ? r.combined.imag() : r.combined.real()) - mean;
    ss += x * x;
  }
  return std::sqrt(ss / static_cast<double>(n - 1) / static_cast<double>(n));
}

void summarize(const std::vector<ShotRecord>& records, ProtocolReport& report) {
  Complex sum{};
  for (const auto& r : records) sum += r.combined;
  report.mean = sum / static_cast<double>(records.size());
  report.stderr_re = stderr_of(records, report.mean.real(), false);
  report.stderr_im = stderr_of(records, report.mean.imag(), true);
}

void require_shots(std::size_t shots) {
  if (shots == 0) throw std::invalid_argument("shots must be positive");
}

}  // namespace

std::string_view to_string(Source s) { return s == Source::singlet ? "singlet" : "canonical"; }
std::string_view to_string(Mode m) { return m == Mode::counterfactual ? "counterfactual" : "direct"; }

Source default_source(std::size_t d) { return d == 2 ? Source::singlet : Source::canonical; }

PureState source_state(Source source, std::size_t d) {
  require_fits_source(d, source);
  return source == Source::singlet ? singlet() : maximally_entangled(d);
}

JointDistribution joint_distribution(const PureState& psi, const HermitianEigensystem& particle1,
                                     const HermitianEigensystem& particle2) {
  const std::size_t d = particle1.vectors.dim();
  if (particle2.vectors.dim() != d || psi.dim() != d * d)
    throw DimensionError("joint_distribution: observables do not fit the two-particle state");
  // C[a][b] = <v_a (x) w_b | psi> = (V† Psi conj(W))[a][b]
  const ComplexMatrix c =
      multiply(multiply(adjoint(particle1.vectors), amplitude_matrix(psi, d)),
               conjugate(particle2.vectors));
  const auto rows = eigen_levels(particle1);
  const auto cols = eigen_levels(particle2);
  JointDistribution joint{rows.size(), cols.size(), std::vector<double>(rows.size() * cols.size())};
  for (std::size_t j = 0; j < rows.size(); ++j)
    for (std::size_t k = 0; k < cols.size(); ++k) {
      double p = 0.0;
      for (auto a : rows[j].columns)
        for (auto b : cols[k].columns) p += std::norm(c(a, b));
      joint.probabilities[j * joint.cols + k] = p;
    }
  return joint;
}

MirrorObservable mirror_observable(const ComplexMatrix& h, Source source) {
  const std::size_t d = h.dim();
  require_fits_source(d, source);
  HermitianEigensystem eig = hermitian_eig(h);

  // For psi with amplitude matrix Psi, (M (x) I)|psi> = (I (x) h)|psi> when
  // M Psi = Psi h^T. Canonical: Psi ~ I, M = h^T. Singlet: Psi ~ i sigma_y,
  // M = sigma_y h^T sigma_y. In both cases M's eigenvectors are W conj(V).
  ComplexMatrix mirrored = transpose(h);
  ComplexMatrix mirrored_vectors = conjugate(eig.vectors);
  if (source == Source::singlet) {
    mirrored = multiply(multiply(pauli_y(), mirrored), pauli_y());
    mirrored_vectors = multiply(pauli_y(), mirrored_vectors);
  }
  HermitianEigensystem mirrored_eig{eig.eigenvalues, std::move(mirrored_vectors)};

  auto levels = eigen_levels(eig);
  std::vector<std::size_t> value_map(levels.size());
  for (std::size_t j = 0; j < levels.size(); ++j) value_map[j] = j;

  const JointDistribution joint = joint_distribution(source_state(source, d), mirrored_eig, eig);
  double off = 0.0;
  for (std::size_t j = 0; j < joint.rows; ++j)
    for (std::size_t k = 0; k < joint.cols; ++k)
      if (value_map[j] != k) off += joint.at(j, k);
  if (off > kCertaintyTol) {
    std::ostringstream msg;
    msg << "mirror_observable: off-correspondence probability " << off << " exceeds "
        << kCertaintyTol;
    throw InternalConsistencyError(msg.str());
  }

  return {source,         h,      std::move(mirrored), std::move(eig), std::move(mirrored_eig),
          std::move(levels), std::move(value_map), off};
}

CertaintyReport verify_certainty(const ComplexMatrix& h, Source source, std::size_t shots,
                                 std::uint64_t seed, unsigned threads) {
  require_shots(shots);
  const MirrorObservable mirror = mirror_observable(h, source);
  const JointDistribution joint =
      joint_distribution(source_state(source, h.dim()), mirror.mirrored_eig, mirror.original_eig);
  const DiscreteSampler sampler(joint.probabilities);

  std::vector<unsigned char> agree(shots);
  for_each_batch(shots, seed, threads, [&](RandomStream& rng, std::size_t begin, std::size_t end) {
    for (std::size_t s = begin; s < end; ++s) {
      const std::size_t flat = sampler.sample(rng);
      agree[s] = mirror.value_map[flat / joint.cols] == flat % joint.cols;
    }
  });
  std::size_t agreements = 0;
  for (auto a : agree) agreements += a;
  return {shots, seed, agreements, static_cast<double>(agreements) / static_cast<double>(shots),
          mirror.off_correspondence_mass};
}

CommonEigenbasis common_eigenbasis(const CartesianDecomposition& d) {
  const std::size_t n = d.a1.dim();
  const HermitianEigensystem eig1 = hermitian_eig(d.a1);
  const auto levels = eigen_levels(eig1);

  std::vector<Complex> vectors(n * n);
  CommonEigenbasis basis{ComplexMatrix::zero(n), {}, {}, {}};
  std::size_t out = 0;
  for (std::size_t li = 0; li < levels.size(); ++li) {
    const auto& cols = levels[li].columns;
    const std::size_t m = cols.size();
    // Restrict A2 to this A1 eigenspace: S = B† A2 B.
    std::vector<Complex> s(m * m);
    for (std::size_t a = 0; a < m; ++a)
      for (std::size_t b = 0; b < m; ++b) {
        Complex acc{};
        for (std::size_t i = 0; i < n; ++i) {
          Complex row{};
          for (std::size_t j = 0; j < n; ++j) row += d.a2(i, j) * eig1.vectors(j, cols[b]);
          acc += std::conj(eig1.vectors(i, cols[a])) * row;
        }
        s[a * m + b] = acc;
      }
    const ComplexMatrix block(m, std::move(s));
    const HermitianEigensystem sub = hermitian_eig(real_part(block));
    for (std::size_t k = 0; k < m; ++k, ++out) {
      for (std::size_t i = 0; i < n; ++i) {
        Complex acc{};
        for (std::size_t a = 0; a < m; ++a) acc += eig1.vectors(i, cols[a]) * sub.vectors(a, k);
        vectors[i * n + out] = acc;
      }
      basis.lambda1.push_back(levels[li].value);
      basis.lambda2.push_back(sub.eigenvalues[k]);
      basis.level1.push_back(li);
    }
  }
  basis.vectors = ComplexMatrix(n, std::move(vectors));
  return basis;
}

ProtocolRun direct_joint_measure(const ComplexMatrix& a, const DensityState& rho, std::size_t shots,
                                 std::uint64_t seed, double normality_tol, unsigned threads) {
  require_shots(shots);
  if (rho.dim() != a.dim()) throw DimensionError("direct_joint_measure: state and operator dims differ");
  const double tol = normality_tol > 0.0 ? normality_tol : default_normality_tol(a);
  const CartesianDecomposition parts = decompose(a, tol);
  if (!parts.normal) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "operator is not normal: ||[A1,A2]||_F = " << parts.commutator_norm << " > " << tol
        << "; only the counterfactual path exists";
    throw NonNormalError(parts.commutator_norm, msg.str());
  }

  const CommonEigenbasis basis = common_eigenbasis(parts);
  const std::size_t n = a.dim();
  std::vector<double> probs(n);
  for (std::size_t k = 0; k < n; ++k) {
    Complex w{};
    for (std::size_t i = 0; i < n; ++i) {
      Complex row{};
      for (std::size_t j = 0; j < n; ++j) row += rho.matrix()(i, j) * basis.vectors(j, k);
      w += std::conj(basis.vectors(i, k)) * row;
    }
    probs[k] = w.real() < 0.0 ? 0.0 : w.real();
  }
  const DiscreteSampler sampler(probs);

  ProtocolRun run;
  run.records.resize(shots);
  for_each_batch(shots, seed, threads, [&](RandomStream& rng, std::size_t begin, std::size_t end) {
    for (std::size_t s = begin; s < end; ++s) {
      const std::size_t k = sampler.sample(rng);
      const double l1 = basis.lambda1[k], l2 = basis.lambda2[k];
      run.records[s] = {s, basis.level1[k], k, l1, l2, Complex{l1, l2}};
    }
  });

  ProtocolReport& r = run.report;
  r.mode = Mode::direct;
  r.dim = n;
  r.exact = expectation(rho, a);
  r.exact_a1 = expectation(rho, parts.a1).real();
  r.exact_a2 = expectation(rho, parts.a2).real();
  r.commutator_norm = parts.commutator_norm;
  r.normal = parts.normal;
  r.shots = shots;
  r.seed = seed;
  r.rng = std::string(RandomStream::kAlgorithm);
  summarize(run.records, r);
  return run;
}

ProtocolRun run_protocol(const ProtocolConfig& config) {
  require_shots(config.shots);
  const std::size_t d = config.op.dim();
  const PureState psi = source_state(config.source, d);
  const DensityState rho2(partial_trace(DensityState::from_pure(psi).matrix(), d, d, Subsystem::second));

  if (config.mode == Mode::direct)
    return direct_joint_measure(config.op, rho2, config.shots, config.seed, config.normality_tol,
                                config.threads);

  const double tol = config.normality_tol > 0.0 ? config.normality_tol : default_normality_tol(config.op);
  const CartesianDecomposition parts = decompose(config.op, tol);
  const MirrorObservable mirror = mirror_observable(parts.a1, config.source);
  const HermitianEigensystem eig2 = hermitian_eig(parts.a2);
  const auto levels2 = eigen_levels(eig2);
  const JointDistribution joint = joint_distribution(psi, mirror.mirrored_eig, eig2);
  const DiscreteSampler sampler(joint.probabilities);

  ProtocolRun run;
  run.records.resize(config.shots);
  for_each_batch(config.shots, config.seed, config.threads,
                 [&](RandomStream& rng, std::size_t begin, std::size_t end) {
                   for (std::size_t s = begin; s < end; ++s) {
                     const std::size_t flat = sampler.sample(rng);
                     const std::size_t j = flat / joint.cols, k = flat % joint.cols;
                     const double l1 = mirror.levels[mirror.value_map[j]].value;
                     const double l2 = levels2[k].value;
                     run.records[s] = {s, j, k, l1, l2, Complex{l1, l2}};
                   }
                 });

  ProtocolReport& r = run.report;
  r.mode = Mode::counterfactual;
  r.dim = d;
  r.exact = expectation(rho2, config.op);
  r.exact_a1 = expectation(rho2, parts.a1).real();
  r.exact_a2 = expectation(rho2, parts.a2).real();
  r.commutator_norm = parts.commutator_norm;
  r.normal = parts.normal;
  r.shots = config.shots;
  r.seed = config.seed;
  r.rng = std::string(RandomStream::kAlgorithm);
  summarize(run.records, r);
  return run;
}

}  // namespace cartop
