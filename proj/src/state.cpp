#include "cartop/state.hpp"

#include <cmath>
#include <sstream>

#include "cartop/errors.hpp"

namespace cartop {

namespace {

constexpr double kNormTol = 1e-12;
constexpr double kTraceTol = 1e-12;
constexpr double kPositivityTol = 1e-10;

void require_dims(std::size_t a, std::size_t b, const char* op) {
  if (a != b) {
    std::ostringstream msg;
    msg << op << ": dimension mismatch (" << a << " vs " << b << ")";
    throw DimensionError(msg.str());
  }
}

}  // namespace

PureState::PureState(std::vector<Complex> amplitudes) : amplitudes_(std::move(amplitudes)) {
  if (amplitudes_.empty()) throw DimensionError("PureState: dim must be at least 1");
  double norm2 = 0.0;
  for (const auto& z : amplitudes_) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
      throw InvariantError("finite-entries", 0.0, "PureState: non-finite amplitude");
    norm2 += std::norm(z);
  }
  if (std::abs(norm2 - 1.0) > kNormTol) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "PureState: squared norm " << norm2 << " differs from 1";
    throw InvariantError("normalization", norm2, msg.str());
  }
}

DensityState::DensityState(ComplexMatrix matrix) : matrix_(std::move(matrix)) {
  const double asym = hermiticity_defect(matrix_);
  if (asym > kHermitianTol) {
    std::ostringstream msg;
    msg << "DensityState: not Hermitian, ||rho - rho†||_F = " << asym;
    throw InvariantError("hermiticity", asym, msg.str());
  }
  const Complex tr = trace(matrix_);
  if (std::abs(tr - Complex{1.0, 0.0}) > kTraceTol) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "DensityState: trace " << tr.real() << "+" << tr.imag() << "i differs from 1";
    throw InvariantError("unit-trace", std::abs(tr - 1.0), msg.str());
  }
  const auto es = hermitian_eig(matrix_);
  if (es.eigenvalues.front() < -kPositivityTol) {
    std::ostringstream msg;
    msg << "DensityState: negative eigenvalue " << es.eigenvalues.front();
    throw InvariantError("positivity", es.eigenvalues.front(), msg.str());
  }
}

DensityState DensityState::from_pure(const PureState& psi) {
  const std::size_t n = psi.dim();
  const auto amp = psi.amplitudes();
  std::vector<Complex> e(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) e[i * n + j] = amp[i] * std::conj(amp[j]);
  return DensityState(ComplexMatrix(n, std::move(e)));
}

DensityState DensityState::maximally_mixed(std::size_t dim) {
  return DensityState(Complex{1.0 / static_cast<double>(dim), 0.0} * ComplexMatrix::identity(dim));
}

std::vector<EigenLevel> eigen_levels(const HermitianEigensystem& es) {
  std::vector<EigenLevel> levels;
  const auto& ev = es.eigenvalues;
  for (std::size_t k = 0; k < ev.size(); ++k) {
    if (levels.empty() || ev[k] - ev[k - 1] > kDegeneracyTol) levels.push_back({0.0, {}});
    levels.back().columns.push_back(k);
  }
  for (auto& level : levels) {
    double sum = 0.0;
    for (auto c : level.columns) sum += ev[c];
    level.value = sum / static_cast<double>(level.columns.size());
  }
  return levels;
}

PureState singlet() {
  const double s = 1.0 / std::sqrt(2.0);
  return PureState({0.0, s, -s, 0.0});
}

PureState maximally_entangled(std::size_t d) {
  if (d < 2) throw DimensionError("maximally_entangled: d must be at least 2");
  std::vector<Complex> amp(d * d);
  const double s = 1.0 / std::sqrt(static_cast<double>(d));
  for (std::size_t i = 0; i < d; ++i) amp[i * d + i] = s;
  return PureState(std::move(amp));
}

Complex expectation(const DensityState& rho, const ComplexMatrix& a) {
  require_dims(rho.dim(), a.dim(), "expectation");
  return trace(multiply(rho.matrix(), a));
}

Complex expectation(const PureState& psi, const ComplexMatrix& a) {
  require_dims(psi.dim(), a.dim(), "expectation");
  const auto amp = psi.amplitudes();
  const auto av = apply(a, amp);
  Complex s{};
  for (std::size_t i = 0; i < av.size(); ++i) s += std::conj(amp[i]) * av[i];
  return s;
}

OutcomeDistribution born_distribution(const DensityState& state, const HermitianEigensystem& obs) {
  const std::size_t n = state.dim();
  require_dims(n, obs.vectors.dim(), "born_distribution");
  const ComplexMatrix& rho = state.matrix();
  const ComplexMatrix& v = obs.vectors;

  OutcomeDistribution dist;
  for (const auto& level : eigen_levels(obs)) {
    double p = 0.0;
    for (auto c : level.columns) {
      Complex w{};
      for (std::size_t i = 0; i < n; ++i) {
        Complex row{};
        for (std::size_t j = 0; j < n; ++j) row += rho(i, j) * v(j, c);
        w += std::conj(v(i, c)) * row;
      }
      p += w.real();
    }
    dist.eigenvalues.push_back(level.value);
    dist.probabilities.push_back(p < 0.0 ? 0.0 : p);
  }
  return dist;
}

std::size_t sample_outcome(const OutcomeDistribution& dist, RandomStream& rng) {
  return DiscreteSampler(dist.probabilities).sample(rng);
}

}  // namespace cartop
