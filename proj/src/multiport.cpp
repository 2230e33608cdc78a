#include "cartop/multiport.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "cartop/errors.hpp"

namespace cartop {

namespace {

double wrap_phase(double phi) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  phi = std::fmod(phi, two_pi);
  if (phi < 0.0) phi += two_pi;
  if (phi >= two_pi) phi = 0.0;
  return phi;
}

}  // namespace

ComplexMatrix TwoLevelRotation::embed(std::size_t dim) const {
  if (!(m < n && n < dim)) throw DimensionError("TwoLevelRotation: need m < n < dim");
  std::vector<Complex> e(dim * dim);
  for (std::size_t i = 0; i < dim; ++i) e[i * dim + i] = 1.0;
  const Complex phase = std::polar(1.0, phi);
  const double c = std::cos(theta), s = std::sin(theta);
  e[m * dim + m] = phase * c;
  e[m * dim + n] = -s;
  e[n * dim + m] = phase * s;
  e[n * dim + n] = c;
  return ComplexMatrix(dim, std::move(e));
}

MultiportPlan reck_decompose(const ComplexMatrix& u) {
  const double dev = unitarity_defect(u);
  if (dev > kUnitaryTol) {
    std::ostringstream msg;
    msg << "reck_decompose: input is not unitary, ||u†u - I||_F = " << dev;
    throw InvariantError("unitarity", dev, msg.str());
  }

  const std::size_t d = u.dim();
  std::vector<Complex> w(u.entries().begin(), u.entries().end());
  auto at = [&](std::size_t i, std::size_t j) -> Complex& { return w[i * d + j]; };

  MultiportPlan plan{d, {}, {}};
  for (std::size_t r = d; r-- > 1;) {
    for (std::size_t c = 0; c < r; ++c) {
      const Complex x = at(r, c), y = at(r, r);
      if (std::abs(x) < kNullTol) {
        at(r, c) = 0.0;
        continue;
      }
      const TwoLevelRotation t{c, r, std::atan2(std::abs(x), std::abs(y)),
                               wrap_phase(std::arg(x) - std::arg(y))};
      // W <- W T†, touching columns c and r only.
      const Complex back = std::polar(1.0, -t.phi);
      const double cs = std::cos(t.theta), sn = std::sin(t.theta);
      for (std::size_t i = 0; i < d; ++i) {
        const Complex wm = at(i, c), wn = at(i, r);
        at(i, c) = wm * back * cs - wn * sn;
        at(i, r) = wm * back * sn + wn * cs;
      }
      at(r, c) = 0.0;
      plan.factors.push_back(t);
    }
  }
  plan.output_phases.reserve(d);
  for (std::size_t i = 0; i < d; ++i) plan.output_phases.push_back(std::polar(1.0, std::arg(at(i, i))));
  return plan;
}

ComplexMatrix reconstruct(const MultiportPlan& plan) {
  ComplexMatrix acc = ComplexMatrix::identity(plan.dim);
  for (const auto& f : plan.factors) acc = multiply(f.embed(plan.dim), acc);
  return multiply(ComplexMatrix::diagonal(std::span<const Complex>(plan.output_phases)), acc);
}

MeasurementRealization realize_measurement(const ComplexMatrix& h) {
  HermitianEigensystem es = hermitian_eig(h);
  MultiportPlan plan = reck_decompose(es.vectors);
  return {h, std::move(es.eigenvalues), std::move(plan)};
}

NetworkBornComparison network_born_check(const DensityState& state,
                                         const MeasurementRealization& realization) {
  const std::size_t d = state.dim();
  if (realization.plan.dim != d || realization.observable.dim() != d)
    throw DimensionError("network_born_check: state and network dims differ");

  // Running the network backwards: rho -> U† rho U, then read mode weights.
  const ComplexMatrix net = reconstruct(realization.plan);
  const ComplexMatrix out = multiply(multiply(adjoint(net), state.matrix()), net);

  NetworkBornComparison cmp;
  cmp.mode_probabilities.resize(d);
  for (std::size_t k = 0; k < d; ++k) cmp.mode_probabilities[k] = out(k, k).real();

  const HermitianEigensystem network_eig{realization.eigenvalues, net};
  for (const auto& level : eigen_levels(network_eig)) {
    double p = 0.0;
    for (auto k : level.columns) p += cmp.mode_probabilities[k];
    cmp.network_probabilities.push_back(p);
  }

  cmp.born = born_distribution(state, hermitian_eig(realization.observable));
  if (cmp.born.probabilities.size() != cmp.network_probabilities.size())
    throw InternalConsistencyError("network_born_check: outcome level counts differ");
  cmp.max_abs_difference = 0.0;
  for (std::size_t k = 0; k < cmp.network_probabilities.size(); ++k)
    cmp.max_abs_difference = std::max(
        cmp.max_abs_difference, std::abs(cmp.network_probabilities[k] - cmp.born.probabilities[k]));
  return cmp;
}

}  // namespace cartop
