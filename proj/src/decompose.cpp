#include "cartop/decompose.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "cartop/errors.hpp"

namespace cartop {

namespace {

void require_positive_tol(double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("normality tolerance must be positive");
}

NormalityReport evaluate(const ComplexMatrix& a, const ComplexMatrix& a1, const ComplexMatrix& a2,
                         double tol) {
  NormalityReport r{};
  r.part_commutator_norm = frobenius_norm(commutator(a1, a2));
  const ComplexMatrix ad = adjoint(a);
  r.self_commutator_norm = frobenius_norm(multiply(ad, a) - multiply(a, ad));
  r.by_parts = r.part_commutator_norm <= tol;
  r.by_adjoint = r.self_commutator_norm <= 2.0 * tol;
  return r;
}

void require_agreement(const NormalityReport& r, double tol) {
  if (r.by_parts != r.by_adjoint) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "normality criteria disagree at tol " << tol << ": ||[A1,A2]||_F = "
        << r.part_commutator_norm << ", ||A†A - AA†||_F = " << r.self_commutator_norm;
    throw InternalConsistencyError(msg.str());
  }
}

}  // namespace

ComplexMatrix real_part(const ComplexMatrix& a) { return Complex{0.5, 0.0} * (a + adjoint(a)); }

ComplexMatrix imag_part(const ComplexMatrix& a) { return Complex{0.0, -0.5} * (a - adjoint(a)); }

double default_normality_tol(const ComplexMatrix& a) {
  const double n = frobenius_norm(a);
  return 1e-10 * std::max(1.0, n * n);
}

CartesianDecomposition decompose(const ComplexMatrix& a, double normality_tol) {
  require_positive_tol(normality_tol);
  ComplexMatrix a1 = real_part(a);
  ComplexMatrix a2 = imag_part(a);
  const NormalityReport r = evaluate(a, a1, a2, normality_tol);
  require_agreement(r, normality_tol);
  return {std::move(a1), std::move(a2), r.part_commutator_norm, normality_tol, r.by_parts};
}

CartesianDecomposition decompose(const ComplexMatrix& a) {
  return decompose(a, default_normality_tol(a));
}

ComplexMatrix recompose(const CartesianDecomposition& d) {
  return d.a1 + Complex{0.0, 1.0} * d.a2;
}

NormalityReport normality_report(const ComplexMatrix& a, double tol) {
  require_positive_tol(tol);
  return evaluate(a, real_part(a), imag_part(a), tol);
}

bool is_normal(const ComplexMatrix& a, double tol) {
  const NormalityReport r = normality_report(a, tol);
  require_agreement(r, tol);
  return r.by_parts;
}

}  // namespace cartop
