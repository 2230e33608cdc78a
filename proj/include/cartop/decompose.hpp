#pragma once

#include "cartop/linalg.hpp"

namespace cartop {

/// A = a1 + i*a2 with a1, a2 self-adjoint.
struct CartesianDecomposition {
  ComplexMatrix a1;
  ComplexMatrix a2;
  double commutator_norm;  ///< ||[a1, a2]||_F
  double normality_tol;
  bool normal;
};

/// (a + a†) / 2
ComplexMatrix real_part(const ComplexMatrix& a);
/// -(i/2) (a - a†)
ComplexMatrix imag_part(const ComplexMatrix& a);

/// 1e-10 * max(1, ||a||_F^2). The commutator scales quadratically with a.
double default_normality_tol(const ComplexMatrix& a);

/// Throws std::invalid_argument unless normality_tol > 0, and
/// InternalConsistencyError if the two normality criteria disagree.
CartesianDecomposition decompose(const ComplexMatrix& a, double normality_tol);
CartesianDecomposition decompose(const ComplexMatrix& a);

ComplexMatrix recompose(const CartesianDecomposition& d);

/// Both normality criteria, evaluated independently.
struct NormalityReport {
  double part_commutator_norm;  ///< ||[Re a, Im a]||_F, compared against tol
  double self_commutator_norm;  ///< ||a†a - a a†||_F, compared against 2*tol
  bool by_parts;
  bool by_adjoint;
};

NormalityReport normality_report(const ComplexMatrix& a, double tol);

/// True iff ||[Re a, Im a]||_F <= tol. Cross-checks against the a†a - aa†
/// criterion and throws InternalConsistencyError on disagreement.
bool is_normal(const ComplexMatrix& a, double tol);

}  // namespace cartop
