#include "cartop/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "cartop/errors.hpp"

namespace cartop {

namespace {

void require_same_dim(const ComplexMatrix& a, const ComplexMatrix& b, const char* op) {
  if (a.dim() != b.dim()) {
    std::ostringstream msg;
    msg << op << ": dimension mismatch (" << a.dim() << " vs " << b.dim() << ")";
    throw DimensionError(msg.str());
  }
}

bool finite(const Complex& z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

}  // namespace

ComplexMatrix::ComplexMatrix(std::size_t dim, std::vector<Complex> entries)
    : dim_(dim), entries_(std::move(entries)) {
  if (dim_ == 0) throw DimensionError("ComplexMatrix: dim must be at least 1");
  if (entries_.size() != dim_ * dim_) {
    std::ostringstream msg;
    msg << "ComplexMatrix: expected " << dim_ * dim_ << " entries, got " << entries_.size();
    throw DimensionError(msg.str());
  }
  for (const auto& z : entries_) {
    if (!finite(z)) throw InvariantError("finite-entries", 0.0, "ComplexMatrix: non-finite entry");
  }
}

ComplexMatrix::ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows)
    : ComplexMatrix(rows.size(), [&] {
        std::vector<Complex> flat;
        flat.reserve(rows.size() * rows.size());
        for (const auto& row : rows) {
          if (row.size() != rows.size()) throw DimensionError("ComplexMatrix: rows must be square");
          flat.insert(flat.end(), row.begin(), row.end());
        }
        return flat;
      }()) {}

ComplexMatrix ComplexMatrix::zero(std::size_t dim) {
  return ComplexMatrix(dim, std::vector<Complex>(dim * dim));
}

ComplexMatrix ComplexMatrix::identity(std::size_t dim) {
  std::vector<Complex> e(dim * dim);
  for (std::size_t i = 0; i < dim; ++i) e[i * dim + i] = 1.0;
  return ComplexMatrix(dim, std::move(e));
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const Complex> values) {
  const std::size_t n = values.size();
  std::vector<Complex> e(n * n);
  for (std::size_t i = 0; i < n; ++i) e[i * n + i] = values[i];
  return ComplexMatrix(n, std::move(e));
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const double> values) {
  std::vector<Complex> z(values.begin(), values.end());
  return diagonal(std::span<const Complex>(z));
}

ComplexMatrix operator+(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_same_dim(a, b, "add");
  std::vector<Complex> e(a.entries().begin(), a.entries().end());
  for (std::size_t i = 0; i < e.size(); ++i) e[i] += b.entries()[i];
  return ComplexMatrix(a.dim(), std::move(e));
}

ComplexMatrix operator-(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_same_dim(a, b, "subtract");
  std::vector<Complex> e(a.entries().begin(), a.entries().end());
  for (std::size_t i = 0; i < e.size(); ++i) e[i] -= b.entries()[i];
  return ComplexMatrix(a.dim(), std::move(e));
}

ComplexMatrix operator*(Complex s, const ComplexMatrix& m) {
  std::vector<Complex> e(m.entries().begin(), m.entries().end());
  for (auto& z : e) z *= s;
  return ComplexMatrix(m.dim(), std::move(e));
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) { return multiply(a, b); }

ComplexMatrix adjoint(const ComplexMatrix& m) {
  const std::size_t n = m.dim();
  std::vector<Complex> e(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) e[i * n + j] = std::conj(m(j, i));
  return ComplexMatrix(n, std::move(e));
}

ComplexMatrix transpose(const ComplexMatrix& m) {
  const std::size_t n = m.dim();
  std::vector<Complex> e(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) e[i * n + j] = m(j, i);
  return ComplexMatrix(n, std::move(e));
}

ComplexMatrix conjugate(const ComplexMatrix& m) {
  std::vector<Complex> e(m.entries().begin(), m.entries().end());
  for (auto& z : e) z = std::conj(z);
  return ComplexMatrix(m.dim(), std::move(e));
}

ComplexMatrix multiply(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_same_dim(a, b, "multiply");
  const std::size_t n = a.dim();
  std::vector<Complex> e(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < n; ++k) {
      const Complex aik = a(i, k);
      if (aik == Complex{}) continue;
      for (std::size_t j = 0; j < n; ++j) e[i * n + j] += aik * b(k, j);
    }
  }
  return ComplexMatrix(n, std::move(e));
}

ComplexMatrix commutator(const ComplexMatrix& x, const ComplexMatrix& y) {
  require_same_dim(x, y, "commutator");
  return multiply(x, y) - multiply(y, x);
}

Complex trace(const ComplexMatrix& m) {
  Complex t{};
  for (std::size_t i = 0; i < m.dim(); ++i) t += m(i, i);
  return t;
}

double frobenius_norm(const ComplexMatrix& m) {
  double s = 0.0;
  for (const auto& z : m.entries()) s += std::norm(z);
  return std::sqrt(s);
}

ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b) {
  const std::size_t da = a.dim(), db = b.dim(), n = da * db;
  std::vector<Complex> e(n * n);
  for (std::size_t i = 0; i < da; ++i)
    for (std::size_t j = 0; j < da; ++j)
      for (std::size_t k = 0; k < db; ++k)
        for (std::size_t l = 0; l < db; ++l) e[(i * db + k) * n + (j * db + l)] = a(i, j) * b(k, l);
  return ComplexMatrix(n, std::move(e));
}

ComplexMatrix partial_trace(const ComplexMatrix& m, std::size_t dim_a, std::size_t dim_b,
                            Subsystem keep) {
  if (dim_a == 0 || dim_b == 0 || m.dim() != dim_a * dim_b) {
    std::ostringstream msg;
    msg << "partial_trace: dim " << m.dim() << " does not factor as " << dim_a << " x " << dim_b;
    throw DimensionError(msg.str());
  }
  if (keep == Subsystem::first) {
    std::vector<Complex> e(dim_a * dim_a);
    for (std::size_t i = 0; i < dim_a; ++i)
      for (std::size_t j = 0; j < dim_a; ++j)
        for (std::size_t k = 0; k < dim_b; ++k) e[i * dim_a + j] += m(i * dim_b + k, j * dim_b + k);
    return ComplexMatrix(dim_a, std::move(e));
  }
  std::vector<Complex> e(dim_b * dim_b);
  for (std::size_t k = 0; k < dim_b; ++k)
    for (std::size_t l = 0; l < dim_b; ++l)
      for (std::size_t i = 0; i < dim_a; ++i) e[k * dim_b + l] += m(i * dim_b + k, i * dim_b + l);
  return ComplexMatrix(dim_b, std::move(e));
}

std::vector<Complex> apply(const ComplexMatrix& m, std::span<const Complex> v) {
  if (v.size() != m.dim()) throw DimensionError("apply: vector length does not match matrix dim");
  std::vector<Complex> out(v.size());
  for (std::size_t i = 0; i < m.dim(); ++i)
    for (std::size_t j = 0; j < m.dim(); ++j) out[i] += m(i, j) * v[j];
  return out;
}

double hermiticity_defect(const ComplexMatrix& m) { return frobenius_norm(m - adjoint(m)); }

double unitarity_defect(const ComplexMatrix& m) {
  return frobenius_norm(multiply(adjoint(m), m) - ComplexMatrix::identity(m.dim()));
}

HermitianEigensystem hermitian_eig(const ComplexMatrix& h) {
  const double asym = hermiticity_defect(h);
  if (asym > kHermitianTol) {
    std::ostringstream msg;
    msg << "hermitian_eig: input is not Hermitian, ||h - h†||_F = " << asym;
    throw InvariantError("hermiticity", asym, msg.str());
  }

  const std::size_t n = h.dim();
  // Work on the exactly Hermitian part.
  std::vector<Complex> a(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a[i * n + j] = 0.5 * (h(i, j) + std::conj(h(j, i)));
  std::vector<Complex> v(n * n);
  for (std::size_t i = 0; i < n; ++i) v[i * n + i] = 1.0;

  auto at = [&](std::size_t i, std::size_t j) -> Complex& { return a[i * n + j]; };
  const double threshold = 1e-14 * frobenius_norm(h);
  auto off_norm = [&] {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (i != j) s += std::norm(at(i, j));
    return std::sqrt(s);
  };

  constexpr int kMaxSweeps = 100;
  for (int sweep = 0; sweep < kMaxSweeps && off_norm() > threshold; ++sweep) {
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const Complex hpq = at(p, q);
        const double r = std::abs(hpq);
        if (r == 0.0) continue;
        // Phase e = exp(-i arg hpq) makes the (p,q) entry real, then a real
        // Jacobi rotation annihilates it. J = diag(1, e) * [[c, s], [-s, c]].
        const Complex e = std::conj(hpq) / r;
        const double app = at(p, p).real(), aqq = at(q, q).real();
        const double tau = (aqq - app) / (2.0 * r);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;

        for (std::size_t k = 0; k < n; ++k) {
          const Complex xp = at(k, p), xq = at(k, q);
          at(k, p) = c * xp - s * e * xq;
          at(k, q) = s * xp + c * e * xq;
        }
        const Complex ec = std::conj(e);
        for (std::size_t k = 0; k < n; ++k) {
          const Complex xp = at(p, k), xq = at(q, k);
          at(p, k) = c * xp - s * ec * xq;
          at(q, k) = s * xp + c * ec * xq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const Complex xp = v[k * n + p], xq = v[k * n + q];
          v[k * n + p] = c * xp - s * e * xq;
          v[k * n + q] = s * xp + c * e * xq;
        }
        at(p, q) = 0.0;
        at(q, p) = 0.0;
        at(p, p) = app - t * r;
        at(q, q) = aqq + t * r;
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return at(x, x).real() < at(y, y).real(); });

  std::vector<double> values(n);
  std::vector<Complex> vectors(n * n);
  for (std::size_t k = 0; k < n; ++k) {
    values[k] = at(order[k], order[k]).real();
    for (std::size_t i = 0; i < n; ++i) vectors[i * n + k] = v[i * n + order[k]];
  }
  return {std::move(values), ComplexMatrix(n, std::move(vectors))};
}

ComplexMatrix reconstruct(const HermitianEigensystem& es) {
  const auto& vec = es.vectors;
  return multiply(multiply(vec, ComplexMatrix::diagonal(std::span<const double>(es.eigenvalues))),
                  adjoint(vec));
}

}  // namespace cartop
