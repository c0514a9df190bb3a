#include "speclyap/sym_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace speclyap {

SymMatrix::SymMatrix(std::size_t dim) : dim_(dim), data_(dim * dim, 0.0) {}

SymMatrix SymMatrix::from_row_major(std::size_t dim, std::span<const double> entries) {
  if (entries.size() != dim * dim)
    throw std::invalid_argument("SymMatrix: entry count does not match dim*dim");
  SymMatrix m(dim);
  for (std::size_t i = 0; i < dim; ++i) {
    m.data_[i * dim + i] = entries[i * dim + i];
    for (std::size_t j = i + 1; j < dim; ++j)
      m.set(i, j, 0.5 * (entries[i * dim + j] + entries[j * dim + i]));
  }
  return m;
}

SymMatrix SymMatrix::from_rows(const std::vector<std::vector<double>>& rows) {
  const std::size_t n = rows.size();
  std::vector<double> flat;
  flat.reserve(n * n);
  for (const auto& r : rows) {
    if (r.size() != n) throw std::invalid_argument("SymMatrix: rows must form a square matrix");
    flat.insert(flat.end(), r.begin(), r.end());
  }
  return from_row_major(n, flat);
}

SymMatrix SymMatrix::identity(std::size_t dim, double scale) {
  SymMatrix m(dim);
  for (std::size_t i = 0; i < dim; ++i) m.data_[i * dim + i] = scale;
  return m;
}

SymMatrix SymMatrix::diagonal(std::span<const double> diag) {
  SymMatrix m(diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) m.data_[i * diag.size() + i] = diag[i];
  return m;
}

std::vector<std::vector<double>> SymMatrix::to_rows() const {
  std::vector<std::vector<double>> rows(dim_);
  for (std::size_t i = 0; i < dim_; ++i)
    rows[i].assign(data_.begin() + static_cast<std::ptrdiff_t>(i * dim_),
                   data_.begin() + static_cast<std::ptrdiff_t>((i + 1) * dim_));
  return rows;
}

SymMatrix SymMatrix::leading(std::size_t n) const {
  if (n > dim_) throw std::invalid_argument("SymMatrix::leading: block larger than matrix");
  SymMatrix m(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m.data_[i * n + j] = data_[i * dim_ + j];
  return m;
}

SymMatrix SymMatrix::padded(std::size_t dim) const {
  if (dim < dim_) throw std::invalid_argument("SymMatrix::padded: target smaller than matrix");
  SymMatrix m(dim);
  for (std::size_t i = 0; i < dim_; ++i)
    for (std::size_t j = 0; j < dim_; ++j) m.data_[i * dim + j] = data_[i * dim_ + j];
  return m;
}

double SymMatrix::max_abs() const {
  double r = 0.0;
  for (double v : data_) r = std::max(r, std::abs(v));
  return r;
}

double SymMatrix::frobenius() const {
  double s = 0.0;
  for (double v : data_) s += v * v;
  return std::sqrt(s);
}

double SymMatrix::trace() const {
  double s = 0.0;
  for (std::size_t i = 0; i < dim_; ++i) s += data_[i * dim_ + i];
  return s;
}

bool SymMatrix::is_diagonal() const {
  for (std::size_t i = 0; i < dim_; ++i)
    for (std::size_t j = 0; j < dim_; ++j)
      if (i != j && data_[i * dim_ + j] != 0.0) return false;
  return true;
}

SymMatrix& SymMatrix::operator*=(double c) {
  for (double& v : data_) v *= c;
  return *this;
}

SymMatrix operator-(const SymMatrix& a, const SymMatrix& b) {
  if (a.dim_ != b.dim_) throw std::invalid_argument("SymMatrix: dimension mismatch");
  SymMatrix r = a;
  for (std::size_t i = 0; i < r.data_.size(); ++i) r.data_[i] -= b.data_[i];
  return r;
}

SymMatrix operator+(const SymMatrix& a, const SymMatrix& b) {
  if (a.dim_ != b.dim_) throw std::invalid_argument("SymMatrix: dimension mismatch");
  SymMatrix r = a;
  for (std::size_t i = 0; i < r.data_.size(); ++i) r.data_[i] += b.data_[i];
  return r;
}

SymEigen jacobi_eigen(const SymMatrix& m, bool want_vectors) {
  const std::size_t n = m.dim();
  std::vector<double> a(m.row_major().begin(), m.row_major().end());
  std::vector<double> v;
  if (want_vectors) {
    v.assign(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) v[i * n + i] = 1.0;
  }
  auto at = [&](std::size_t i, std::size_t j) -> double& { return a[i * n + j]; };

  double scale = 0.0;
  for (double x : a) scale += x * x;
  const double floor = 1e-300;

  constexpr int kMaxSweeps = 100;
  int sweep = 0;
  for (; sweep < kMaxSweeps; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += at(p, q) * at(p, q);
    if (off <= 1e-32 * scale || off < floor) break;

    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = at(p, q);
        if (apq == 0.0) continue;
        const double app = at(p, p);
        const double aqq = at(q, q);
        // Skip rotations that cannot change the diagonal at working precision.
        if (sweep > 3 && std::abs(apq) < 1e-18 * (std::abs(app) + std::abs(aqq))) {
          at(p, q) = 0.0;
          at(q, p) = 0.0;
          continue;
        }
        const double theta = (aqq - app) / (2.0 * apq);
        const double t = std::copysign(1.0, theta) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = at(k, p);
          const double akq = at(k, q);
          at(k, p) = c * akp - s * akq;
          at(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = at(p, k);
          const double aqk = at(q, k);
          at(p, k) = c * apk - s * aqk;
          at(q, k) = s * apk + c * aqk;
        }
        at(p, p) = app - t * apq;
        at(q, q) = aqq + t * apq;
        at(p, q) = 0.0;
        at(q, p) = 0.0;
        if (want_vectors) {
          for (std::size_t k = 0; k < n; ++k) {
            const double vkp = v[k * n + p];
            const double vkq = v[k * n + q];
            v[k * n + p] = c * vkp - s * vkq;
            v[k * n + q] = s * vkp + c * vkq;
          }
        }
      }
    }
  }
  if (sweep == kMaxSweeps) throw std::runtime_error("jacobi_eigen: no convergence after 100 sweeps");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return at(x, x) < at(y, y); });
  SymEigen out;
  out.values.resize(n);
  for (std::size_t k = 0; k < n; ++k) out.values[k] = at(order[k], order[k]);
  if (want_vectors) {
    out.vectors.resize(n * n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = 0; k < n; ++k) out.vectors[i * n + k] = v[i * n + order[k]];
  }
  return out;
}

double operator_norm_sym(const SymMatrix& m) {
  if (m.dim() == 0) return 0.0;
  if (m.is_diagonal()) {
    double r = 0.0;
    for (std::size_t i = 0; i < m.dim(); ++i) r = std::max(r, std::abs(m(i, i)));
    return r;
  }
  const auto e = jacobi_eigen(m);
  return std::max(std::abs(e.values.front()), std::abs(e.values.back()));
}

PsdCheck psd_check(const SymMatrix& m, double tol) {
  if (tol < 0.0) throw std::invalid_argument("psd_check: tol must be >= 0");
  if (m.dim() == 0) return {true, 0.0};
  double min_eig;
  if (m.is_diagonal()) {
    min_eig = m(0, 0);
    for (std::size_t i = 1; i < m.dim(); ++i) min_eig = std::min(min_eig, m(i, i));
  } else {
    min_eig = jacobi_eigen(m).values.front();
  }
  return {min_eig >= -tol, min_eig};
}

double relative_frobenius(const SymMatrix& a, const SymMatrix& b) {
  const double denom = std::max(b.frobenius(), 1e-300);
  return (a - b).frobenius() / denom;
}

}  // namespace speclyap
