#include "varstep/linalg.hpp"

#include <algorithm>
#include <cmath>

namespace varstep {

Mat Mat::identity(int n) {
  Mat I(n, n);
  for (int i = 0; i < n; ++i) I(i, i) = 1.0;
  return I;
}

Vec matvec(const Mat& A, const Vec& x) {
  if (static_cast<int>(x.size()) != A.cols) throw std::invalid_argument("matvec: size mismatch");
  Vec y(A.rows, 0.0);
  for (int i = 0; i < A.rows; ++i) {
    double s = 0.0;
    const double* row = &A.data[static_cast<size_t>(i) * A.cols];
    for (int j = 0; j < A.cols; ++j) s += row[j] * x[j];
    y[i] = s;
  }
  return y;
}

Vec matvec_transposed(const Mat& A, const Vec& x) {
  if (static_cast<int>(x.size()) != A.rows) throw std::invalid_argument("matvec_transposed: size mismatch");
  Vec y(A.cols, 0.0);
  for (int i = 0; i < A.rows; ++i) {
    const double* row = &A.data[static_cast<size_t>(i) * A.cols];
    const double xi = x[i];
    for (int j = 0; j < A.cols; ++j) y[j] += row[j] * xi;
  }
  return y;
}

Mat matmul(const Mat& A, const Mat& B) {
  if (A.cols != B.rows) throw std::invalid_argument("matmul: size mismatch");
  Mat C(A.rows, B.cols);
  for (int i = 0; i < A.rows; ++i) {
    for (int k = 0; k < A.cols; ++k) {
      const double a = A(i, k);
      if (a == 0.0) continue;
      for (int j = 0; j < B.cols; ++j) C(i, j) += a * B(k, j);
    }
  }
  return C;
}

Mat transposed(const Mat& A) {
  Mat T(A.cols, A.rows);
  for (int i = 0; i < A.rows; ++i)
    for (int j = 0; j < A.cols; ++j) T(j, i) = A(i, j);
  return T;
}

double dot(const Vec& a, const Vec& b) {
  if (a.size() != b.size()) throw std::invalid_argument("dot: size mismatch");
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(const Vec& a) { return std::sqrt(dot(a, a)); }

double norm_inf(const Vec& a) {
  double m = 0.0;
  for (double v : a) m = std::max(m, std::abs(v));
  return m;
}

double max_abs(const Mat& A) {
  double m = 0.0;
  for (double v : A.data) m = std::max(m, std::abs(v));
  return m;
}

Vec scaled(double a, const Vec& x) {
  Vec y(x);
  for (double& v : y) v *= a;
  return y;
}

Vec added(const Vec& x, const Vec& y) {
  if (x.size() != y.size()) throw std::invalid_argument("added: size mismatch");
  Vec z(x);
  for (size_t i = 0; i < z.size(); ++i) z[i] += y[i];
  return z;
}

Vec subtracted(const Vec& x, const Vec& y) {
  if (x.size() != y.size()) throw std::invalid_argument("subtracted: size mismatch");
  Vec z(x);
  for (size_t i = 0; i < z.size(); ++i) z[i] -= y[i];
  return z;
}

void add_scaled(Vec& y, double a, const Vec& x) {
  if (x.size() != y.size()) throw std::invalid_argument("add_scaled: size mismatch");
  for (size_t i = 0; i < y.size(); ++i) y[i] += a * x[i];
}

LuFactors lu_factor(Mat A, double pivot_rel_tol) {
  if (A.rows != A.cols) throw std::invalid_argument("lu_factor: matrix not square");
  const int n = A.rows;
  LuFactors f;
  f.perm.resize(n);
  f.scale = max_abs(A);
  f.min_pivot = f.scale;
  const double tol = pivot_rel_tol * (f.scale > 0.0 ? f.scale : 1.0);
  for (int k = 0; k < n; ++k) {
    int p = k;
    double best = std::abs(A(k, k));
    for (int i = k + 1; i < n; ++i) {
      const double v = std::abs(A(i, k));
      if (v > best) {
        best = v;
        p = i;
      }
    }
    f.perm[k] = p;
    if (best < tol) {
      f.singular = true;
      f.min_pivot = best;
      f.lu = std::move(A);
      return f;
    }
    f.min_pivot = std::min(f.min_pivot, best);
    if (p != k) {
      for (int j = 0; j < n; ++j) std::swap(A(k, j), A(p, j));
    }
    const double inv = 1.0 / A(k, k);
    for (int i = k + 1; i < n; ++i) {
      const double m = A(i, k) * inv;
      A(i, k) = m;
      if (m == 0.0) continue;
      for (int j = k + 1; j < n; ++j) A(i, j) -= m * A(k, j);
    }
  }
  f.lu = std::move(A);
  return f;
}

Vec lu_solve(const LuFactors& f, Vec b) {
  if (f.singular) throw std::runtime_error("lu_solve: factorization is singular");
  const int n = f.lu.rows;
  if (static_cast<int>(b.size()) != n) throw std::invalid_argument("lu_solve: size mismatch");
  // Rows were exchanged in full during factorization, so all interchanges
  // apply to the right-hand side before the triangular sweeps.
  for (int k = 0; k < n; ++k) std::swap(b[k], b[f.perm[k]]);
  for (int k = 0; k < n; ++k) {
    for (int i = k + 1; i < n; ++i) b[i] -= f.lu(i, k) * b[k];
  }
  for (int i = n - 1; i >= 0; --i) {
    double s = b[i];
    for (int j = i + 1; j < n; ++j) s -= f.lu(i, j) * b[j];
    b[i] = s / f.lu(i, i);
  }
  return b;
}

CholFactors cholesky_factor(const Mat& A) {
  if (A.rows != A.cols) throw std::invalid_argument("cholesky_factor: matrix not square");
  const int n = A.rows;
  Mat L(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j <= i; ++j) {
      double s = A(i, j);
      for (int k = 0; k < j; ++k) s -= L(i, k) * L(j, k);
      if (i == j) {
        if (s <= 0.0) throw std::runtime_error("cholesky_factor: matrix not positive definite");
        L(i, i) = std::sqrt(s);
      } else {
        L(i, j) = s / L(j, j);
      }
    }
  }
  return CholFactors{std::move(L)};
}

Vec cholesky_solve(const CholFactors& f, Vec b) {
  const int n = f.lower.rows;
  if (static_cast<int>(b.size()) != n) throw std::invalid_argument("cholesky_solve: size mismatch");
  for (int i = 0; i < n; ++i) {
    double s = b[i];
    for (int k = 0; k < i; ++k) s -= f.lower(i, k) * b[k];
    b[i] = s / f.lower(i, i);
  }
  for (int i = n - 1; i >= 0; --i) {
    double s = b[i];
    for (int k = i + 1; k < n; ++k) s -= f.lower(k, i) * b[k];
    b[i] = s / f.lower(i, i);
  }
  return b;
}

uint64_t Rng::next() {
  // xorshift-free: step mt19937_64's recurrence via std::mt19937_64 would pull
  // in per-call object state; a splitmix64 stream is enough and fully portable.
  uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double Rng::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

double Rng::uniform(double a, double b) { return a + (b - a) * uniform(); }

double Rng::gaussian() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double two_pi = 6.283185307179586476925286766559;
  spare_ = r * std::sin(two_pi * u2);
  have_spare_ = true;
  return r * std::cos(two_pi * u2);
}

}  // namespace varstep
