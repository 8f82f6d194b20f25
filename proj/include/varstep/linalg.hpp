// Small dense vector/matrix kernels used throughout the solver.
// Systems here are tiny (a few hundred unknowns at most), so everything
// is plain row-major storage with partial-pivot LU and Cholesky solves.
#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace varstep {

using Vec = std::vector<double>;

struct Mat {
  int rows = 0;
  int cols = 0;
  std::vector<double> data;

  Mat() = default;
  Mat(int r, int c) : rows(r), cols(c), data(static_cast<size_t>(r) * c, 0.0) {}

  double& operator()(int i, int j) { return data[static_cast<size_t>(i) * cols + j]; }
  double operator()(int i, int j) const { return data[static_cast<size_t>(i) * cols + j]; }

  static Mat identity(int n);
};

Vec matvec(const Mat& A, const Vec& x);
Vec matvec_transposed(const Mat& A, const Vec& x);  // A^T x
Mat matmul(const Mat& A, const Mat& B);
Mat transposed(const Mat& A);

double dot(const Vec& a, const Vec& b);
double norm2(const Vec& a);
double norm_inf(const Vec& a);
double max_abs(const Mat& A);

Vec scaled(double a, const Vec& x);
Vec added(const Vec& x, const Vec& y);
Vec subtracted(const Vec& x, const Vec& y);
void add_scaled(Vec& y, double a, const Vec& x);  // y += a*x

// LU with partial pivoting. A pivot below pivot_rel_tol * max|A| marks the
// factorization singular; callers decide whether that is recoverable.
struct LuFactors {
  Mat lu;
  std::vector<int> perm;
  bool singular = false;
  double min_pivot = 0.0;
  double scale = 0.0;
};

LuFactors lu_factor(Mat A, double pivot_rel_tol = 1e-14);
Vec lu_solve(const LuFactors& f, Vec b);

// Cholesky (lower triangular) for SPD matrices; throws on a non-positive pivot.
struct CholFactors {
  Mat lower;
};

CholFactors cholesky_factor(const Mat& A);
Vec cholesky_solve(const CholFactors& f, Vec b);

// Deterministic random source. Uniform bits come straight from mt19937_64 and
// normals from Box-Muller, so sequences do not depend on the standard
// library's distribution implementations.
class Rng {
 public:
  explicit Rng(uint64_t seed) : state_(split(seed)), have_spare_(false), spare_(0.0) {}

  double uniform();                     // [0, 1)
  double uniform(double a, double b);   // [a, b)
  double gaussian();                    // standard normal

 private:
  static uint64_t split(uint64_t seed) { return seed * 6364136223846793005ULL + 1442695040888963407ULL; }
  uint64_t next();
  uint64_t state_;
  bool have_spare_;
  double spare_;
};

}  // namespace varstep
