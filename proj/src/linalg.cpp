#include "comconceal/linalg.hpp"

#include <cmath>

#include "comconceal/errors.hpp"

namespace comconceal {

namespace {
// Below this many multiply-adds the parallel-region overhead dominates.
constexpr long kParallelCutoff = 1L << 16;
}  // namespace

Mat matmul(const Mat& a, const Mat& b) {
  if (a.cols != b.rows) fail(Errc::DimensionMismatch, "matmul inner dims");
  Mat c(a.rows, b.cols);
  const long work = static_cast<long>(a.rows) * a.cols * b.cols;
#pragma omp parallel for schedule(static) if (work > kParallelCutoff)
  for (int i = 0; i < a.rows; ++i) {
    double* crow = c.row(i);
    const double* arow = a.row(i);
    for (int k = 0; k < a.cols; ++k) {
      const double aik = arow[k];
      if (aik == 0.0) continue;
      const double* brow = b.row(k);
      for (int j = 0; j < b.cols; ++j) crow[j] += aik * brow[j];
    }
  }
  return c;
}

Mat matmul_tn(const Mat& a, const Mat& b) {
  if (a.rows != b.rows) fail(Errc::DimensionMismatch, "matmul_tn inner dims");
  Mat c(a.cols, b.cols);
  const long work = static_cast<long>(a.rows) * a.cols * b.cols;
#pragma omp parallel for schedule(static) if (work > kParallelCutoff)
  for (int i = 0; i < a.cols; ++i) {
    double* crow = c.row(i);
    for (int k = 0; k < a.rows; ++k) {
      const double aki = a.at(k, i);
      if (aki == 0.0) continue;
      const double* brow = b.row(k);
      for (int j = 0; j < b.cols; ++j) crow[j] += aki * brow[j];
    }
  }
  return c;
}

Mat matmul_nt(const Mat& a, const Mat& b) {
  if (a.cols != b.cols) fail(Errc::DimensionMismatch, "matmul_nt inner dims");
  Mat c(a.rows, b.rows);
  const long work = static_cast<long>(a.rows) * a.cols * b.rows;
#pragma omp parallel for schedule(static) if (work > kParallelCutoff)
  for (int i = 0; i < a.rows; ++i) {
    double* crow = c.row(i);
    const double* arow = a.row(i);
    for (int j = 0; j < b.rows; ++j) {
      const double* brow = b.row(j);
      double acc = 0.0;
      for (int k = 0; k < a.cols; ++k) acc += arow[k] * brow[k];
      crow[j] = acc;
    }
  }
  return c;
}

void add_inplace(Mat& a, const Mat& b) {
  if (a.rows != b.rows || a.cols != b.cols) fail(Errc::DimensionMismatch, "add_inplace");
  for (std::size_t i = 0; i < a.data.size(); ++i) a.data[i] += b.data[i];
}

void axpy_inplace(Mat& a, double s, const Mat& b) {
  if (a.rows != b.rows || a.cols != b.cols) fail(Errc::DimensionMismatch, "axpy_inplace");
  for (std::size_t i = 0; i < a.data.size(); ++i) a.data[i] += s * b.data[i];
}

void scale_inplace(Mat& a, double s) {
  for (double& v : a.data) v *= s;
}

bool all_finite(const Mat& a) {
  for (double v : a.data) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

double CsrMatrix::entry(int i, int j) const {
  for (int p = indptr[i]; p < indptr[i + 1]; ++p) {
    if (indices[p] == j) return values[p];
  }
  return 0.0;
}

Mat spmm(const CsrMatrix& s, const Mat& b) {
  if (s.n != b.rows) fail(Errc::DimensionMismatch, "spmm inner dims");
  Mat c(s.n, b.cols);
  const long work = static_cast<long>(s.indices.size()) * b.cols;
#pragma omp parallel for schedule(static) if (work > kParallelCutoff)
  for (int i = 0; i < s.n; ++i) {
    double* crow = c.row(i);
    for (int p = s.indptr[i]; p < s.indptr[i + 1]; ++p) {
      const double v = s.values[p];
      const double* brow = b.row(s.indices[p]);
      for (int j = 0; j < b.cols; ++j) crow[j] += v * brow[j];
    }
  }
  return c;
}

}  // namespace comconceal
