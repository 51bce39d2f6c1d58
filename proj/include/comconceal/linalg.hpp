#pragma once

#include <cstddef>
#include <vector>

namespace comconceal {

// Dense row-major matrix of doubles. OpenMP kernels parallelize over output
// rows only, so every entry is accumulated serially by a single thread and
// results do not depend on the thread count.
struct Mat {
  int rows = 0;
  int cols = 0;
  std::vector<double> data;

  Mat() = default;
  Mat(int r, int c) : rows(r), cols(c), data(static_cast<std::size_t>(r) * c, 0.0) {}

  double& at(int r, int c) { return data[static_cast<std::size_t>(r) * cols + c]; }
  double at(int r, int c) const { return data[static_cast<std::size_t>(r) * cols + c]; }
  double* row(int r) { return data.data() + static_cast<std::size_t>(r) * cols; }
  const double* row(int r) const { return data.data() + static_cast<std::size_t>(r) * cols; }

  static Mat zeros(int r, int c) { return Mat(r, c); }
};

// C = A * B
Mat matmul(const Mat& a, const Mat& b);
// C = A^T * B
Mat matmul_tn(const Mat& a, const Mat& b);
// C = A * B^T
Mat matmul_nt(const Mat& a, const Mat& b);

void add_inplace(Mat& a, const Mat& b);           // a += b
void axpy_inplace(Mat& a, double s, const Mat& b);  // a += s * b
void scale_inplace(Mat& a, double s);

bool all_finite(const Mat& a);

// Compressed sparse row matrix; used for normalized adjacencies.
struct CsrMatrix {
  int n = 0;  // square
  std::vector<int> indptr;   // size n + 1
  std::vector<int> indices;  // column ids, sorted within each row
  std::vector<double> values;

  double entry(int i, int j) const;
};

// C = S * B with S sparse (n x n) and B dense (n x c).
Mat spmm(const CsrMatrix& s, const Mat& b);

}  // namespace comconceal
