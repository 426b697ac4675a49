#include "arcgd/matrix.hpp"

#include <stdexcept>

namespace arcgd {

Matrix matmul(const Matrix& a, const Matrix& b) {
  if (a.cols != b.rows) throw std::invalid_argument("matmul: shape mismatch");
  Matrix out(a.rows, b.cols);
  for (std::size_t i = 0; i < a.rows; ++i) {
    double* out_row = out.row(i);
    for (std::size_t k = 0; k < a.cols; ++k) {
      const double aik = a(i, k);
      const double* b_row = b.row(k);
      for (std::size_t j = 0; j < b.cols; ++j) out_row[j] += aik * b_row[j];
    }
  }
  return out;
}

Matrix matmul_tn(const Matrix& a, const Matrix& b) {
  if (a.rows != b.rows) throw std::invalid_argument("matmul_tn: shape mismatch");
  Matrix out(a.cols, b.cols);
  for (std::size_t k = 0; k < a.rows; ++k) {
    const double* a_row = a.row(k);
    const double* b_row = b.row(k);
    for (std::size_t i = 0; i < a.cols; ++i) {
      const double aki = a_row[i];
      double* out_row = out.row(i);
      for (std::size_t j = 0; j < b.cols; ++j) out_row[j] += aki * b_row[j];
    }
  }
  return out;
}

Matrix matmul_nt(const Matrix& a, const Matrix& b) {
  if (a.cols != b.cols) throw std::invalid_argument("matmul_nt: shape mismatch");
  Matrix out(a.rows, b.rows);
  for (std::size_t i = 0; i < a.rows; ++i) {
    const double* a_row = a.row(i);
    double* out_row = out.row(i);
    for (std::size_t j = 0; j < b.rows; ++j) {
      const double* b_row = b.row(j);
      double dot = 0.0;
      for (std::size_t k = 0; k < a.cols; ++k) dot += a_row[k] * b_row[k];
      out_row[j] = dot;
    }
  }
  return out;
}

}  // namespace arcgd
