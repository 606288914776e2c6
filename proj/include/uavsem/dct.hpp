#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <utility>
#include <vector>

namespace uavsem {

namespace detail {

inline std::mutex& dct_cache_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace detail

// Orthonormal DCT-II basis matrix C of size n x n:
//   C(k, j) = s_k * cos(pi * (j + 0.5) * k / n),  s_0 = sqrt(1/n),
//   s_k = sqrt(2/n) for k > 0.
// C is orthogonal, so the inverse transform is C^T.
inline const Eigen::MatrixXd& dct_matrix(int n) {
  static std::map<int, std::unique_ptr<Eigen::MatrixXd>> cache;
  std::lock_guard<std::mutex> lock(detail::dct_cache_mutex());
  auto it = cache.find(n);
  if (it == cache.end()) {
    auto mat = std::make_unique<Eigen::MatrixXd>(n, n);
    const double scale0 = std::sqrt(1.0 / n);
    const double scale = std::sqrt(2.0 / n);
    for (int k = 0; k < n; ++k)
      for (int j = 0; j < n; ++j)
        (*mat)(k, j) = (k == 0 ? scale0 : scale) *
                       std::cos(std::numbers::pi * (j + 0.5) * k / n);
    it = cache.emplace(n, std::move(mat)).first;
  }
  return *it->second;
}

// 2-D orthonormal DCT-II: Y = C_r X C_c^T.
inline Eigen::MatrixXd dct2(const Eigen::MatrixXd& x) {
  const Eigen::MatrixXd& cr = dct_matrix(static_cast<int>(x.rows()));
  const Eigen::MatrixXd& cc = dct_matrix(static_cast<int>(x.cols()));
  return cr * x * cc.transpose();
}

// Inverse of dct2 (2-D DCT-III with orthonormal scaling): X = C_r^T Y C_c.
inline Eigen::MatrixXd idct2(const Eigen::MatrixXd& y) {
  const Eigen::MatrixXd& cr = dct_matrix(static_cast<int>(y.rows()));
  const Eigen::MatrixXd& cc = dct_matrix(static_cast<int>(y.cols()));
  return cr.transpose() * y * cc;
}

// JPEG-style zigzag scan generalized to rows x cols: anti-diagonals in
// increasing order of i + j; even diagonals are walked with the row index
// decreasing, odd diagonals with the row index increasing. For 8x8 this
// reproduces the JPEG order exactly.
inline const std::vector<std::pair<int, int>>& zigzag_scan(int rows, int cols) {
  static std::map<std::pair<int, int>,
                  std::unique_ptr<std::vector<std::pair<int, int>>>>
      cache;
  std::lock_guard<std::mutex> lock(detail::dct_cache_mutex());
  auto key = std::make_pair(rows, cols);
  auto it = cache.find(key);
  if (it == cache.end()) {
    auto scan = std::make_unique<std::vector<std::pair<int, int>>>();
    scan->reserve(static_cast<std::size_t>(rows) * cols);
    for (int s = 0; s <= rows + cols - 2; ++s) {
      if (s % 2 == 0) {
        for (int i = std::min(s, rows - 1); i >= std::max(0, s - cols + 1); --i)
          scan->emplace_back(i, s - i);
      } else {
        for (int i = std::max(0, s - cols + 1); i <= std::min(s, rows - 1); ++i)
          scan->emplace_back(i, s - i);
      }
    }
    it = cache.emplace(key, std::move(scan)).first;
  }
  return *it->second;
}

}  // namespace uavsem
