#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "stiffstep/sparse.hpp"

namespace testing {

inline stiffstep::SparseMatrix tridiag(std::size_t n, double lower, double diag, double upper,
                                       stiffstep::SparseMatrix::Layout layout =
                                           stiffstep::SparseMatrix::Layout::dia) {
  std::vector<stiffstep::Triplet> t;
  for (std::size_t i = 0; i < n; ++i) {
    if (i > 0) t.push_back({i, i - 1, lower});
    t.push_back({i, i, diag});
    if (i + 1 < n) t.push_back({i, i + 1, upper});
  }
  return stiffstep::SparseMatrix::from_triplets(n, t, layout);
}

inline stiffstep::SparseMatrix diagonal(const std::vector<double>& d) {
  std::vector<stiffstep::Triplet> t;
  for (std::size_t i = 0; i < d.size(); ++i) t.push_back({i, i, d[i]});
  return stiffstep::SparseMatrix::from_triplets(d.size(), t, stiffstep::SparseMatrix::Layout::dia);
}

inline std::vector<double> uniform(std::mt19937_64& rng, std::size_t n, double lo = 0.0,
                                   double hi = 1.0) {
  std::uniform_real_distribution<double> dist(lo, hi);
  std::vector<double> v(n);
  for (auto& x : v) x = dist(rng);
  return v;
}

inline double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace testing
