// Copyright (c) the dls authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "dls/geometry.hpp"
#include "dls/parallel.hpp"

namespace dls {

// Compressed-row complex sparse matrix with a fixed, sorted sparsity pattern.
// Rows are accumulated in place; the multiply is parallel over rows and
// bitwise deterministic (fixed summation order within each row).
class CsrMatrix {
 public:
  std::int64_t rows = 0, cols = 0;
  std::vector<std::int64_t> row_ptr;
  std::vector<std::int32_t> col;
  std::vector<cplx> val;

  std::int64_t nnz() const { return static_cast<std::int64_t>(col.size()); }

  // row-local binary search for an existing pattern entry
  std::int64_t find(std::int64_t r, std::int64_t c) const {
    auto first = col.begin() + row_ptr[r], last = col.begin() + row_ptr[r + 1];
    auto it = std::lower_bound(first, last, static_cast<std::int32_t>(c));
    if (it == last || *it != c) return -1;
    return it - col.begin();
  }

  void add(std::int64_t r, std::int64_t c, cplx v) {
    std::int64_t k = find(r, c);
    if (k < 0) throw std::logic_error("CsrMatrix::add: entry outside the sparsity pattern");
    val[k] += v;
  }

  cplx entry(std::int64_t r, std::int64_t c) const {
    std::int64_t k = find(r, c);
    return k < 0 ? cplx{0.0} : val[k];
  }

  void multiply(const std::vector<cplx>& x, std::vector<cplx>& y) const {
    y.resize(rows);
    parallel_for(0, static_cast<std::size_t>(rows), [&](std::size_t r) {
      cplx s{0.0};
      for (std::int64_t k = row_ptr[r]; k < row_ptr[r + 1]; ++k) s += val[k] * x[col[k]];
      y[r] = s;
    });
  }
};

// Deterministic conjugated inner product and norm.
inline cplx cdot(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  return chunked_sum<cplx>(a.size(), [&](std::size_t i) { return std::conj(a[i]) * b[i]; });
}

inline double norm2(const std::vector<cplx>& a) {
  return chunked_sum<double>(a.size(), [&](std::size_t i) { return std::norm(a[i]); });
}

inline double vec_norm(const std::vector<cplx>& a) { return std::sqrt(norm2(a)); }

}  // namespace dls
