#pragma once

// Small dense linear algebra over a finite field: reduced row echelon form,
// rank, and a deterministic linear solver. Deterministic means: pivots are
// chosen at the smallest usable column, scanning rows top to bottom, and free
// variables are set to zero, so the returned solution is supported on the
// earliest possible indices.

#include <cstdint>
#include <optional>
#include <vector>

#include "kats/errors.hpp"
#include "kats/gf.hpp"

namespace kats {

using FieldMatrix = std::vector<std::vector<FieldElement>>;

// In-place reduced row echelon form; returns the pivot column of each
// surviving row, in order.
inline std::vector<size_t> rref(FieldMatrix& M) {
  std::vector<size_t> pivots;
  if (M.empty()) return pivots;
  size_t rows = M.size(), cols = M[0].size();
  size_t r = 0;
  for (size_t c = 0; c < cols && r < rows; ++c) {
    size_t sel = rows;
    for (size_t i = r; i < rows; ++i)
      if (!M[i][c].is_zero()) {
        sel = i;
        break;
      }
    if (sel == rows) continue;
    std::swap(M[r], M[sel]);
    FieldElement inv = M[r][c].inv();
    for (size_t j = c; j < cols; ++j) M[r][j] = M[r][j] * inv;
    for (size_t i = 0; i < rows; ++i) {
      if (i == r || M[i][c].is_zero()) continue;
      FieldElement f = M[i][c];
      for (size_t j = c; j < cols; ++j) M[i][j] = M[i][j] - f * M[r][j];
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

inline size_t rank(FieldMatrix M) { return rref(M).size(); }

// Solve sum_j x_j col_j = rhs where the columns are given as vectors of equal
// length. Returns the least-index solution, or nullopt if inconsistent.
inline std::optional<std::vector<FieldElement>> solve_columns(
    const Field& F, const std::vector<std::vector<FieldElement>>& columns,
    const std::vector<FieldElement>& rhs) {
  size_t n = columns.size();
  size_t m = rhs.size();
  for (const auto& col : columns)
    if (col.size() != m) raise(errc::usage_error, "column length mismatch");
  FieldMatrix M(m, std::vector<FieldElement>(n + 1, F.zero()));
  for (size_t i = 0; i < m; ++i) {
    for (size_t j = 0; j < n; ++j) M[i][j] = columns[j][i];
    M[i][n] = rhs[i];
  }
  std::vector<size_t> pivots = rref(M);
  std::vector<FieldElement> x(n, F.zero());
  for (size_t i = 0; i < pivots.size(); ++i) {
    if (pivots[i] == n) return std::nullopt;  // row (0 ... 0 | 1): inconsistent
    x[pivots[i]] = M[i][n];
  }
  return x;
}

// Keep a maximal linearly independent subset of the given vectors, preserving
// their order (a vector is kept iff it is independent of the kept ones before
// it). Returns the indices of the kept vectors.
inline std::vector<size_t> independent_subset(const Field& F,
                                              const std::vector<std::vector<FieldElement>>& vecs) {
  std::vector<size_t> kept;
  FieldMatrix basis;  // maintained in echelon form
  for (size_t idx = 0; idx < vecs.size(); ++idx) {
    std::vector<FieldElement> v = vecs[idx];
    for (const auto& row : basis) {
      size_t lead = 0;
      while (lead < row.size() && row[lead].is_zero()) ++lead;
      if (lead < row.size() && !v[lead].is_zero()) {
        FieldElement f = v[lead];
        for (size_t j = lead; j < v.size(); ++j) v[j] = v[j] - f * row[j];
      }
    }
    size_t lead = 0;
    while (lead < v.size() && v[lead].is_zero()) ++lead;
    if (lead == v.size()) continue;  // dependent
    FieldElement inv = v[lead].inv();
    for (size_t j = lead; j < v.size(); ++j) v[j] = v[j] * inv;
    basis.push_back(std::move(v));
    // keep echelon order: sort by leading index (insertion point)
    for (size_t i = basis.size(); i-- > 1;) {
      auto lead_of = [](const std::vector<FieldElement>& r) {
        size_t l = 0;
        while (l < r.size() && r[l].is_zero()) ++l;
        return l;
      };
      if (lead_of(basis[i - 1]) > lead_of(basis[i])) std::swap(basis[i - 1], basis[i]);
    }
    kept.push_back(idx);
  }
  return kept;
}

}  // namespace kats
