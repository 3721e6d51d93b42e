#pragma once

#include <vector>

#include "mixident/errors.hpp"
#include "mixident/rational.hpp"
#include "mixident/sym_index.hpp"

namespace mixident {

/// Row-major rational matrix. Small shapes only; everything here is exact.
using RatMatrix = std::vector<std::vector<Rat>>;

struct RrefResult {
  RatMatrix mat;
  std::vector<int> pivot_cols;
  int rank() const { return static_cast<int>(pivot_cols.size()); }
};

/// Reduced row echelon form by exact Gauss-Jordan elimination.
RrefResult rref(RatMatrix m);

/// Exact rank.
int exact_rank(RatMatrix m);

/// Basis of the right nullspace, one vector per free column.
std::vector<std::vector<Rat>> nullspace(const RatMatrix& m);

/// Numerical rank of a row-major double matrix: singular values above
/// rel_tol * sigma_max.
int numerical_rank(const std::vector<std::vector<double>>& m, double rel_tol = 1e-9);

namespace detail {

/// Columns are the compressed tensor powers of the input vectors, rows scaled
/// by `weight(multiplicity)`. Any positive row scaling preserves rank; the
/// float path uses sqrt(multiplicity) so the Gram matrix of the columns equals
/// the Gram matrix of the dense tensor powers.
template <class T, class WeightFn>
std::vector<std::vector<T>> power_matrix(const std::vector<std::vector<T>>& vectors,
                                         int power, WeightFn weight) {
  const int d = static_cast<int>(vectors.front().size());
  const auto& table = sym_index_table(d, power);
  std::vector<std::vector<T>> rows(
      static_cast<std::size_t>(table.n_classes()),
      std::vector<T>(vectors.size(), num<T>::from_int(0)));
  for (std::size_t j = 0; j < vectors.size(); ++j) {
    if (static_cast<int>(vectors[j].size()) != d)
      throw invariant_error("dimension mismatch");
    for (int c = 0; c < table.n_classes(); ++c) {
      T prod = weight(table.multiplicity(c));
      const auto& counts = table.counts(c);
      for (int a = 0; a < d; ++a)
        for (int k = 0; k < counts[static_cast<std::size_t>(a)]; ++k)
          prod *= vectors[j][static_cast<std::size_t>(a)];
      rows[static_cast<std::size_t>(c)][j] = prod;
    }
  }
  return rows;
}

}  // namespace detail

/// Rank of the span of {v^{(x)power} : v in vectors}, computed on compressed
/// coordinates (same Gram matrix, so the rank is faithful). Exact on the
/// rational backend, SVD-based on the float backend.
int rank_of_powers(const std::vector<std::vector<Rat>>& vectors, int power);
int rank_of_powers(const std::vector<std::vector<double>>& vectors, int power);

}  // namespace mixident
