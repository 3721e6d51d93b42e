#include "mixident/linalg.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <cmath>

namespace mixident {

RrefResult rref(RatMatrix m) {
  const int rows = static_cast<int>(m.size());
  const int cols = rows ? static_cast<int>(m.front().size()) : 0;
  std::vector<int> pivots;
  int r = 0;
  for (int c = 0; c < cols && r < rows; ++c) {
    int p = -1;
    for (int i = r; i < rows; ++i) {
      if (m[static_cast<std::size_t>(i)][static_cast<std::size_t>(c)] != 0) {
        p = i;
        break;
      }
    }
    if (p < 0) continue;
    std::swap(m[static_cast<std::size_t>(r)], m[static_cast<std::size_t>(p)]);
    const Rat lead = m[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
    for (int j = c; j < cols; ++j)
      m[static_cast<std::size_t>(r)][static_cast<std::size_t>(j)] /= lead;
    for (int i = 0; i < rows; ++i) {
      if (i == r) continue;
      const Rat f = m[static_cast<std::size_t>(i)][static_cast<std::size_t>(c)];
      if (f == 0) continue;
      for (int j = c; j < cols; ++j)
        m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] -=
            f * m[static_cast<std::size_t>(r)][static_cast<std::size_t>(j)];
    }
    pivots.push_back(c);
    ++r;
  }
  return {std::move(m), std::move(pivots)};
}

int exact_rank(RatMatrix m) { return rref(std::move(m)).rank(); }

std::vector<std::vector<Rat>> nullspace(const RatMatrix& m) {
  const int cols = m.empty() ? 0 : static_cast<int>(m.front().size());
  const RrefResult red = rref(m);
  std::vector<bool> is_pivot(static_cast<std::size_t>(cols), false);
  for (int c : red.pivot_cols) is_pivot[static_cast<std::size_t>(c)] = true;

  std::vector<std::vector<Rat>> basis;
  for (int free = 0; free < cols; ++free) {
    if (is_pivot[static_cast<std::size_t>(free)]) continue;
    std::vector<Rat> v(static_cast<std::size_t>(cols), Rat(0));
    v[static_cast<std::size_t>(free)] = 1;
    for (std::size_t r = 0; r < red.pivot_cols.size(); ++r) {
      const int pc = red.pivot_cols[r];
      v[static_cast<std::size_t>(pc)] =
          -red.mat[r][static_cast<std::size_t>(free)];
    }
    basis.push_back(std::move(v));
  }
  return basis;
}

int numerical_rank(const std::vector<std::vector<double>>& m, double rel_tol) {
  if (m.empty() || m.front().empty()) return 0;
  Eigen::MatrixXd a(m.size(), m.front().size());
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < m.front().size(); ++j)
      a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = m[i][j];
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0) return 0;
  const double cutoff = rel_tol * sv(0);
  int rank = 0;
  for (Eigen::Index k = 0; k < sv.size(); ++k)
    if (sv(k) > cutoff && sv(k) > 0.0) ++rank;
  return rank;
}

int rank_of_powers(const std::vector<std::vector<Rat>>& vectors, int power) {
  if (vectors.empty()) throw invariant_error("no vectors");
  if (power < 1) throw invariant_error("power must be >= 1");
  return exact_rank(detail::power_matrix(
      vectors, power, [](std::uint64_t mult) { return Rat(static_cast<unsigned long>(mult)); }));
}

int rank_of_powers(const std::vector<std::vector<double>>& vectors, int power) {
  if (vectors.empty()) throw invariant_error("no vectors");
  if (power < 1) throw invariant_error("power must be >= 1");
  return numerical_rank(detail::power_matrix(
      vectors, power, [](std::uint64_t mult) { return std::sqrt(static_cast<double>(mult)); }));
}

}  // namespace mixident
