#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "mixident/errors.hpp"
#include "mixident/measures.hpp"
#include "mixident/rational.hpp"
#include "mixident/sym_index.hpp"

namespace mixident {

enum class Layout { dense, compressed };

/// Order-n symmetric tensor over d atoms. Dense layout stores all d^n entries
/// row-major; compressed layout stores one entry per multiset class (see
/// SymIndexTable), i.e. the coefficient of each degree-n monomial without its
/// multiplicity.
template <class T>
class MomentTensor {
 public:
  static MomentTensor make_dense(int order, int dim, std::vector<T> entries) {
    if (dense_size(dim, order) != entries.size())
      throw invariant_error("dense entry count does not match shape");
    return MomentTensor(order, dim, Layout::dense, std::move(entries));
  }

  static MomentTensor make_compressed(int order, int dim, std::vector<T> entries) {
    if (n_multisets(dim, order) != entries.size())
      throw invariant_error("compressed entry count does not match shape");
    return MomentTensor(order, dim, Layout::compressed, std::move(entries));
  }

  int order() const { return order_; }
  int dim() const { return dim_; }
  Layout layout() const { return layout_; }
  const std::vector<T>& entries() const { return entries_; }

  /// Total mass: plain sum when dense, multiplicity-weighted sum when
  /// compressed.
  T mass() const {
    T total = num<T>::from_int(0);
    if (layout_ == Layout::dense) {
      for (const T& e : entries_) total += e;
    } else {
      const auto& table = sym_index_table(dim_, order_);
      for (int c = 0; c < table.n_classes(); ++c)
        total += num<T>::from_int(static_cast<long>(table.multiplicity(c))) *
                 entries_[static_cast<std::size_t>(c)];
    }
    return total;
  }

 private:
  MomentTensor(int order, int dim, Layout layout, std::vector<T> entries)
      : order_(order), dim_(dim), layout_(layout), entries_(std::move(entries)) {}

  int order_;
  int dim_;
  Layout layout_;
  std::vector<T> entries_;
};

/// v^{(x)n}: entry at (i1..in) is the product v[i1]...v[in]. Order 0 yields
/// the scalar 1. Dense mode refuses shapes past the entry cap.
template <class T>
MomentTensor<T> tensor_power(const std::vector<T>& v, int n,
                             Layout layout = Layout::dense,
                             std::size_t cap = kDenseEntryCap) {
  if (n < 0) throw invariant_error("negative tensor order");
  const int d = static_cast<int>(v.size());
  if (d < 1) throw invariant_error("empty vector");
  if (n == 0) layout = Layout::dense;  // scalar; nothing to compress

  if (layout == Layout::dense) {
    const std::size_t total = dense_size(d, n, cap);
    if (total == std::numeric_limits<std::size_t>::max())
      throw invariant_error(
          "dense tensor would exceed the entry cap; use the compressed layout");
    std::vector<T> cur{num<T>::from_int(1)};
    for (int k = 0; k < n; ++k) {
      std::vector<T> next(cur.size() * static_cast<std::size_t>(d));
      for (std::size_t i = 0; i < cur.size(); ++i)
        for (int a = 0; a < d; ++a)
          next[i * static_cast<std::size_t>(d) + static_cast<std::size_t>(a)] =
              cur[i] * v[static_cast<std::size_t>(a)];
      cur = std::move(next);
    }
    return MomentTensor<T>::make_dense(n, d, std::move(cur));
  }

  const auto& table = sym_index_table(d, n);
  std::vector<T> out(static_cast<std::size_t>(table.n_classes()));
  for (int c = 0; c < table.n_classes(); ++c) {
    T prod = num<T>::from_int(1);
    const auto& counts = table.counts(c);
    for (int a = 0; a < d; ++a)
      for (int k = 0; k < counts[static_cast<std::size_t>(a)]; ++k)
        prod *= v[static_cast<std::size_t>(a)];
    out[static_cast<std::size_t>(c)] = prod;
  }
  return MomentTensor<T>::make_compressed(n, d, std::move(out));
}

template <class T>
MomentTensor<T> tensor_power(const DiscreteMeasure<T>& m, int n,
                             Layout layout = Layout::dense,
                             std::size_t cap = kDenseEntryCap) {
  return tensor_power(m.probs(), n, layout, cap);
}

/// The group law: the distribution of a size-n group drawn from one random
/// component, i.e. the weighted sum of component tensor powers.
template <class T>
MomentTensor<T> group_law(const Mixture<T>& P, int n,
                          Layout layout = Layout::dense,
                          std::size_t cap = kDenseEntryCap) {
  MomentTensor<T> acc = tensor_power(P.component(0), n, layout, cap);
  std::vector<T> entries = acc.entries();
  for (auto& e : entries) e *= P.weight(0);
  for (int i = 1; i < P.order(); ++i) {
    const MomentTensor<T> p = tensor_power(P.component(i), n, layout, cap);
    for (std::size_t k = 0; k < entries.size(); ++k)
      entries[k] += P.weight(i) * p.entries()[k];
  }
  return layout == Layout::dense
             ? MomentTensor<T>::make_dense(n, P.dim(), std::move(entries))
             : MomentTensor<T>::make_compressed(n, P.dim(), std::move(entries));
}

/// Expands a compressed tensor to its dense form.
template <class T>
MomentTensor<T> decompress(const MomentTensor<T>& t,
                           std::size_t cap = kDenseEntryCap) {
  if (t.layout() == Layout::dense) return t;
  const std::size_t total = dense_size(t.dim(), t.order(), cap);
  if (total == std::numeric_limits<std::size_t>::max())
    throw invariant_error("decompressed tensor would exceed the entry cap");
  const auto& table = sym_index_table(t.dim(), t.order());
  const auto& map = table.dense_to_class();
  std::vector<T> out(total);
  for (std::size_t f = 0; f < total; ++f)
    out[f] = t.entries()[static_cast<std::size_t>(map[f])];
  return MomentTensor<T>::make_dense(t.order(), t.dim(), std::move(out));
}

/// Sums out the trailing order-q axes, the tensor form of pushing the group
/// law down to a smaller group size. Compressed input is expanded first.
template <class T>
MomentTensor<T> marginalize(const MomentTensor<T>& t, int q) {
  if (q < 0 || q > t.order()) throw invariant_error("marginal order out of range");
  const MomentTensor<T> dense = decompress(t);
  std::vector<T> cur = dense.entries();
  const int d = t.dim();
  for (int k = t.order(); k > q; --k) {
    std::vector<T> next(cur.size() / static_cast<std::size_t>(d));
    for (std::size_t i = 0; i < next.size(); ++i) {
      T s = num<T>::from_int(0);
      for (int a = 0; a < d; ++a)
        s += cur[i * static_cast<std::size_t>(d) + static_cast<std::size_t>(a)];
      next[i] = s;
    }
    cur = std::move(next);
  }
  return MomentTensor<T>::make_dense(q, d, std::move(cur));
}

namespace detail {

template <class T>
std::string format_tuple(const std::vector<int>& tuple) {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < tuple.size(); ++i) {
    if (i) os << ',';
    os << tuple[i];
  }
  os << ')';
  return os.str();
}

}  // namespace detail

/// Dense -> compressed. The value of each class is taken at its canonical
/// (sorted) position; every other position in the orbit must agree within
/// tol, otherwise the location of the worst asymmetry is reported.
template <class T>
MomentTensor<T> sym_compress(const MomentTensor<T>& t,
                             const T& tol = num<T>::exact
                                 ? num<T>::from_int(0)
                                 : num<T>::ratio(1, 10'000'000'000L)) {
  if (t.layout() == Layout::compressed) return t;
  const auto& table = sym_index_table(t.dim(), t.order());
  const auto& map = table.dense_to_class();
  std::vector<T> out(static_cast<std::size_t>(table.n_classes()));
  // Canonical representative of each class: its sorted tuple.
  for (int c = 0; c < table.n_classes(); ++c)
    out[static_cast<std::size_t>(c)] =
        t.entries()[dense_rank(table.sorted_tuple(c), t.dim())];

  T worst = num<T>::from_int(0);
  std::size_t worst_at = 0;
  for (std::size_t f = 0; f < t.entries().size(); ++f) {
    const T dev = num<T>::abs(t.entries()[f] - out[static_cast<std::size_t>(map[f])]);
    if (dev > worst) {
      worst = dev;
      worst_at = f;
    }
  }
  if (worst > tol) {
    throw invariant_error(
        "tensor is not symmetric: worst asymmetry at index " +
        detail::format_tuple<T>(dense_unrank(worst_at, t.dim(), t.order())));
  }
  return MomentTensor<T>::make_compressed(t.order(), t.dim(), std::move(out));
}

template <class T>
struct TensorDistance {
  T max_abs;
  T l2_squared;
  double l2() const { return std::sqrt(to_double(l2_squared)); }
};

namespace detail {

template <class T>
void require_same_shape(const MomentTensor<T>& a, const MomentTensor<T>& b) {
  if (a.order() != b.order() || a.dim() != b.dim())
    throw invariant_error("tensor shape mismatch");
}

}  // namespace detail

/// Entrywise max-abs and squared Euclidean distance. Compressed operands use
/// multiplicity weights, so both layouts agree with the dense metric.
template <class T>
TensorDistance<T> tensor_distance(const MomentTensor<T>& a, const MomentTensor<T>& b) {
  detail::require_same_shape(a, b);
  T max_abs = num<T>::from_int(0);
  T l2sq = num<T>::from_int(0);
  if (a.layout() == Layout::compressed && b.layout() == Layout::compressed) {
    const auto& table = sym_index_table(a.dim(), a.order());
    for (int c = 0; c < table.n_classes(); ++c) {
      const T diff = a.entries()[static_cast<std::size_t>(c)] -
                     b.entries()[static_cast<std::size_t>(c)];
      max_abs = std::max(max_abs, num<T>::abs(diff));
      l2sq += num<T>::from_int(static_cast<long>(table.multiplicity(c))) * diff * diff;
    }
  } else {
    const MomentTensor<T> x = decompress(a);
    const MomentTensor<T> y = decompress(b);
    for (std::size_t k = 0; k < x.entries().size(); ++k) {
      const T diff = x.entries()[k] - y.entries()[k];
      max_abs = std::max(max_abs, num<T>::abs(diff));
      l2sq += diff * diff;
    }
  }
  return {max_abs, l2sq};
}

/// Inner product; multiplicity-weighted in compressed coordinates so that it
/// matches the dense value.
template <class T>
T tensor_inner(const MomentTensor<T>& a, const MomentTensor<T>& b) {
  detail::require_same_shape(a, b);
  T s = num<T>::from_int(0);
  if (a.layout() == Layout::compressed && b.layout() == Layout::compressed) {
    const auto& table = sym_index_table(a.dim(), a.order());
    for (int c = 0; c < table.n_classes(); ++c)
      s += num<T>::from_int(static_cast<long>(table.multiplicity(c))) *
           a.entries()[static_cast<std::size_t>(c)] *
           b.entries()[static_cast<std::size_t>(c)];
  } else {
    const MomentTensor<T> x = decompress(a);
    const MomentTensor<T> y = decompress(b);
    for (std::size_t k = 0; k < x.entries().size(); ++k)
      s += x.entries()[k] * y.entries()[k];
  }
  return s;
}

/// Domination measure and per-measure densities against it. xi is the plain
/// (unnormalized) sum of the inputs; densities are entrywise quotients with
/// 0/0 := 0, so xi[a] = 0 forces mu_i[a] = 0 and every density entry lies in
/// [0,1] wherever xi is positive.
template <class T>
struct DensityContext {
  std::vector<T> xi;
  std::vector<std::vector<T>> densities;
};

template <class T>
DensityContext<T> make_density_context(const std::vector<DiscreteMeasure<T>>& ms) {
  if (ms.empty()) throw invariant_error("no measures");
  const int d = ms.front().dim();
  DensityContext<T> ctx;
  ctx.xi.assign(static_cast<std::size_t>(d), num<T>::from_int(0));
  for (const auto& m : ms) {
    if (m.dim() != d) throw invariant_error("dimension mismatch");
    for (int a = 0; a < d; ++a) ctx.xi[static_cast<std::size_t>(a)] += m[a];
  }
  for (const auto& m : ms) {
    std::vector<T> den(static_cast<std::size_t>(d), num<T>::from_int(0));
    for (int a = 0; a < d; ++a)
      if (ctx.xi[static_cast<std::size_t>(a)] != num<T>::from_int(0))
        den[static_cast<std::size_t>(a)] = m[a] / ctx.xi[static_cast<std::size_t>(a)];
    ctx.densities.push_back(std::move(den));
  }
  return ctx;
}

/// Rebuilds the group law from densities: sum_i w_i * (density_i^{(x)n}
/// scaled entrywise by xi^{(x)n}). Agrees with group_law exactly on the
/// rational backend.
template <class T>
MomentTensor<T> law_from_densities(const DensityContext<T>& ctx,
                                   const std::vector<T>& weights, int n) {
  if (weights.size() != ctx.densities.size())
    throw invariant_error("weights/densities length mismatch");
  const MomentTensor<T> xi_pow = tensor_power(ctx.xi, n);
  std::vector<T> acc(xi_pow.entries().size(), num<T>::from_int(0));
  for (std::size_t i = 0; i < weights.size(); ++i) {
    const MomentTensor<T> dp = tensor_power(ctx.densities[i], n);
    for (std::size_t k = 0; k < acc.size(); ++k)
      acc[k] += weights[i] * dp.entries()[k] * xi_pow.entries()[k];
  }
  const int d = static_cast<int>(ctx.xi.size());
  return MomentTensor<T>::make_dense(n, d, std::move(acc));
}

// rank_of_powers lives in linalg.hpp (it needs the elimination/SVD backends).

}  // namespace mixident
