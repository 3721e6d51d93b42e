#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <sstream>
#include <utility>
#include <vector>

#include "mixident/errors.hpp"
#include "mixident/rational.hpp"
#include "mixident/rng.hpp"

namespace mixident {

/// Probability vector over d >= 2 atoms. Entries are nonnegative and sum to 1
/// (exactly on the rational backend, within num<double>::mass_tol() on the
/// float backend). Immutable after construction.
template <class T>
class DiscreteMeasure {
 public:
  explicit DiscreteMeasure(std::vector<T> probs) : probs_(std::move(probs)) {
    if (probs_.size() < 2) throw invariant_error("measure needs d >= 2 atoms");
    T total = num<T>::from_int(0);
    for (const T& p : probs_) {
      if (p < num<T>::from_int(0)) throw invariant_error("negative mass entry");
      total += p;
    }
    if (num<T>::abs(total - num<T>::from_int(1)) > num<T>::mass_tol())
      throw invariant_error("measure mass differs from 1");
  }

  static DiscreteMeasure dirac(int d, int atom) {
    if (atom < 0 || atom >= d) throw invariant_error("dirac atom out of range");
    std::vector<T> p(static_cast<std::size_t>(d), num<T>::from_int(0));
    p[static_cast<std::size_t>(atom)] = num<T>::from_int(1);
    return DiscreteMeasure(std::move(p));
  }

  int dim() const { return static_cast<int>(probs_.size()); }
  const std::vector<T>& probs() const { return probs_; }
  const T& operator[](int a) const { return probs_[static_cast<std::size_t>(a)]; }

  friend bool operator==(const DiscreteMeasure& a, const DiscreteMeasure& b) {
    return a.probs_ == b.probs_;
  }
  friend bool operator<(const DiscreteMeasure& a, const DiscreteMeasure& b) {
    return std::lexicographical_compare(a.probs_.begin(), a.probs_.end(),
                                        b.probs_.begin(), b.probs_.end());
  }

 private:
  std::vector<T> probs_;
};

template <class T>
T max_abs_diff(const DiscreteMeasure<T>& a, const DiscreteMeasure<T>& b) {
  if (a.dim() != b.dim()) throw invariant_error("dimension mismatch");
  T worst = num<T>::from_int(0);
  for (int i = 0; i < a.dim(); ++i) worst = std::max(worst, num<T>::abs(a[i] - b[i]));
  return worst;
}

/// Convex combination eps*p + (1-eps)*q of two measures over the same atoms.
template <class T>
DiscreteMeasure<T> blend(const T& eps, const DiscreteMeasure<T>& p,
                         const DiscreteMeasure<T>& q) {
  if (p.dim() != q.dim()) throw invariant_error("dimension mismatch");
  std::vector<T> out(static_cast<std::size_t>(p.dim()));
  const T one = num<T>::from_int(1);
  for (int a = 0; a < p.dim(); ++a)
    out[static_cast<std::size_t>(a)] = eps * p[a] + (one - eps) * q[a];
  return DiscreteMeasure<T>(std::move(out));
}

/// Minimal representation of a mixture of measures: strictly positive weights
/// summing to 1 and pairwise-distinct components, held in canonical
/// (lexicographic) component order. Construct through canonicalize().
template <class T>
class Mixture {
 public:
  int order() const { return static_cast<int>(weights_.size()); }
  int dim() const { return components_.front().dim(); }
  const std::vector<T>& weights() const { return weights_; }
  const std::vector<DiscreteMeasure<T>>& components() const { return components_; }
  const T& weight(int i) const { return weights_[static_cast<std::size_t>(i)]; }
  const DiscreteMeasure<T>& component(int i) const {
    return components_[static_cast<std::size_t>(i)];
  }

  template <class U>
  friend Mixture<U> canonicalize(std::vector<U>, std::vector<DiscreteMeasure<U>>,
                                 const U&);

 private:
  Mixture(std::vector<T> w, std::vector<DiscreteMeasure<T>> c)
      : weights_(std::move(w)), components_(std::move(c)) {}

  std::vector<T> weights_;
  std::vector<DiscreteMeasure<T>> components_;
};

/// Signed combination of pairwise-distinct measures; the ambient object that
/// intermediate computations (reductions, null combinations) live in.
template <class T>
struct SignedMixture {
  std::vector<T> coeffs;
  std::vector<DiscreteMeasure<T>> components;
};

/// Canonical minimal representation: drops zero-weight terms, merges
/// components equal within merge_tol (max-abs; first occurrence is the
/// representative), sorts lexicographically by component vector (weight as
/// tiebreak) and renormalizes weights to sum 1.
template <class T>
Mixture<T> canonicalize(std::vector<T> raw_weights,
                        std::vector<DiscreteMeasure<T>> raw_components,
                        const T& merge_tol = num<T>::merge_tol()) {
  if (raw_weights.size() != raw_components.size())
    throw invariant_error("weights/components length mismatch");
  if (raw_weights.empty()) throw invariant_error("empty mixture");

  const T zero = num<T>::from_int(0);
  std::vector<T> weights;
  std::vector<DiscreteMeasure<T>> comps;
  for (std::size_t k = 0; k < raw_weights.size(); ++k) {
    if (raw_weights[k] < zero) throw invariant_error("negative weight");
    if (raw_components[k].dim() != raw_components[0].dim())
      throw invariant_error("dimension mismatch");
    if (raw_weights[k] == zero) continue;
    bool merged = false;
    for (std::size_t j = 0; j < comps.size(); ++j) {
      if (max_abs_diff(comps[j], raw_components[k]) <= merge_tol) {
        weights[j] += raw_weights[k];
        merged = true;
        break;
      }
    }
    if (!merged) {
      weights.push_back(raw_weights[k]);
      comps.push_back(raw_components[k]);
    }
  }
  if (weights.empty()) throw invariant_error("empty mixture");

  std::vector<std::size_t> idx(weights.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    if (comps[a] == comps[b]) return weights[a] < weights[b];
    return comps[a] < comps[b];
  });

  T total = zero;
  for (const T& w : weights) total += w;

  std::vector<T> out_w;
  std::vector<DiscreteMeasure<T>> out_c;
  out_w.reserve(idx.size());
  out_c.reserve(idx.size());
  for (std::size_t i : idx) {
    out_w.push_back(weights[i] / total);
    out_c.push_back(comps[i]);
  }
  return Mixture<T>(std::move(out_w), std::move(out_c));
}

namespace detail {

/// Perfect matching over the boolean compatibility relation, by augmenting
/// paths. Small orders only.
inline bool bipartite_perfect_match(const std::vector<std::vector<bool>>& ok) {
  const std::size_t n = ok.size();
  std::vector<int> match(n, -1);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<bool> seen(n, false);
    // Depth-first augmenting path from row i.
    auto augment = [&](auto&& self, std::size_t row) -> bool {
      for (std::size_t j = 0; j < n; ++j) {
        if (!ok[row][j] || seen[j]) continue;
        seen[j] = true;
        if (match[j] < 0 || self(self, static_cast<std::size_t>(match[j]))) {
          match[j] = static_cast<int>(row);
          return true;
        }
      }
      return false;
    };
    if (!augment(augment, i)) return false;
  }
  return true;
}

}  // namespace detail

/// True iff P and Q have the same order and some permutation matches
/// components and weights within tol (max-abs). Canonical order is compared
/// first; an assignment search covers the case where distinct components sit
/// within 2*tol of each other and the canonical sort may interleave them.
template <class T>
bool mixtures_equal(const Mixture<T>& P, const Mixture<T>& Q, const T& tol) {
  if (P.dim() != Q.dim()) throw invariant_error("dimension mismatch");
  if (P.order() != Q.order()) return false;
  const int m = P.order();

  bool aligned = true;
  for (int i = 0; i < m && aligned; ++i) {
    aligned = max_abs_diff(P.component(i), Q.component(i)) <= tol &&
              num<T>::abs(P.weight(i) - Q.weight(i)) <= tol;
  }
  if (aligned) return true;
  if (tol == num<T>::from_int(0)) return false;

  std::vector<std::vector<bool>> ok(static_cast<std::size_t>(m),
                                    std::vector<bool>(static_cast<std::size_t>(m)));
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      ok[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
          max_abs_diff(P.component(i), Q.component(j)) <= tol &&
          num<T>::abs(P.weight(i) - Q.weight(j)) <= tol;
  return detail::bipartite_perfect_match(ok);
}

template <class T>
bool mixtures_equal(const Mixture<T>& P, const Mixture<T>& Q) {
  return mixtures_equal(P, Q, num<T>::merge_tol());
}

/// m components and weights drawn from the flat Dirichlet distribution on the
/// simplex; deterministic per seed, duplicates redrawn.
inline Mixture<double> random_mixture(int d, int m, std::uint64_t seed) {
  if (d < 2 || m < 1) throw invariant_error("need d >= 2 and m >= 1");
  SplitMix64 rng = keyed_stream(seed, 0x6d69786dULL);
  std::vector<DiscreteMeasure<double>> comps;
  comps.reserve(static_cast<std::size_t>(m));
  while (static_cast<int>(comps.size()) < m) {
    DiscreteMeasure<double> cand(dirichlet_flat(rng, d));
    bool dup = false;
    for (const auto& c : comps)
      if (max_abs_diff(c, cand) <= num<double>::merge_tol()) dup = true;
    if (!dup) comps.push_back(std::move(cand));
  }
  std::vector<double> w = dirichlet_flat(rng, m);
  return canonicalize(std::move(w), std::move(comps));
}

/// Random mixture with entries on the k/denom grid, for exact-arithmetic
/// property runs. Weights and component entries are strictly positive.
inline Mixture<Rat> random_mixture_rational(int d, int m, std::uint64_t seed,
                                            long denom = 64) {
  if (d < 2 || m < 1) throw invariant_error("need d >= 2 and m >= 1");
  SplitMix64 rng = keyed_stream(seed, 0x712de3ULL);
  auto draw_simplex = [&](int k) {
    std::vector<Rat> v(static_cast<std::size_t>(k));
    long total = 0;
    std::vector<long> raw(static_cast<std::size_t>(k));
    for (auto& r : raw) {
      r = static_cast<long>(rng.below(static_cast<std::uint64_t>(denom))) + 1;
      total += r;
    }
    for (int i = 0; i < k; ++i) v[static_cast<std::size_t>(i)] = rat(raw[i], total);
    return v;
  };
  std::vector<DiscreteMeasure<Rat>> comps;
  while (static_cast<int>(comps.size()) < m) {
    DiscreteMeasure<Rat> cand(draw_simplex(d));
    bool dup = false;
    for (const auto& c : comps)
      if (c == cand) dup = true;
    if (!dup) comps.push_back(std::move(cand));
  }
  return canonicalize(draw_simplex(m), std::move(comps), Rat(0));
}

inline DiscreteMeasure<double> to_float(const DiscreteMeasure<Rat>& m) {
  std::vector<double> p(static_cast<std::size_t>(m.dim()));
  for (int a = 0; a < m.dim(); ++a) p[static_cast<std::size_t>(a)] = to_double(m[a]);
  return DiscreteMeasure<double>(std::move(p));
}

inline Mixture<double> to_float(const Mixture<Rat>& P) {
  std::vector<double> w;
  std::vector<DiscreteMeasure<double>> c;
  for (int i = 0; i < P.order(); ++i) {
    w.push_back(to_double(P.weight(i)));
    c.push_back(to_float(P.component(i)));
  }
  return canonicalize(std::move(w), std::move(c));
}

}  // namespace mixident
