#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mixident/errors.hpp"
#include "mixident/linalg.hpp"
#include "mixident/measures.hpp"
#include "mixident/tensor.hpp"

namespace mixident {

enum class LawVerdict { equal, different };

template <class T>
struct LawCheck {
  LawVerdict verdict;
  T max_abs;
  T l2_squared;
};

/// Compares the order-n group laws of P and Q; equal iff the entrywise
/// max-abs distance is <= tol.
template <class T>
LawCheck<T> check_equal_laws(const Mixture<T>& P, const Mixture<T>& Q, int n,
                             const T& tol = num<T>::merge_tol()) {
  if (P.dim() != Q.dim()) throw invariant_error("dimension mismatch");
  const Layout layout =
      dense_size(P.dim(), n) == std::numeric_limits<std::size_t>::max()
          ? Layout::compressed
          : Layout::dense;
  const auto dist = tensor_distance(group_law(P, n, layout), group_law(Q, n, layout));
  return {dist.max_abs <= tol ? LawVerdict::equal : LawVerdict::different,
          dist.max_abs, dist.l2_squared};
}

template <class T>
struct SharedTerm {
  DiscreteMeasure<T> component;
  T mass;  // weight subtracted from both sides
};

/// Result of cancelling the common components of two mixtures. When the
/// mixtures are identical up to tol both remainders are empty and
/// `identical` is set.
template <class T>
struct CommonReduction {
  std::optional<Mixture<T>> p_rest;
  std::optional<Mixture<T>> q_rest;
  std::vector<SharedTerm<T>> shared;
  bool identical = false;
};

/// Subtracts the smaller of the weights of each component the two mixtures
/// share (within tol) and renormalizes both remainders to probability
/// mixtures.
template <class T>
CommonReduction<T> reduce_common(const Mixture<T>& P, const Mixture<T>& Q,
                                 const T& tol = num<T>::merge_tol()) {
  if (P.dim() != Q.dim()) throw invariant_error("dimension mismatch");
  std::vector<T> pw(P.weights());
  std::vector<T> qw(Q.weights());
  std::vector<bool> q_used(qw.size(), false);

  CommonReduction<T> out;
  for (int i = 0; i < P.order(); ++i) {
    for (int j = 0; j < Q.order(); ++j) {
      if (q_used[static_cast<std::size_t>(j)]) continue;
      if (max_abs_diff(P.component(i), Q.component(j)) <= tol) {
        const T cut = std::min(pw[static_cast<std::size_t>(i)],
                               qw[static_cast<std::size_t>(j)]);
        pw[static_cast<std::size_t>(i)] -= cut;
        qw[static_cast<std::size_t>(j)] -= cut;
        q_used[static_cast<std::size_t>(j)] = true;
        out.shared.push_back({P.component(i), cut});
        break;
      }
    }
  }

  // Weights that cancelled to floating-point dust are genuine zeros here.
  const T dust = num<T>::exact ? num<T>::from_int(0) : num<T>::ratio(1, 1'000'000'000'000L);
  auto rebuild = [&](const std::vector<T>& w, const Mixture<T>& src)
      -> std::optional<Mixture<T>> {
    std::vector<T> keep_w;
    std::vector<DiscreteMeasure<T>> keep_c;
    for (int i = 0; i < src.order(); ++i) {
      if (w[static_cast<std::size_t>(i)] > dust) {
        keep_w.push_back(w[static_cast<std::size_t>(i)]);
        keep_c.push_back(src.component(i));
      }
    }
    if (keep_w.empty()) return std::nullopt;
    return canonicalize(std::move(keep_w), std::move(keep_c), tol);
  };
  out.p_rest = rebuild(pw, P);
  out.q_rest = rebuild(qw, Q);
  out.identical = !out.p_rest && !out.q_rest;
  return out;
}

enum class CertVerdict { certified_distinct, inconclusive };

struct Certificate {
  CertVerdict verdict;
  int rank = 0;
  int expected_rank = 0;
  bool densities_noncollinear = false;
};

namespace detail {

template <class T>
bool collinear(const std::vector<T>& a, const std::vector<T>& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = i + 1; j < a.size(); ++j)
      if (a[i] * b[j] != a[j] * b[i]) return false;
  return true;
}

template <>
inline bool collinear<double>(const std::vector<double>& a,
                              const std::vector<double>& b) {
  double worst = 0.0, scale = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = i + 1; j < a.size(); ++j) {
      worst = std::max(worst, std::fabs(a[i] * b[j] - a[j] * b[i]));
      scale = std::max({scale, std::fabs(a[i]), std::fabs(b[i])});
    }
  }
  return worst <= 1e-12 * std::max(1.0, scale * scale);
}

}  // namespace detail

/// Rank certificate that the order-n laws of P and Q must differ: against the
/// shared domination measure xi = sum of all components, the densities of the
/// l+m components must be pairwise non-collinear and their order-n powers
/// linearly independent. With full rank and n >= 2*max(order)-1 no nontrivial
/// signed combination of the powers can vanish, so the two laws cannot
/// coincide.
template <class T>
Certificate independence_certificate(const Mixture<T>& P, const Mixture<T>& Q,
                                     int n) {
  if (P.dim() != Q.dim()) throw invariant_error("dimension mismatch");
  if (n < 1) return Certificate{CertVerdict::inconclusive, 0,
                                P.order() + Q.order(), false};
  for (int i = 0; i < P.order(); ++i)
    for (int j = 0; j < Q.order(); ++j)
      if (max_abs_diff(P.component(i), Q.component(j)) <= num<T>::merge_tol())
        throw invariant_error("shared components: reduce first");

  std::vector<DiscreteMeasure<T>> all(P.components());
  all.insert(all.end(), Q.components().begin(), Q.components().end());
  const DensityContext<T> ctx = make_density_context(all);

  Certificate cert;
  cert.expected_rank = P.order() + Q.order();
  cert.densities_noncollinear = true;
  for (std::size_t i = 0; i < ctx.densities.size() && cert.densities_noncollinear; ++i)
    for (std::size_t j = i + 1; j < ctx.densities.size(); ++j)
      if (detail::collinear(ctx.densities[i], ctx.densities[j]))
        cert.densities_noncollinear = false;

  cert.rank = rank_of_powers(ctx.densities, n);
  const int needed = 2 * std::max(P.order(), Q.order()) - 1;
  cert.verdict = (cert.densities_noncollinear && cert.rank == cert.expected_rank &&
                  n >= needed)
                     ? CertVerdict::certified_distinct
                     : CertVerdict::inconclusive;
  return cert;
}

}  // namespace mixident
