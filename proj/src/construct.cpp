#include "mixident/construct.hpp"

#include <algorithm>
#include <set>

#include "mixident/errors.hpp"
#include "mixident/rng.hpp"

namespace mixident {

std::vector<Rat> default_epsilons(int m) {
  if (m < 1) throw invariant_error("m must be >= 1");
  std::vector<Rat> eps;
  eps.reserve(static_cast<std::size_t>(2 * m));
  for (int i = 0; i < 2 * m; ++i) eps.push_back(rat(i, 2 * m - 1));
  return eps;
}

DiscreteMeasure<Rat> component_for_epsilon(const Rat& eps,
                                           const DiscreteMeasure<Rat>& base_p,
                                           const DiscreteMeasure<Rat>& base_q) {
  return blend(eps, base_p, base_q);
}

RatMatrix veronese_matrix(const std::vector<Rat>& epsilons, int degree) {
  if (degree < 0) throw invariant_error("negative degree");
  RatMatrix m(static_cast<std::size_t>(degree + 1),
              std::vector<Rat>(epsilons.size()));
  for (std::size_t i = 0; i < epsilons.size(); ++i) {
    const Rat e = epsilons[i];
    const Rat f = Rat(1) - e;
    // Row j carries eps^(degree-j) * (1-eps)^j.
    Rat epow(1);
    std::vector<Rat> epows(static_cast<std::size_t>(degree + 1));
    for (int k = 0; k <= degree; ++k) {
      epows[static_cast<std::size_t>(k)] = epow;
      epow *= e;
    }
    Rat fpow(1);
    for (int j = 0; j <= degree; ++j) {
      m[static_cast<std::size_t>(j)][i] =
          epows[static_cast<std::size_t>(degree - j)] * fpow;
      fpow *= f;
    }
  }
  return m;
}

std::vector<Rat> nullspace_coefficients(const std::vector<Rat>& epsilons) {
  const std::size_t n = epsilons.size();
  if (n < 2 || n % 2 != 0)
    throw invariant_error("need an even number (2m >= 2) of epsilons");
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (epsilons[i] == epsilons[j]) throw invariant_error("repeated epsilons");

  const int m = static_cast<int>(n) / 2;
  const auto basis = nullspace(veronese_matrix(epsilons, 2 * m - 2));
  if (basis.size() != 1)
    throw invariant_error("internal: null space dimension is not 1");
  std::vector<Rat> alpha = basis.front();
  for (const Rat& a : alpha)
    if (a == 0) throw invariant_error("internal: vanishing null coefficient");
  const Rat scale = -alpha.front();
  for (Rat& a : alpha) a /= scale;
  return alpha;
}

CounterexamplePair split_and_normalize(const CounterexampleSpec& spec,
                                       const std::vector<Rat>& alpha) {
  const int m = spec.m;
  if (static_cast<int>(alpha.size()) != 2 * m ||
      alpha.size() != spec.epsilons.size())
    throw invariant_error("alpha/epsilon length mismatch");
  if (spec.base_p == spec.base_q)
    throw invariant_error("base measures must be distinct");

  // The witness must actually annihilate the degree-(2m-2) powers.
  const RatMatrix v = veronese_matrix(spec.epsilons, 2 * m - 2);
  for (const auto& row : v) {
    Rat s(0);
    for (std::size_t i = 0; i < alpha.size(); ++i) s += row[i] * alpha[i];
    if (s != 0) throw invariant_error("alpha is not a null combination");
  }

  std::vector<std::size_t> neg, pos;
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    if (alpha[i] < 0)
      neg.push_back(i);
    else
      pos.push_back(i);
  }
  if (static_cast<int>(neg.size()) != m || static_cast<int>(pos.size()) != m)
    throw invariant_error("sign-split violation");

  Rat r(0), r_pos(0);
  for (std::size_t i : neg) r += -alpha[i];
  for (std::size_t j : pos) r_pos += alpha[j];
  if (r != r_pos || r <= 0)
    throw invariant_error("internal: sign classes have unequal mass");

  std::vector<Rat> betas(alpha.size());
  for (std::size_t i = 0; i < alpha.size(); ++i) betas[i] = abs(alpha[i]) / r;

  auto side = [&](const std::vector<std::size_t>& idx) {
    std::vector<Rat> w;
    std::vector<DiscreteMeasure<Rat>> comps;
    for (std::size_t i : idx) {
      w.push_back(betas[i]);
      comps.push_back(
          component_for_epsilon(spec.epsilons[i], spec.base_p, spec.base_q));
    }
    return canonicalize(std::move(w), std::move(comps), Rat(0));
  };
  Mixture<Rat> P = side(neg);
  Mixture<Rat> Q = side(pos);
  if (P.order() != m || Q.order() != m)
    throw invariant_error("internal: side collapsed below order m");
  if (mixtures_equal(P, Q, Rat(0)))
    throw invariant_error("internal: sides are equal mixtures");

  const int eq_order = 2 * m - 2;
  const MomentTensor<Rat> law_p = group_law(P, eq_order, Layout::compressed);
  const MomentTensor<Rat> law_q = group_law(Q, eq_order, Layout::compressed);
  const Rat residual = tensor_distance(law_p, law_q).max_abs;
  const Rat gap = tensor_distance(group_law(P, eq_order + 1, Layout::compressed),
                                  group_law(Q, eq_order + 1, Layout::compressed))
                      .max_abs;
  if (residual != 0) throw invariant_error("internal: equal-order laws differ");
  if (gap <= 0) throw invariant_error("internal: no gap at order 2m-1");

  return CounterexamplePair{spec,  std::move(P), std::move(Q), alpha,
                            r,     std::move(betas), residual, gap,
                            law_p};
}

CounterexampleSpec default_counterexample_spec(int m, int d) {
  if (m < 1 || d < 2) throw invariant_error("need m >= 1 and d >= 2");
  return CounterexampleSpec{m, DiscreteMeasure<Rat>::dirac(d, 1),
                            DiscreteMeasure<Rat>::dirac(d, 0),
                            default_epsilons(m)};
}

CounterexampleSpec random_counterexample_spec(int m, int d, std::uint64_t seed,
                                              bool random_bases) {
  if (m < 1 || d < 2) throw invariant_error("need m >= 1 and d >= 2");
  SplitMix64 rng = keyed_stream(seed, 0xce57aULL);

  // Distinct levels from a fine grid, sorted ascending.
  const std::uint64_t grid = std::max<std::uint64_t>(16 * static_cast<std::uint64_t>(m), 64);
  std::set<std::uint64_t> picks;
  while (picks.size() < static_cast<std::size_t>(2 * m))
    picks.insert(rng.below(grid + 1));
  std::vector<Rat> eps;
  for (std::uint64_t p : picks)
    eps.push_back(rat(static_cast<long>(p), static_cast<long>(grid)));

  if (!random_bases) {
    return CounterexampleSpec{m, DiscreteMeasure<Rat>::dirac(d, 1),
                              DiscreteMeasure<Rat>::dirac(d, 0), std::move(eps)};
  }

  auto draw = [&]() {
    std::vector<Rat> p(static_cast<std::size_t>(d));
    long total = 0;
    std::vector<long> raw(static_cast<std::size_t>(d));
    for (auto& x : raw) {
      x = static_cast<long>(rng.below(32)) + 1;
      total += x;
    }
    for (int a = 0; a < d; ++a) p[static_cast<std::size_t>(a)] = rat(raw[a], total);
    return DiscreteMeasure<Rat>(std::move(p));
  };
  DiscreteMeasure<Rat> bp = draw();
  DiscreteMeasure<Rat> bq = draw();
  while (bq == bp) bq = draw();
  return CounterexampleSpec{m, std::move(bp), std::move(bq), std::move(eps)};
}

CounterexamplePair build_counterexample(int m, int d,
                                        std::optional<std::uint64_t> seed,
                                        bool random_bases) {
  const CounterexampleSpec spec =
      seed ? random_counterexample_spec(m, d, *seed, random_bases)
           : default_counterexample_spec(m, d);
  return split_and_normalize(spec, nullspace_coefficients(spec.epsilons));
}

}  // namespace mixident
