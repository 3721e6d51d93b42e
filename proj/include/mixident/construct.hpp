#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "mixident/linalg.hpp"
#include "mixident/measures.hpp"
#include "mixident/rational.hpp"
#include "mixident/tensor.hpp"

namespace mixident {

/// Inputs of the tight-counterexample construction: an interpolation family
/// of 2m distinct mixing levels between two distinct base measures. All
/// arithmetic is exact; the float view is a final conversion.
struct CounterexampleSpec {
  int m = 1;
  DiscreteMeasure<Rat> base_p;  // the component reached at epsilon = 1
  DiscreteMeasure<Rat> base_q;  // the component reached at epsilon = 0
  std::vector<Rat> epsilons;    // 2m pairwise-distinct values in [0,1], ascending

  int dim() const { return base_p.dim(); }
};

/// Two distinct m-component mixtures whose group laws agree exactly at order
/// 2m-2 and differ at order 2m-1, together with the algebraic witnesses.
struct CounterexamplePair {
  CounterexampleSpec spec;
  Mixture<Rat> P;
  Mixture<Rat> Q;
  std::vector<Rat> alpha;  // null combination, aligned with spec.epsilons
  Rat r;                   // normalizer: total mass of either sign class
  std::vector<Rat> betas;  // |alpha| / r, aligned with spec.epsilons
  Rat residual_equal;      // max-abs distance of the order-(2m-2) laws (0)
  Rat gap;                 // max-abs distance of the order-(2m-1) laws (> 0)
  MomentTensor<Rat> shared_law;  // the common order-(2m-2) law, compressed

  int equal_order() const { return 2 * spec.m - 2; }
  int gap_order() const { return 2 * spec.m - 1; }
};

/// 2m equally spaced levels i/(2m-1). Only distinctness is required of the
/// family; equal spacing makes the null combination the alternating binomial
/// weights, which keeps certificates human-checkable.
std::vector<Rat> default_epsilons(int m);

/// The component at a given level: eps*base_p + (1-eps)*base_q.
DiscreteMeasure<Rat> component_for_epsilon(const Rat& eps,
                                           const DiscreteMeasure<Rat>& base_p,
                                           const DiscreteMeasure<Rat>& base_q);

/// Monomial coordinates of the degree-`degree` powers of the family: row j
/// holds eps^(degree-j) * (1-eps)^j per column, from the pure eps^degree
/// monomial down to (1-eps)^degree. (degree+1) x len(epsilons).
RatMatrix veronese_matrix(const std::vector<Rat>& epsilons, int degree);

/// The unique-up-to-scale nonzero combination annihilating the degree-(2m-2)
/// powers of 2m distinct levels, normalized so the first entry is -1. Every
/// entry is nonzero; computed by exact elimination.
std::vector<Rat> nullspace_coefficients(const std::vector<Rat>& epsilons);

/// Splits the null combination by sign into the two mixtures and normalizes
/// both sides to probability weight. Verifies the m/m sign split, the shared
/// order-(2m-2) law and the positive order-(2m-1) gap.
CounterexamplePair split_and_normalize(const CounterexampleSpec& spec,
                                       const std::vector<Rat>& alpha);

/// Default spec: Dirac bases at atoms 1 and 0 and equally spaced levels.
CounterexampleSpec default_counterexample_spec(int m, int d);

/// Seeded spec: random distinct levels; optionally random distinct strictly
/// positive base measures instead of the Dirac pair.
CounterexampleSpec random_counterexample_spec(int m, int d, std::uint64_t seed,
                                              bool random_bases);

/// End-to-end constructor. Without a seed the default spec is used.
CounterexamplePair build_counterexample(int m, int d,
                                        std::optional<std::uint64_t> seed = {},
                                        bool random_bases = false);

}  // namespace mixident
