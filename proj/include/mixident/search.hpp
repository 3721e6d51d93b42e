#pragma once

#include <cstdint>
#include <vector>

#include "mixident/measures.hpp"
#include "mixident/tensor.hpp"

namespace mixident {

/// Outcome of the confusability search: the best admissible alternative
/// mixture found, its squared-l2 law mismatch at the probed order, and its
/// permutation-aware distance from the target.
struct SearchResult {
  Mixture<double> best_alternative;
  double objective = 0.0;
  double separation = 0.0;
  int restarts_used = 0;
  std::uint64_t seed = 0;
};

/// Unvalidated optimization iterate: weights plus one row per component.
/// Kept raw so gradients and finite differences can leave the simplex.
struct RawCandidate {
  std::vector<double> weights;
  std::vector<std::vector<double>> comps;
};

struct ObjectiveGradient {
  std::vector<double> d_weights;
  std::vector<std::vector<double>> d_comps;
};

/// Squared l2 distance between the candidate's order-n law and a fixed target
/// law (dense).
double law_objective(const MomentTensor<double>& target_law, const RawCandidate& x,
                     int n);

/// Analytic gradient of law_objective in all weight and component
/// coordinates.
ObjectiveGradient law_objective_gradient(const MomentTensor<double>& target_law,
                                         const RawCandidate& x, int n);

/// Euclidean projection onto the probability simplex.
void project_to_simplex(std::vector<double>& x);

/// Permutation-aware distance between mixtures: optimal assignment over
/// per-pair costs ||mu_i - nu_j||_inf + |w_i - v_j|. When the orders differ,
/// every component of the larger-order side must be covered, i.e. the
/// smaller side's components may serve several partners and the weight cost
/// compares each component's weight with the total weight it absorbs.
double separation_distance(const Mixture<double>& a, const Mixture<double>& b);

/// Multi-start projected gradient descent over mixtures of order at most
/// order(P), minimizing the order-n law mismatch outside the exclusion ball
/// separation < delta around P. Deterministic per seed; restarts run
/// concurrently on independent streams.
SearchResult confusability_search(const Mixture<double>& P, int n, int restarts,
                                  double delta, std::uint64_t seed);

}  // namespace mixident
