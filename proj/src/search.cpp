#include "mixident/search.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numeric>
#include <thread>

#include "mixident/assignment.hpp"
#include "mixident/errors.hpp"
#include "mixident/rng.hpp"

namespace mixident {

namespace {

// Dense order-n power of v accumulated into acc with weight w.
void add_weighted_power(std::vector<double>& acc, const std::vector<double>& v,
                        double w, int n) {
  const int d = static_cast<int>(v.size());
  std::vector<double> cur{w};
  for (int k = 0; k < n; ++k) {
    std::vector<double> next(cur.size() * static_cast<std::size_t>(d));
    for (std::size_t i = 0; i < cur.size(); ++i)
      for (int a = 0; a < d; ++a)
        next[i * static_cast<std::size_t>(d) + static_cast<std::size_t>(a)] =
            cur[i] * v[static_cast<std::size_t>(a)];
    cur = std::move(next);
  }
  for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += cur[i];
}

std::vector<double> candidate_law(const RawCandidate& x, int n, std::size_t size) {
  std::vector<double> law(size, 0.0);
  for (std::size_t j = 0; j < x.weights.size(); ++j)
    add_weighted_power(law, x.comps[j], x.weights[j], n);
  return law;
}

// Folds v into the first axis k times: out[j] = sum_a v[a] * in[a*stride + j].
std::vector<double> contract_leading(std::vector<double> t, const std::vector<double>& v,
                                     int times, int d) {
  for (int k = 0; k < times; ++k) {
    const std::size_t stride = t.size() / static_cast<std::size_t>(d);
    std::vector<double> next(stride, 0.0);
    for (int a = 0; a < d; ++a) {
      const double va = v[static_cast<std::size_t>(a)];
      const std::size_t base = static_cast<std::size_t>(a) * stride;
      for (std::size_t j = 0; j < stride; ++j) next[j] += va * t[base + j];
    }
    t = std::move(next);
  }
  return t;
}

}  // namespace

double law_objective(const MomentTensor<double>& target_law, const RawCandidate& x,
                     int n) {
  const std::vector<double>& target = target_law.entries();
  const std::vector<double> law = candidate_law(x, n, target.size());
  double f = 0.0;
  for (std::size_t i = 0; i < law.size(); ++i) {
    const double diff = law[i] - target[i];
    f += diff * diff;
  }
  return f;
}

ObjectiveGradient law_objective_gradient(const MomentTensor<double>& target_law,
                                         const RawCandidate& x, int n) {
  const int d = target_law.dim();
  const std::vector<double>& target = target_law.entries();
  std::vector<double> residual = candidate_law(x, n, target.size());
  for (std::size_t i = 0; i < residual.size(); ++i) residual[i] -= target[i];

  ObjectiveGradient g;
  g.d_weights.assign(x.weights.size(), 0.0);
  g.d_comps.assign(x.comps.size(), std::vector<double>(static_cast<std::size_t>(d), 0.0));
  for (std::size_t j = 0; j < x.weights.size(); ++j) {
    // c[a] = <residual, comp^(x)(n-1) (x) e_a>; symmetric residual makes the
    // axis choice irrelevant.
    const std::vector<double> c = contract_leading(residual, x.comps[j], n - 1, d);
    double full = 0.0;
    for (int a = 0; a < d; ++a) {
      full += c[static_cast<std::size_t>(a)] * x.comps[j][static_cast<std::size_t>(a)];
      g.d_comps[j][static_cast<std::size_t>(a)] =
          2.0 * static_cast<double>(n) * x.weights[j] * c[static_cast<std::size_t>(a)];
    }
    g.d_weights[j] = 2.0 * full;
  }
  return g;
}

void project_to_simplex(std::vector<double>& x) {
  // Euclidean projection: threshold at the largest tau keeping entries
  // positive (Held/Duchi).
  std::vector<double> u(x);
  std::sort(u.begin(), u.end(), std::greater<double>());
  double css = 0.0, tau = 0.0;
  int rho = 0;
  for (std::size_t k = 0; k < u.size(); ++k) {
    css += u[k];
    const double t = (css - 1.0) / static_cast<double>(k + 1);
    if (u[k] - t > 0.0) {
      rho = static_cast<int>(k + 1);
      tau = t;
    }
  }
  (void)rho;
  for (double& xi : x) xi = std::max(xi - tau, 0.0);
  // Kill the last float crumbs so the result is a valid measure.
  double s = std::accumulate(x.begin(), x.end(), 0.0);
  if (s > 0.0)
    for (double& xi : x) xi /= s;
}

namespace {

double component_linf(const DiscreteMeasure<double>& a, const DiscreteMeasure<double>& b) {
  double worst = 0.0;
  for (int k = 0; k < a.dim(); ++k) worst = std::max(worst, std::fabs(a[k] - b[k]));
  return worst;
}

// Same-order branch: bijective optimal assignment.
double separation_equal_order(const Mixture<double>& a, const Mixture<double>& b) {
  const int m = a.order();
  std::vector<std::vector<double>> cost(static_cast<std::size_t>(m),
                                        std::vector<double>(static_cast<std::size_t>(m)));
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      cost[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
          component_linf(a.component(i), b.component(j)) +
          std::fabs(a.weight(i) - b.weight(j));
  return assignment_cost(cost, min_cost_assignment(cost));
}

// big has more components than small: every big component is matched to some
// small component (exhaustively over maps when feasible, greedily beyond) and
// each small component's weight is compared with the mass it absorbs.
double separation_unequal_order(const Mixture<double>& big, const Mixture<double>& small) {
  const int m = big.order();
  const int r = small.order();
  double n_maps = std::pow(static_cast<double>(r), m);
  if (n_maps <= 262144.0) {
    double best = std::numeric_limits<double>::infinity();
    std::vector<int> map(static_cast<std::size_t>(m), 0);
    for (;;) {
      double comp_cost = 0.0;
      std::vector<double> absorbed(static_cast<std::size_t>(r), 0.0);
      for (int i = 0; i < m; ++i) {
        comp_cost += component_linf(big.component(i),
                                    small.component(map[static_cast<std::size_t>(i)]));
        absorbed[static_cast<std::size_t>(map[static_cast<std::size_t>(i)])] +=
            big.weight(i);
      }
      for (int j = 0; j < r; ++j)
        comp_cost += std::fabs(small.weight(j) - absorbed[static_cast<std::size_t>(j)]);
      best = std::min(best, comp_cost);
      int k = m - 1;
      while (k >= 0 && ++map[static_cast<std::size_t>(k)] == r) map[static_cast<std::size_t>(k--)] = 0;
      if (k < 0) break;
    }
    return best;
  }
  // Greedy upper bound for shapes past the enumeration cap.
  double comp_cost = 0.0;
  std::vector<double> absorbed(static_cast<std::size_t>(r), 0.0);
  for (int i = 0; i < m; ++i) {
    int bestj = 0;
    double bestd = std::numeric_limits<double>::infinity();
    for (int j = 0; j < r; ++j) {
      const double dd = component_linf(big.component(i), small.component(j));
      if (dd < bestd) {
        bestd = dd;
        bestj = j;
      }
    }
    comp_cost += bestd;
    absorbed[static_cast<std::size_t>(bestj)] += big.weight(i);
  }
  for (int j = 0; j < r; ++j)
    comp_cost += std::fabs(small.weight(j) - absorbed[static_cast<std::size_t>(j)]);
  return comp_cost;
}

}  // namespace

double separation_distance(const Mixture<double>& a, const Mixture<double>& b) {
  if (a.dim() != b.dim()) throw invariant_error("dimension mismatch");
  if (a.order() == b.order()) return separation_equal_order(a, b);
  return a.order() > b.order() ? separation_unequal_order(a, b)
                               : separation_unequal_order(b, a);
}

namespace {

struct PenaltyGradient {
  double sep = 0.0;
  std::vector<double> d_weights;
  std::vector<std::vector<double>> d_comps;
};

// Raw-candidate separation (bijective when the candidate has the target's
// order) together with its subgradient in the candidate coordinates, taken at
// the optimal assignment.
PenaltyGradient raw_separation(const RawCandidate& x, const Mixture<double>& target) {
  const int m = target.order();
  const int r = static_cast<int>(x.weights.size());
  PenaltyGradient out;
  out.d_weights.assign(x.weights.size(), 0.0);
  out.d_comps.assign(x.comps.size(),
                     std::vector<double>(x.comps.front().size(), 0.0));

  auto pair_linf = [&](int i, int j, int* arg) {
    double worst = -1.0;
    int at = 0;
    for (std::size_t a = 0; a < x.comps[static_cast<std::size_t>(j)].size(); ++a) {
      const double dev = std::fabs(target.component(i)[static_cast<int>(a)] -
                                   x.comps[static_cast<std::size_t>(j)][a]);
      if (dev > worst) {
        worst = dev;
        at = static_cast<int>(a);
      }
    }
    if (arg) *arg = at;
    return worst;
  };

  if (r == m) {
    std::vector<std::vector<double>> cost(static_cast<std::size_t>(m),
                                          std::vector<double>(static_cast<std::size_t>(m)));
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j)
        cost[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
            pair_linf(i, j, nullptr) + std::fabs(target.weight(i) - x.weights[static_cast<std::size_t>(j)]);
    const std::vector<int> match = min_cost_assignment(cost);
    out.sep = assignment_cost(cost, match);
    for (int i = 0; i < m; ++i) {
      const int j = match[static_cast<std::size_t>(i)];
      int at = 0;
      pair_linf(i, j, &at);
      const double cdiff = x.comps[static_cast<std::size_t>(j)][static_cast<std::size_t>(at)] -
                           target.component(i)[at];
      out.d_comps[static_cast<std::size_t>(j)][static_cast<std::size_t>(at)] +=
          cdiff > 0 ? 1.0 : (cdiff < 0 ? -1.0 : 0.0);
      const double wdiff = x.weights[static_cast<std::size_t>(j)] - target.weight(i);
      out.d_weights[static_cast<std::size_t>(j)] += wdiff > 0 ? 1.0 : (wdiff < 0 ? -1.0 : 0.0);
    }
    return out;
  }

  // r < m: every target component picks a candidate; weights compare with the
  // absorbed mass. Enumerate maps (r^m is small in every search setting).
  std::vector<int> map(static_cast<std::size_t>(m), 0);
  std::vector<int> best_map;
  double best = std::numeric_limits<double>::infinity();
  for (;;) {
    double c = 0.0;
    std::vector<double> absorbed(static_cast<std::size_t>(r), 0.0);
    for (int i = 0; i < m; ++i) {
      c += pair_linf(i, map[static_cast<std::size_t>(i)], nullptr);
      absorbed[static_cast<std::size_t>(map[static_cast<std::size_t>(i)])] += target.weight(i);
    }
    for (int j = 0; j < r; ++j)
      c += std::fabs(x.weights[static_cast<std::size_t>(j)] - absorbed[static_cast<std::size_t>(j)]);
    if (c < best) {
      best = c;
      best_map = map;
    }
    int k = m - 1;
    while (k >= 0 && ++map[static_cast<std::size_t>(k)] == r) map[static_cast<std::size_t>(k--)] = 0;
    if (k < 0) break;
  }
  out.sep = best;
  std::vector<double> absorbed(static_cast<std::size_t>(r), 0.0);
  for (int i = 0; i < m; ++i) {
    const int j = best_map[static_cast<std::size_t>(i)];
    int at = 0;
    pair_linf(i, j, &at);
    const double cdiff =
        x.comps[static_cast<std::size_t>(j)][static_cast<std::size_t>(at)] - target.component(i)[at];
    out.d_comps[static_cast<std::size_t>(j)][static_cast<std::size_t>(at)] +=
        cdiff > 0 ? 1.0 : (cdiff < 0 ? -1.0 : 0.0);
    absorbed[static_cast<std::size_t>(j)] += target.weight(i);
  }
  for (int j = 0; j < r; ++j) {
    const double wdiff = x.weights[static_cast<std::size_t>(j)] - absorbed[static_cast<std::size_t>(j)];
    out.d_weights[static_cast<std::size_t>(j)] += wdiff > 0 ? 1.0 : (wdiff < 0 ? -1.0 : 0.0);
  }
  return out;
}

Mixture<double> canonical_of(const RawCandidate& x) {
  std::vector<DiscreteMeasure<double>> comps;
  comps.reserve(x.comps.size());
  for (const auto& c : x.comps) comps.emplace_back(c);
  return canonicalize(std::vector<double>(x.weights), std::move(comps));
}

struct RestartOutcome {
  bool found = false;
  RawCandidate best;
  double objective = std::numeric_limits<double>::infinity();
};

constexpr double kPenaltyWeight = 10.0;
constexpr int kMaxIterations = 500;

double penalized(const MomentTensor<double>& target_law, const RawCandidate& x, int n,
                 const Mixture<double>& P, double delta) {
  const PenaltyGradient pg = raw_separation(x, P);
  const double h = std::max(0.0, delta - pg.sep);
  return law_objective(target_law, x, n) + kPenaltyWeight * h * h;
}

RestartOutcome run_restart(const MomentTensor<double>& target_law,
                           const Mixture<double>& P, int n, double delta,
                           std::uint64_t seed, int restart_index) {
  SplitMix64 rng = keyed_stream(seed, static_cast<std::uint64_t>(restart_index) + 1);
  const int m = P.order();
  const int d = P.dim();
  // Most restarts probe full order; the rest sweep the lower orders.
  int r = m;
  if (m > 1 && restart_index % 2 == 1) r = 1 + (restart_index / 2) % m;

  RawCandidate x;
  x.weights = dirichlet_flat(rng, r);
  for (int j = 0; j < r; ++j) x.comps.push_back(dirichlet_flat(rng, d));

  RestartOutcome best;
  auto consider = [&](const RawCandidate& cand) {
    const double f = law_objective(target_law, cand, n);
    if (f >= best.objective) return;
    const Mixture<double> canon = canonical_of(cand);
    if (separation_distance(canon, P) >= delta) {
      best.found = true;
      best.best = cand;
      best.objective = f;
    }
  };
  consider(x);

  double g_cur = penalized(target_law, x, n, P, delta);
  double step = 0.25;
  for (int iter = 0; iter < kMaxIterations; ++iter) {
    const ObjectiveGradient fg = law_objective_gradient(target_law, x, n);
    const PenaltyGradient pg = raw_separation(x, P);
    const double h = std::max(0.0, delta - pg.sep);

    RawCandidate grad;
    grad.weights = fg.d_weights;
    grad.comps = fg.d_comps;
    if (h > 0.0) {
      for (std::size_t j = 0; j < grad.weights.size(); ++j) {
        grad.weights[j] += -2.0 * kPenaltyWeight * h * pg.d_weights[j];
        for (std::size_t a = 0; a < grad.comps[j].size(); ++a)
          grad.comps[j][a] += -2.0 * kPenaltyWeight * h * pg.d_comps[j][a];
      }
    }

    double gnorm2 = 0.0;
    for (double v : grad.weights) gnorm2 += v * v;
    for (const auto& row : grad.comps)
      for (double v : row) gnorm2 += v * v;
    if (gnorm2 < 1e-28) break;

    bool moved = false;
    while (step >= 1e-13) {
      RawCandidate trial = x;
      for (std::size_t j = 0; j < trial.weights.size(); ++j) {
        trial.weights[j] -= step * grad.weights[j];
        for (std::size_t a = 0; a < trial.comps[j].size(); ++a)
          trial.comps[j][a] -= step * grad.comps[j][a];
        project_to_simplex(trial.comps[j]);
      }
      project_to_simplex(trial.weights);
      const double g_trial = penalized(target_law, trial, n, P, delta);
      if (g_trial < g_cur - 1e-18) {
        x = std::move(trial);
        g_cur = g_trial;
        moved = true;
        break;
      }
      step *= 0.5;
    }
    if (!moved) break;
    consider(x);
    step = std::min(step * 2.0, 0.25);
  }
  return best;
}

}  // namespace

SearchResult confusability_search(const Mixture<double>& P, int n, int restarts,
                                  double delta, std::uint64_t seed) {
  if (restarts < 1) throw invariant_error("restarts must be >= 1");
  if (delta <= 0.0) throw invariant_error("delta must be positive");
  if (n < 1) throw invariant_error("group size must be >= 1");

  const MomentTensor<double> target_law = group_law(P, n);
  std::vector<RestartOutcome> outcomes(static_cast<std::size_t>(restarts));

  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const unsigned workers = std::min<unsigned>(hw, static_cast<unsigned>(restarts));
  std::atomic<int> next{0};
  auto work = [&]() {
    for (;;) {
      const int r = next.fetch_add(1);
      if (r >= restarts) return;
      outcomes[static_cast<std::size_t>(r)] =
          run_restart(target_law, P, n, delta, seed, r);
    }
  };
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < workers; ++t) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();

  int best_idx = -1;
  for (int r = 0; r < restarts; ++r) {
    if (!outcomes[static_cast<std::size_t>(r)].found) continue;
    if (best_idx < 0 || outcomes[static_cast<std::size_t>(r)].objective <
                            outcomes[static_cast<std::size_t>(best_idx)].objective)
      best_idx = r;
  }

  SearchResult out;
  out.restarts_used = restarts;
  out.seed = seed;
  if (best_idx < 0) {
    // Nothing admissible (pathological delta); report the failure through the
    // objective value.
    out.best_alternative = P;
    out.objective = std::numeric_limits<double>::infinity();
    out.separation = 0.0;
    return out;
  }
  const RestartOutcome& best = outcomes[static_cast<std::size_t>(best_idx)];
  out.best_alternative = canonical_of(best.best);
  out.objective = best.objective;
  out.separation = separation_distance(out.best_alternative, P);
  return out;
}

}  // namespace mixident
