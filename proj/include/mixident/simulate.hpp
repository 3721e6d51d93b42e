#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mixident/measures.hpp"
#include "mixident/sym_index.hpp"
#include "mixident/tensor.hpp"

namespace mixident {

/// N groups of n atom draws each, all indices in [0, d).
struct GroupDataset {
  int d = 0;
  int n = 0;
  std::vector<std::vector<int>> groups;
  std::uint64_t seed = 0;

  void validate() const;
};

/// For each group: draw a component by weight, then n iid atoms from it.
/// Group g uses the stream keyed by (seed, g), so the dataset is reproducible
/// independent of iteration order.
GroupDataset sample_groups(const Mixture<double>& P, int n, int N, std::uint64_t seed);

/// Dense order-n frequency tensor of the ordered tuples; unbiased for the
/// source's group law.
MomentTensor<double> empirical_moment(const GroupDataset& data);

/// Replaces each entry with its symmetry-orbit mean (the average over all
/// axis permutations).
MomentTensor<double> symmetrize(const MomentTensor<double>& t);

/// Law of the group sum over a two-atom domain: the weighted binomial mixture
/// pmf of length n+1, where each component's success rate is its atom-1 mass.
template <class T>
std::vector<T> bernoulli_reduce(const Mixture<T>& P, int n) {
  if (P.dim() != 2) throw invariant_error("binomial reduction needs d = 2");
  if (n < 0) throw invariant_error("negative group size");
  std::vector<T> pmf(static_cast<std::size_t>(n + 1), num<T>::from_int(0));
  for (int i = 0; i < P.order(); ++i) {
    const T eps = P.component(i)[1];
    const T one_minus = num<T>::from_int(1) - eps;
    // Binomial(n, eps) by forward recurrence on powers.
    std::vector<T> epow(static_cast<std::size_t>(n + 1), num<T>::from_int(1));
    std::vector<T> fpow(static_cast<std::size_t>(n + 1), num<T>::from_int(1));
    for (int k = 1; k <= n; ++k) {
      epow[static_cast<std::size_t>(k)] = epow[static_cast<std::size_t>(k - 1)] * eps;
      fpow[static_cast<std::size_t>(k)] = fpow[static_cast<std::size_t>(k - 1)] * one_minus;
    }
    for (int k = 0; k <= n; ++k) {
      pmf[static_cast<std::size_t>(k)] +=
          P.weight(i) * num<T>::from_int(static_cast<long>(binomial(n, k))) *
          epow[static_cast<std::size_t>(k)] * fpow[static_cast<std::size_t>(n - k)];
    }
  }
  return pmf;
}

/// Pushforward of an order-n law over d = 2 under the tuple-sum statistic:
/// dense entries grouped by their number of ones. Exactly bernoulli_reduce
/// when applied to a group law.
template <class T>
std::vector<T> sum_pushforward(const MomentTensor<T>& law) {
  if (law.dim() != 2) throw invariant_error("sum statistic needs d = 2");
  const int n = law.order();
  std::vector<T> pmf(static_cast<std::size_t>(n + 1), num<T>::from_int(0));
  if (law.layout() == Layout::compressed) {
    const auto& table = sym_index_table(2, n);
    for (int c = 0; c < table.n_classes(); ++c) {
      const int ones = table.counts(c)[1];
      pmf[static_cast<std::size_t>(ones)] +=
          num<T>::from_int(static_cast<long>(table.multiplicity(c))) *
          law.entries()[static_cast<std::size_t>(c)];
    }
    return pmf;
  }
  for (std::size_t f = 0; f < law.entries().size(); ++f) {
    int ones = 0;
    for (std::size_t bits = f; bits != 0; bits >>= 1) ones += static_cast<int>(bits & 1);
    pmf[static_cast<std::size_t>(ones)] += law.entries()[f];
  }
  return pmf;
}

/// CSV with header "x1,...,xn", one group per row.
void write_csv(const GroupDataset& data, const std::string& path);
GroupDataset load_csv(const std::string& path, int expected_d = 0);

/// JSON lines, one {"group": [...]} object per line.
void write_jsonl(const GroupDataset& data, const std::string& path);
GroupDataset load_jsonl(const std::string& path, int expected_d = 0);

}  // namespace mixident
