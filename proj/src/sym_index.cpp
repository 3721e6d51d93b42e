#include "mixident/sym_index.hpp"

#include <algorithm>
#include <limits>
#include <memory>
#include <mutex>
#include <sstream>

#include "mixident/errors.hpp"

namespace mixident {

std::size_t dense_size(int dim, int order, std::size_t cap) {
  std::size_t s = 1;
  for (int k = 0; k < order; ++k) {
    if (s > cap / static_cast<std::size_t>(dim)) return std::numeric_limits<std::size_t>::max();
    s *= static_cast<std::size_t>(dim);
  }
  return s;
}

std::uint64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t r = 1;
  for (int i = 1; i <= k; ++i) {
    const std::uint64_t num = static_cast<std::uint64_t>(n - k + i);
    if (r > std::numeric_limits<std::uint64_t>::max() / num)
      throw invariant_error("binomial overflow");
    r = r * num / static_cast<std::uint64_t>(i);
  }
  return r;
}

std::size_t n_multisets(int dim, int order) {
  return static_cast<std::size_t>(binomial(dim + order - 1, order));
}

namespace {

std::uint64_t multinomial(int order, const std::vector<int>& counts) {
  std::uint64_t m = 1;
  int left = order;
  for (int c : counts) {
    const std::uint64_t factor = binomial(left, c);
    if (factor != 0 && m > std::numeric_limits<std::uint64_t>::max() / factor)
      throw invariant_error("multinomial overflow");
    m *= factor;
    left -= c;
  }
  return m;
}

void enumerate_counts(int dim, int order, int atom, std::vector<int>& cur,
                      std::vector<std::vector<int>>& out) {
  if (atom == dim - 1) {
    cur[static_cast<std::size_t>(atom)] = order;
    out.push_back(cur);
    return;
  }
  // Lex order of the sorted tuple == more mass on low atoms first.
  for (int c = order; c >= 0; --c) {
    cur[static_cast<std::size_t>(atom)] = c;
    enumerate_counts(dim, order - c, atom + 1, cur, out);
  }
}

}  // namespace

SymIndexTable::SymIndexTable(int dim, int order) : dim_(dim), order_(order) {
  if (dim < 1 || order < 0) throw invariant_error("bad tensor shape");
  std::vector<int> cur(static_cast<std::size_t>(dim), 0);
  enumerate_counts(dim, order, 0, cur, counts_);
  mult_.reserve(counts_.size());
  for (std::size_t i = 0; i < counts_.size(); ++i) {
    mult_.push_back(multinomial(order, counts_[i]));
    lookup_[counts_[i]] = static_cast<int>(i);
  }

  const std::size_t total = dense_size(dim_, order_);
  if (total != std::numeric_limits<std::size_t>::max()) {
    dense_to_class_.resize(total);
    std::vector<int> digits(static_cast<std::size_t>(order_), 0);
    std::vector<int> counts(static_cast<std::size_t>(dim_), 0);
    for (std::size_t flat = 0; flat < total; ++flat) {
      std::fill(counts.begin(), counts.end(), 0);
      for (int k = 0; k < order_; ++k)
        ++counts[static_cast<std::size_t>(digits[static_cast<std::size_t>(k)])];
      dense_to_class_[flat] = lookup_.at(counts);
      for (int k = order_ - 1; k >= 0; --k) {
        if (++digits[static_cast<std::size_t>(k)] < dim_) break;
        digits[static_cast<std::size_t>(k)] = 0;
      }
    }
    has_dense_map_ = true;
  }
}

int SymIndexTable::class_of_counts(const std::vector<int>& c) const {
  auto it = lookup_.find(c);
  if (it == lookup_.end()) throw invariant_error("unknown multiset class");
  return it->second;
}

std::vector<int> SymIndexTable::sorted_tuple(int cls) const {
  std::vector<int> t;
  t.reserve(static_cast<std::size_t>(order_));
  const auto& c = counts(cls);
  for (int a = 0; a < dim_; ++a)
    for (int k = 0; k < c[static_cast<std::size_t>(a)]; ++k) t.push_back(a);
  return t;
}

std::string SymIndexTable::key(int cls) const {
  const auto t = sorted_tuple(cls);
  std::ostringstream os;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (i) os << '.';
    os << t[i];
  }
  return os.str();
}

int SymIndexTable::class_of_key(const std::string& key) const {
  std::vector<int> counts(static_cast<std::size_t>(dim_), 0);
  if (!key.empty()) {
    std::istringstream is(key);
    std::string part;
    while (std::getline(is, part, '.')) {
      int atom;
      try {
        atom = std::stoi(part);
      } catch (const std::exception&) {
        return -1;
      }
      if (atom < 0 || atom >= dim_) return -1;
      ++counts[static_cast<std::size_t>(atom)];
    }
  }
  auto it = lookup_.find(counts);
  return it == lookup_.end() ? -1 : it->second;
}

const std::vector<int>& SymIndexTable::dense_to_class() const {
  if (!has_dense_map_)
    throw invariant_error("dense index map exceeds the entry cap");
  return dense_to_class_;
}

const SymIndexTable& sym_index_table(int dim, int order) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::unique_ptr<SymIndexTable>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[{dim, order}];
  if (!slot) slot = std::make_unique<SymIndexTable>(dim, order);
  return *slot;
}

std::size_t dense_rank(const std::vector<int>& tuple, int dim) {
  std::size_t flat = 0;
  for (int digit : tuple) flat = flat * static_cast<std::size_t>(dim) + static_cast<std::size_t>(digit);
  return flat;
}

std::vector<int> dense_unrank(std::size_t flat, int dim, int order) {
  std::vector<int> digits(static_cast<std::size_t>(order));
  for (int k = order - 1; k >= 0; --k) {
    digits[static_cast<std::size_t>(k)] = static_cast<int>(flat % static_cast<std::size_t>(dim));
    flat /= static_cast<std::size_t>(dim);
  }
  return digits;
}

}  // namespace mixident
