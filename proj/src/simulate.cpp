#include "mixident/simulate.hpp"

#include <algorithm>
#include <fstream>
#include <limits>
#include <sstream>

#include <nlohmann/json.hpp>

#include "mixident/errors.hpp"
#include "mixident/rng.hpp"

namespace mixident {

void GroupDataset::validate() const {
  if (d < 2) throw io_error("dataset needs d >= 2");
  if (n < 1) throw io_error("dataset needs group size >= 1");
  for (const auto& g : groups) {
    if (static_cast<int>(g.size()) != n) throw io_error("ragged group row");
    for (int atom : g)
      if (atom < 0 || atom >= d) throw io_error("atom index out of range");
  }
}

GroupDataset sample_groups(const Mixture<double>& P, int n, int N, std::uint64_t seed) {
  if (n < 1 || N < 1) throw invariant_error("need n >= 1 and N >= 1");
  GroupDataset data;
  data.d = P.dim();
  data.n = n;
  data.seed = seed;
  data.groups.resize(static_cast<std::size_t>(N));

  // Weight and per-component cdfs, shared across groups.
  std::vector<double> wcdf(static_cast<std::size_t>(P.order()));
  double acc = 0.0;
  for (int i = 0; i < P.order(); ++i) {
    acc += P.weight(i);
    wcdf[static_cast<std::size_t>(i)] = acc;
  }
  std::vector<std::vector<double>> ccdf(static_cast<std::size_t>(P.order()));
  for (int i = 0; i < P.order(); ++i) {
    double a = 0.0;
    for (int k = 0; k < P.dim(); ++k) {
      a += P.component(i)[k];
      ccdf[static_cast<std::size_t>(i)].push_back(a);
    }
  }
  auto pick = [](const std::vector<double>& cdf, double u) {
    return static_cast<int>(std::lower_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
  };

  for (int g = 0; g < N; ++g) {
    SplitMix64 rng = keyed_stream(seed, static_cast<std::uint64_t>(g));
    const int comp = std::min(pick(wcdf, rng.uniform01()), P.order() - 1);
    auto& row = data.groups[static_cast<std::size_t>(g)];
    row.resize(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k)
      row[static_cast<std::size_t>(k)] = std::min(
          pick(ccdf[static_cast<std::size_t>(comp)], rng.uniform01()), P.dim() - 1);
  }
  return data;
}

MomentTensor<double> empirical_moment(const GroupDataset& data) {
  if (data.groups.empty()) throw invariant_error("empty dataset");
  data.validate();
  const std::size_t total = dense_size(data.d, data.n);
  if (total == std::numeric_limits<std::size_t>::max())
    throw invariant_error("dense tensor would exceed the entry cap");
  std::vector<std::int64_t> counts(total, 0);
  for (const auto& g : data.groups) ++counts[dense_rank(g, data.d)];
  std::vector<double> entries(total);
  const double N = static_cast<double>(data.groups.size());
  for (std::size_t f = 0; f < total; ++f)
    entries[f] = static_cast<double>(counts[f]) / N;
  return MomentTensor<double>::make_dense(data.n, data.d, std::move(entries));
}

MomentTensor<double> symmetrize(const MomentTensor<double>& t) {
  if (t.layout() == Layout::compressed) return t;
  const auto& table = sym_index_table(t.dim(), t.order());
  const auto& map = table.dense_to_class();
  std::vector<double> sums(static_cast<std::size_t>(table.n_classes()), 0.0);
  for (std::size_t f = 0; f < t.entries().size(); ++f)
    sums[static_cast<std::size_t>(map[f])] += t.entries()[f];
  std::vector<double> out(t.entries().size());
  for (std::size_t f = 0; f < out.size(); ++f)
    out[f] = sums[static_cast<std::size_t>(map[f])] /
             static_cast<double>(table.multiplicity(map[f]));
  return MomentTensor<double>::make_dense(t.order(), t.dim(), std::move(out));
}

namespace {

int infer_d(const GroupDataset& data, int expected_d) {
  if (expected_d > 0) return expected_d;
  int top = -1;
  for (const auto& g : data.groups)
    for (int atom : g) top = std::max(top, atom);
  return std::max(top + 1, 2);
}

}  // namespace

void write_csv(const GroupDataset& data, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw io_error("cannot open " + path);
  for (int k = 1; k <= data.n; ++k) out << (k > 1 ? "," : "") << 'x' << k;
  out << '\n';
  for (const auto& g : data.groups) {
    for (std::size_t k = 0; k < g.size(); ++k) out << (k ? "," : "") << g[k];
    out << '\n';
  }
}

GroupDataset load_csv(const std::string& path, int expected_d) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open " + path);
  GroupDataset data;
  std::string line;
  if (!std::getline(in, line)) throw io_error("empty csv");
  {
    std::istringstream hs(line);
    std::string col;
    int n = 0;
    while (std::getline(hs, col, ',')) {
      ++n;
      std::ostringstream want;
      want << 'x' << n;
      if (col != want.str()) throw io_error("bad csv header column: " + col);
    }
    data.n = n;
  }
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string cell;
    std::vector<int> row;
    while (std::getline(ls, cell, ',')) {
      try {
        row.push_back(std::stoi(cell));
      } catch (const std::exception&) {
        throw io_error("bad csv cell: " + cell);
      }
    }
    data.groups.push_back(std::move(row));
  }
  data.d = infer_d(data, expected_d);
  data.validate();
  return data;
}

void write_jsonl(const GroupDataset& data, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw io_error("cannot open " + path);
  for (const auto& g : data.groups) {
    nlohmann::json j;
    j["group"] = g;
    out << j.dump() << '\n';
  }
}

GroupDataset load_jsonl(const std::string& path, int expected_d) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open " + path);
  GroupDataset data;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw io_error(std::string("bad json line: ") + e.what());
    }
    if (!j.contains("group") || !j["group"].is_array())
      throw io_error("json line without a group array");
    std::vector<int> row;
    for (const auto& v : j["group"]) {
      if (!v.is_number_integer()) throw io_error("non-integer atom index");
      row.push_back(v.get<int>());
    }
    if (data.n == 0) data.n = static_cast<int>(row.size());
    data.groups.push_back(std::move(row));
  }
  if (data.groups.empty()) throw io_error("empty dataset");
  data.d = infer_d(data, expected_d);
  data.validate();
  return data;
}

}  // namespace mixident
