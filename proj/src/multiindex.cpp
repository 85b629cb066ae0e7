#include "moebius/multiindex.hpp"

#include <algorithm>
#include <map>
#include <mutex>

#include "moebius/errors.hpp"

namespace moebius {

namespace {

void enumerate(int dim, int budget, std::vector<int>& cur,
               std::vector<std::vector<int>>& out) {
  if (static_cast<int>(cur.size()) == dim) {
    out.push_back(cur);
    return;
  }
  for (int d = 0; d <= budget; ++d) {
    cur.push_back(d);
    enumerate(dim, budget - d, cur, out);
    cur.pop_back();
  }
}

}  // namespace

MultiIndexTable::MultiIndexTable(int dim, int order) : dim_(dim), order_(order) {
  if (dim < 1 || dim > 16 || order < 0 || order > 16)
    throw ConfigError("multi-index table: dim/order out of range");

  std::vector<int> cur;
  enumerate(dim_, order_, cur, indices_);
  std::stable_sort(indices_.begin(), indices_.end(),
                   [](const std::vector<int>& a, const std::vector<int>& b) {
                     int da = 0, db = 0;
                     for (int v : a) da += v;
                     for (int v : b) db += v;
                     if (da != db) return da < db;
                     return a < b;
                   });

  degrees_.resize(indices_.size());
  factorials_.resize(indices_.size());
  degree_begin_.assign(order_ + 2, static_cast<int>(indices_.size()));
  for (int i = 0; i < size(); ++i) {
    int d = 0;
    double f = 1.0;
    for (int v : indices_[i]) {
      d += v;
      for (int k = 2; k <= v; ++k) f *= k;
    }
    degrees_[i] = d;
    factorials_[i] = f;
    if (degree_begin_[d] > i) degree_begin_[d] = i;
  }
  for (int d = order_; d >= 0; --d)
    degree_begin_[d] = std::min(degree_begin_[d], degree_begin_[d + 1]);

  raise_.assign(static_cast<size_t>(size()) * dim_, -1);
  for (int i = 0; i < size(); ++i) {
    for (int v = 0; v < dim_; ++v) {
      if (degrees_[i] == order_) continue;
      std::vector<int> up = indices_[i];
      ++up[v];
      raise_[i * dim_ + v] = find(up);
    }
  }

  for (int a = 0; a < size(); ++a) {
    for (int b = 0; b < size(); ++b) {
      if (degrees_[a] + degrees_[b] > order_) continue;
      std::vector<int> sum(dim_);
      for (int v = 0; v < dim_; ++v) sum[v] = indices_[a][v] + indices_[b][v];
      pairs_.push_back({a, b, find(sum)});
    }
  }
  std::stable_sort(pairs_.begin(), pairs_.end(), [this](const Pair& x, const Pair& y) {
    return degrees_[x.a] + degrees_[x.b] < degrees_[y.a] + degrees_[y.b];
  });
  pairs_end_.assign(order_ + 1, static_cast<int>(pairs_.size()));
  for (int d = 0; d <= order_; ++d) {
    auto it = std::find_if(pairs_.begin(), pairs_.end(), [this, d](const Pair& p) {
      return degrees_[p.a] + degrees_[p.b] > d;
    });
    pairs_end_[d] = static_cast<int>(it - pairs_.begin());
  }
}

int MultiIndexTable::find(const std::vector<int>& alpha) const {
  int d = 0;
  for (int v : alpha) d += v;
  if (d > order_) return -1;
  for (int i = degree_begin_[d]; i < degree_begin_[d + 1]; ++i)
    if (indices_[i] == alpha) return i;
  return -1;
}

std::shared_ptr<const MultiIndexTable> MultiIndexTable::get(int dim, int order) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::shared_ptr<const MultiIndexTable>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_pair(dim, order);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  auto tab = std::make_shared<const MultiIndexTable>(dim, order);
  cache[key] = tab;
  return tab;
}

}  // namespace moebius
