#include "arfrac/point_bag.hpp"

#include <algorithm>
#include <numeric>

namespace arfrac {

void PointBag::finalize() {
  std::vector<std::size_t> order(points.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const int c = cmp(points[a].size.raw, points[b].size.raw);
    if (c != 0) return c < 0;
    return points[a].key < points[b].key;
  });
  std::vector<std::size_t> where(points.size());
  for (std::size_t k = 0; k < order.size(); ++k) where[order[k]] = k;
  std::vector<BagEntry> sorted;
  sorted.reserve(points.size());
  for (std::size_t k : order) {
    sorted.push_back(std::move(points[k]));
    if (sorted.back().parent) sorted.back().parent = where[*sorted.back().parent];
  }
  points = std::move(sorted);
  index_.clear();
  index_.reserve(points.size());
  for (std::size_t k = 0; k < points.size(); ++k) index_.emplace(points[k].key, k);
}

std::optional<std::size_t> PointBag::find(const std::string& key) const {
  const auto it = index_.find(key);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

}  // namespace arfrac
