#include "ordopt/labeled_tree.hpp"

#include <stdexcept>

namespace ordopt {

std::vector<std::vector<int>> LabeledTree::children() const {
  std::vector<std::vector<int>> out(size());
  for (std::size_t i = 0; i < size(); ++i) {
    if (parent[i] >= 0) out[static_cast<std::size_t>(parent[i])].push_back(static_cast<int>(i));
  }
  return out;
}

void LabeledTree::validate() const {
  if (parent.size() != sets.size()) throw std::invalid_argument("parent and sets differ in length");
  for (std::size_t i = 0; i < size(); ++i) {
    if (parent[i] >= static_cast<int>(size()) || parent[i] == static_cast<int>(i)) {
      throw std::invalid_argument("bad parent index");
    }
    std::size_t steps = 0;
    for (int v = parent[i]; v >= 0; v = parent[static_cast<std::size_t>(v)]) {
      if (++steps > size()) throw std::invalid_argument("parent links form a cycle");
    }
  }
  for (const auto& c : children()) {
    if (c.size() > 2) throw std::invalid_argument("node with more than two children");
  }
}

LabeledTree LabeledTree::path(std::vector<AttrSet> sets) {
  LabeledTree t;
  t.parent.resize(sets.size());
  for (std::size_t i = 0; i < sets.size(); ++i) t.parent[i] = static_cast<int>(i) - 1;
  t.sets = std::move(sets);
  return t;
}

int benefit(const LabeledTree& t, const OrderAssignment& a) {
  int total = 0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t.parent[i] >= 0) total += static_cast<int>(lcp(a[i], a[static_cast<std::size_t>(t.parent[i])]).size());
  }
  return total;
}

}  // namespace ordopt
