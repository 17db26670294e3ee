#include "ordopt/order.hpp"

#include <algorithm>
#include <iterator>

#include "ordopt/error.hpp"

namespace ordopt {

namespace {

void check_unique(const std::vector<Attribute>& attrs) {
  std::set<Attribute> seen;
  for (const auto& a : attrs) {
    if (!seen.insert(a).second) {
      throw DuplicateAttribute("attribute '" + a + "' appears twice in a sort order");
    }
  }
}

}  // namespace

bool AttrSet::is_subset_of(const AttrSet& other) const {
  return std::includes(other.attrs_.begin(), other.attrs_.end(), attrs_.begin(), attrs_.end());
}

AttrSet operator|(const AttrSet& a, const AttrSet& b) {
  AttrSet out = a;
  out.attrs_.insert(b.attrs_.begin(), b.attrs_.end());
  return out;
}

AttrSet operator&(const AttrSet& a, const AttrSet& b) {
  AttrSet out;
  std::set_intersection(a.attrs_.begin(), a.attrs_.end(), b.attrs_.begin(), b.attrs_.end(),
                        std::inserter(out.attrs_, out.attrs_.end()));
  return out;
}

AttrSet operator-(const AttrSet& a, const AttrSet& b) {
  AttrSet out;
  std::set_difference(a.attrs_.begin(), a.attrs_.end(), b.attrs_.begin(), b.attrs_.end(),
                      std::inserter(out.attrs_, out.attrs_.end()));
  return out;
}

SortOrder::SortOrder(std::initializer_list<Attribute> attrs) : attrs_(attrs) { check_unique(attrs_); }

SortOrder::SortOrder(std::vector<Attribute> attrs) : attrs_(std::move(attrs)) { check_unique(attrs_); }

bool SortOrder::contains(const Attribute& a) const {
  return std::find(attrs_.begin(), attrs_.end(), a) != attrs_.end();
}

SortOrder SortOrder::prefix(std::size_t n) const {
  SortOrder out;
  out.attrs_.assign(attrs_.begin(), attrs_.begin() + static_cast<std::ptrdiff_t>(std::min(n, attrs_.size())));
  return out;
}

bool is_prefix(const SortOrder& o1, const SortOrder& o2) {
  return o1.size() <= o2.size() && std::equal(o1.begin(), o1.end(), o2.begin());
}

bool is_strict_prefix(const SortOrder& o1, const SortOrder& o2) {
  return o1.size() < o2.size() && is_prefix(o1, o2);
}

SortOrder lcp(const SortOrder& o1, const SortOrder& o2) {
  auto [it, _] = std::mismatch(o1.begin(), o1.end(), o2.begin(), o2.end());
  return o1.prefix(static_cast<std::size_t>(it - o1.begin()));
}

SortOrder concat(const SortOrder& o1, const SortOrder& o2) {
  std::vector<Attribute> attrs = o1.attributes();
  attrs.insert(attrs.end(), o2.begin(), o2.end());
  return SortOrder(std::move(attrs));
}

SortOrder subtract(const SortOrder& o1, const SortOrder& o2) {
  if (!is_prefix(o2, o1)) {
    throw NotAPrefix(to_string(o2) + " is not a prefix of " + to_string(o1));
  }
  return SortOrder(std::vector<Attribute>(o1.begin() + static_cast<std::ptrdiff_t>(o2.size()), o1.end()));
}

SortOrder lcp_with_set(const SortOrder& o, const AttrSet& s) {
  auto it = std::find_if(o.begin(), o.end(), [&](const Attribute& a) { return !s.contains(a); });
  return o.prefix(static_cast<std::size_t>(it - o.begin()));
}

SortOrder canonical_permutation(const AttrSet& s) {
  // std::set iterates in ascending lexicographic order already.
  return SortOrder(std::vector<Attribute>(s.begin(), s.end()));
}

std::string to_string(const SortOrder& o) {
  std::string out = "(";
  for (std::size_t i = 0; i < o.size(); ++i) {
    if (i) out += ',';
    out += o[i];
  }
  return out + ")";
}

std::string to_string(const AttrSet& s) {
  std::string out = "{";
  bool first = true;
  for (const auto& a : s) {
    if (!first) out += ',';
    out += a;
    first = false;
  }
  return out + "}";
}

}  // namespace ordopt
