#pragma once

// Sort orders and attribute sets. Sort direction is not modelled: every
// technique built on top of these types works the same for asc and desc.

#include <compare>
#include <cstddef>
#include <initializer_list>
#include <set>
#include <string>
#include <vector>

namespace ordopt {

/// Qualified attribute name, e.g. "lineitem.l_suppkey". Case-sensitive.
using Attribute = std::string;

/// Unordered finite set of attributes.
class AttrSet {
 public:
  using const_iterator = std::set<Attribute>::const_iterator;

  AttrSet() = default;
  AttrSet(std::initializer_list<Attribute> attrs) : attrs_(attrs) {}
  template <typename It>
  AttrSet(It first, It last) : attrs_(first, last) {}

  bool contains(const Attribute& a) const { return attrs_.count(a) != 0; }
  bool insert(Attribute a) { return attrs_.insert(std::move(a)).second; }
  bool erase(const Attribute& a) { return attrs_.erase(a) != 0; }

  std::size_t size() const { return attrs_.size(); }
  bool empty() const { return attrs_.empty(); }
  const_iterator begin() const { return attrs_.begin(); }
  const_iterator end() const { return attrs_.end(); }

  bool is_subset_of(const AttrSet& other) const;

  friend AttrSet operator|(const AttrSet& a, const AttrSet& b);
  friend AttrSet operator&(const AttrSet& a, const AttrSet& b);
  friend AttrSet operator-(const AttrSet& a, const AttrSet& b);

  friend bool operator==(const AttrSet&, const AttrSet&) = default;
  friend auto operator<=>(const AttrSet&, const AttrSet&) = default;

 private:
  std::set<Attribute> attrs_;
};

/// Ordered, duplicate-free sequence of attributes. The default-constructed
/// value is the empty order.
class SortOrder {
 public:
  using const_iterator = std::vector<Attribute>::const_iterator;

  SortOrder() = default;
  /// Throws DuplicateAttribute if an attribute repeats.
  SortOrder(std::initializer_list<Attribute> attrs);
  explicit SortOrder(std::vector<Attribute> attrs);

  std::size_t size() const { return attrs_.size(); }
  bool empty() const { return attrs_.empty(); }
  const Attribute& operator[](std::size_t i) const { return attrs_[i]; }
  const_iterator begin() const { return attrs_.begin(); }
  const_iterator end() const { return attrs_.end(); }
  const std::vector<Attribute>& attributes() const { return attrs_; }

  AttrSet attrs() const { return AttrSet(attrs_.begin(), attrs_.end()); }
  bool contains(const Attribute& a) const;

  /// First `n` attributes (clamped to size()).
  SortOrder prefix(std::size_t n) const;

  friend bool operator==(const SortOrder&, const SortOrder&) = default;
  friend auto operator<=>(const SortOrder&, const SortOrder&) = default;

 private:
  std::vector<Attribute> attrs_;
};

/// o1 <= o2: o1 equals the first |o1| attributes of o2.
bool is_prefix(const SortOrder& o1, const SortOrder& o2);
/// o1 < o2.
bool is_strict_prefix(const SortOrder& o1, const SortOrder& o2);

/// Longest common prefix.
SortOrder lcp(const SortOrder& o1, const SortOrder& o2);

/// o1 followed by o2. Throws DuplicateAttribute when the attribute sets meet.
SortOrder concat(const SortOrder& o1, const SortOrder& o2);

/// The suffix o' with concat(o2, o') == o1. Throws NotAPrefix unless o2 <= o1.
SortOrder subtract(const SortOrder& o1, const SortOrder& o2);

/// Longest prefix of `o` whose attributes all belong to `s`.
SortOrder lcp_with_set(const SortOrder& o, const AttrSet& s);

/// Deterministic permutation of `s`: ascending lexicographic names.
SortOrder canonical_permutation(const AttrSet& s);

/// "(a,b,c)", or "()" for the empty order.
std::string to_string(const SortOrder& o);
std::string to_string(const AttrSet& s);

}  // namespace ordopt
