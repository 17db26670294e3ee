#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

namespace ordopt {

/// Record seen by the sort engine: integer sort keys plus a simulated width.
struct Tuple {
  std::vector<std::int64_t> keys;
  std::int64_t payload_bytes = 0;

  friend bool operator==(const Tuple&, const Tuple&) = default;
};

/// Pull-based stream. `next()` returns nullopt once exhausted.
class TupleSource {
 public:
  virtual ~TupleSource() = default;
  virtual std::optional<Tuple> next() = 0;
};

class VectorSource : public TupleSource {
 public:
  explicit VectorSource(std::vector<Tuple> tuples) : tuples_(std::move(tuples)) {}
  std::optional<Tuple> next() override {
    if (pos_ >= tuples_.size()) return std::nullopt;
    return std::move(tuples_[pos_++]);
  }

 private:
  std::vector<Tuple> tuples_;
  std::size_t pos_ = 0;
};

inline std::vector<Tuple> drain(TupleSource& src) {
  std::vector<Tuple> out;
  while (auto t = src.next()) out.push_back(std::move(*t));
  return out;
}

}  // namespace ordopt
