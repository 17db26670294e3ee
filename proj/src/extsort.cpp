#include "ordopt/extsort.hpp"

#include <algorithm>
#include <deque>
#include <random>
#include <set>

#include "ordopt/error.hpp"

namespace ordopt {

void SortSpec::validate() const {
  cfg.validate();
  if (target_order_len < 1) throw ConfigError("target_order_len must be >= 1");
  if (known_prefix_len >= target_order_len) throw ConfigError("known_prefix_len must be < target_order_len");
}

nlohmann::json SortMetrics::to_json() const {
  return {{"run_blocks_written", run_blocks_written},
          {"run_blocks_read", run_blocks_read},
          {"comparisons", comparisons},
          {"positions_inspected", positions_inspected},
          {"tuples_in_before_first_out", tuples_in_before_first_out},
          {"runs_generated", runs_generated},
          {"merge_passes", merge_passes},
          {"segments", segments}};
}

namespace {

using Run = std::deque<Tuple>;

class Sorter final : public SortStream {
 public:
  Sorter(std::unique_ptr<TupleSource> input, const SortSpec& spec, std::size_t from)
      : input_(std::move(input)), spec_(spec), from_(from) {
    spec_.validate();
  }

  std::optional<Tuple> next() override {
    while (true) {
      if (auto t = emit()) {
        if (!started_) {
          started_ = true;
          metrics_.tuples_in_before_first_out = absorbed_;
        }
        return t;
      }
      if (!load_segment()) return std::nullopt;
    }
  }

  const SortMetrics& metrics() const override { return metrics_; }

 private:
  struct Entry {
    std::int64_t run;
    Tuple tuple;
  };

  // a < b on key positions [from_, target_order_len)
  bool less(const Tuple& a, const Tuple& b) {
    ++metrics_.comparisons;
    for (std::size_t i = from_; i < spec_.target_order_len; ++i) {
      ++metrics_.positions_inspected;
      if (a.keys[i] != b.keys[i]) return a.keys[i] < b.keys[i];
    }
    return false;
  }

  // min-heap ordering for std heap algorithms
  bool after(const Entry& a, const Entry& b) {
    if (a.run != b.run) return a.run > b.run;
    return less(b.tuple, a.tuple);
  }

  std::optional<Tuple> pull() {
    if (peek_) {
      auto t = std::move(peek_);
      peek_.reset();
      return t;
    }
    auto t = input_->next();
    if (t && t->keys.size() < spec_.target_order_len) throw ConfigError("tuple has fewer keys than the sort order");
    return t;
  }

  bool same_segment(const Tuple& t) {
    if (from_ == 0) return true;
    ++metrics_.comparisons;
    for (std::size_t i = 0; i < from_; ++i) {
      ++metrics_.positions_inspected;
      if (t.keys[i] != prefix_[i]) return false;
    }
    return true;
  }

  // Next tuple of the current segment, or nullopt at its end.
  std::optional<Tuple> pull_in_segment() {
    auto t = pull();
    if (!t) return t;
    if (!same_segment(*t)) {
      peek_ = std::move(t);
      return std::nullopt;
    }
    ++absorbed_;
    return t;
  }

  void spill(std::int64_t bytes) {
    bytes_written_ += bytes;
    metrics_.run_blocks_written = ceil_blocks(bytes_written_);
  }
  void unspill(std::int64_t bytes) {
    bytes_read_ += bytes;
    metrics_.run_blocks_read = ceil_blocks(bytes_read_);
  }
  std::int64_t ceil_blocks(std::int64_t bytes) const {
    return (bytes + spec_.cfg.block_bytes - 1) / spec_.cfg.block_bytes;
  }

  static std::int64_t run_bytes(const Run& r) {
    std::int64_t b = 0;
    for (const auto& t : r) b += t.payload_bytes;
    return b;
  }

  bool load_segment() {
    auto first = pull();
    if (!first) return false;
    if (from_ > 0) {
      prefix_.assign(first->keys.begin(), first->keys.begin() + static_cast<std::ptrdiff_t>(from_));
      if (!seen_.insert(prefix_).second) throw UnsortedPrefix("input is not grouped on its known prefix");
    }
    ++absorbed_;
    ++metrics_.segments;
    const std::int64_t width = std::max<std::int64_t>(1, first->payload_bytes);
    const auto capacity = static_cast<std::size_t>(
        std::max<std::int64_t>(1, spec_.cfg.memory_blocks * spec_.cfg.block_bytes / width));

    auto cmp = [this](const Entry& a, const Entry& b) { return after(a, b); };
    heap_.clear();
    heap_.push_back({0, std::move(*first)});
    std::optional<Tuple> t;
    while (heap_.size() < capacity && (t = pull_in_segment())) {
      heap_.push_back({0, std::move(*t)});
      std::push_heap(heap_.begin(), heap_.end(), cmp);
    }
    if (heap_.size() < capacity || !(t = pull_in_segment())) {
      ++metrics_.runs_generated;
      in_memory_ = true;
      return true;
    }

    // replacement selection
    std::vector<Run> runs;
    auto emit_top = [&]() {
      std::pop_heap(heap_.begin(), heap_.end(), cmp);
      Entry e = std::move(heap_.back());
      heap_.pop_back();
      if (static_cast<std::size_t>(e.run) >= runs.size()) runs.emplace_back();
      spill(e.tuple.payload_bytes);
      runs[static_cast<std::size_t>(e.run)].push_back(std::move(e.tuple));
      return e.run;
    };
    while (t) {
      const std::int64_t run = emit_top();
      const Tuple& last = runs[static_cast<std::size_t>(run)].back();
      const std::int64_t tag = less(*t, last) ? run + 1 : run;
      heap_.push_back({tag, std::move(*t)});
      std::push_heap(heap_.begin(), heap_.end(), cmp);
      t = pull_in_segment();
    }
    while (!heap_.empty()) emit_top();
    metrics_.runs_generated += static_cast<std::int64_t>(runs.size());

    const auto fan_in = static_cast<std::size_t>(spec_.cfg.memory_blocks - 1);
    if (runs.size() > 1 && fan_in < 2) throw ConfigError("merging runs needs at least 3 memory blocks");
    while (fan_in >= 2 && runs.size() > fan_in) {
      std::sort(runs.begin(), runs.end(), [](const Run& a, const Run& b) { return a.size() > b.size(); });
      const std::size_t k = std::min(fan_in, runs.size() - fan_in + 1);
      std::vector<Run> group(std::make_move_iterator(runs.end() - static_cast<std::ptrdiff_t>(k)),
                             std::make_move_iterator(runs.end()));
      runs.resize(runs.size() - k);
      start_merge(std::move(group));
      Run merged;
      while (auto x = merge_next()) {
        spill(x->payload_bytes);
        merged.push_back(std::move(*x));
      }
      runs.push_back(std::move(merged));
      ++metrics_.merge_passes;
    }
    start_merge(std::move(runs));
    in_memory_ = false;
    return true;
  }

  auto cursor_cmp() {
    return [this](std::size_t a, std::size_t b) { return less(sources_[b].front(), sources_[a].front()); };
  }

  void start_merge(std::vector<Run> runs) {
    sources_ = std::move(runs);
    for (const auto& r : sources_) unspill(run_bytes(r));
    merge_heap_.clear();
    for (std::size_t i = 0; i < sources_.size(); ++i) {
      if (!sources_[i].empty()) push_cursor(i);
    }
  }

  void push_cursor(std::size_t i) {
    merge_heap_.push_back(i);
    std::push_heap(merge_heap_.begin(), merge_heap_.end(), cursor_cmp());
  }

  std::optional<Tuple> merge_next() {
    if (merge_heap_.empty()) return std::nullopt;
    std::pop_heap(merge_heap_.begin(), merge_heap_.end(), cursor_cmp());
    const std::size_t i = merge_heap_.back();
    merge_heap_.pop_back();
    Tuple out = std::move(sources_[i].front());
    sources_[i].pop_front();
    if (!sources_[i].empty()) push_cursor(i);
    return out;
  }

  std::optional<Tuple> emit() {
    if (!in_memory_) return merge_next();
    if (heap_.empty()) return std::nullopt;
    auto cmp = [this](const Entry& a, const Entry& b) { return after(a, b); };
    std::pop_heap(heap_.begin(), heap_.end(), cmp);
    Tuple out = std::move(heap_.back().tuple);
    heap_.pop_back();
    return out;
  }

  std::unique_ptr<TupleSource> input_;
  SortSpec spec_;
  std::size_t from_;
  SortMetrics metrics_;
  std::optional<Tuple> peek_;
  std::vector<std::int64_t> prefix_;
  std::set<std::vector<std::int64_t>> seen_;
  std::int64_t absorbed_ = 0;
  std::int64_t bytes_written_ = 0;
  std::int64_t bytes_read_ = 0;
  bool started_ = false;

  bool in_memory_ = true;
  std::vector<Entry> heap_;
  std::vector<Run> sources_;
  std::vector<std::size_t> merge_heap_;
};

class SegmentedGenerator final : public TupleSource {
 public:
  SegmentedGenerator(std::int64_t rows, std::int64_t segment_rows, std::size_t keys, std::int64_t payload,
                     std::uint64_t seed)
      : rows_(rows), segment_rows_(segment_rows), keys_(keys), payload_(payload), rng_(seed) {}

  std::optional<Tuple> next() override {
    if (i_ >= rows_) return std::nullopt;
    Tuple t;
    t.payload_bytes = payload_;
    t.keys.resize(keys_);
    t.keys[0] = i_ / segment_rows_;
    for (std::size_t k = 1; k < keys_; ++k) t.keys[k] = static_cast<std::int64_t>(rng_() >> 33);
    ++i_;
    return t;
  }

 private:
  std::int64_t rows_;
  std::int64_t segment_rows_;
  std::size_t keys_;
  std::int64_t payload_;
  std::mt19937_64 rng_;
  std::int64_t i_ = 0;
};

}  // namespace

std::unique_ptr<SortStream> sort_srs(std::unique_ptr<TupleSource> input, const SortSpec& spec) {
  return std::make_unique<Sorter>(std::move(input), spec, 0);
}

std::unique_ptr<SortStream> sort_mrs(std::unique_ptr<TupleSource> input, const SortSpec& spec) {
  return std::make_unique<Sorter>(std::move(input), spec, spec.known_prefix_len);
}

std::unique_ptr<TupleSource> gen_segmented_input(std::int64_t rows, std::int64_t segment_rows,
                                                 std::size_t key_positions, std::int64_t payload_bytes,
                                                 std::uint64_t seed) {
  if (rows < 0 || segment_rows < 1 || key_positions < 1 || payload_bytes < 1) {
    throw ConfigError("rows >= 0, segment_rows >= 1, key_positions >= 1 and payload_bytes >= 1 are required");
  }
  return std::make_unique<SegmentedGenerator>(rows, segment_rows, key_positions, payload_bytes, seed);
}

}  // namespace ordopt
