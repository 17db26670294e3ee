#pragma once

// External sort with simulated run storage. SRS is standard replacement
// selection; MRS sorts each segment of tuples that agree on a known key
// prefix independently.

#include <cstdint>
#include <memory>

#include <json.hpp>

#include "ordopt/catalog.hpp"
#include "ordopt/tuple.hpp"

namespace ordopt {

struct SortSpec {
  std::size_t target_order_len = 1;
  /// Leading key positions the input is already grouped on.
  std::size_t known_prefix_len = 0;
  BlockConfig cfg;

  /// Throws ConfigError unless known_prefix_len < target_order_len.
  void validate() const;
};

struct SortMetrics {
  std::int64_t run_blocks_written = 0;
  std::int64_t run_blocks_read = 0;
  std::int64_t comparisons = 0;
  std::int64_t positions_inspected = 0;
  std::int64_t tuples_in_before_first_out = 0;
  std::int64_t runs_generated = 0;
  std::int64_t merge_passes = 0;
  std::int64_t segments = 0;

  nlohmann::json to_json() const;
};

/// Sorted output stream. Metrics are final once the stream is exhausted.
class SortStream : public TupleSource {
 public:
  virtual const SortMetrics& metrics() const = 0;
};

std::unique_ptr<SortStream> sort_srs(std::unique_ptr<TupleSource> input, const SortSpec& spec);

/// Throws UnsortedPrefix (while pulling) when a finished prefix value reappears.
std::unique_ptr<SortStream> sort_mrs(std::unique_ptr<TupleSource> input, const SortSpec& spec);

/// Deterministic stream: key 0 is the segment number, the other keys are
/// uniform in [0, 2^31).
std::unique_ptr<TupleSource> gen_segmented_input(std::int64_t rows, std::int64_t segment_rows,
                                                 std::size_t key_positions, std::int64_t payload_bytes,
                                                 std::uint64_t seed);

}  // namespace ordopt
