#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace nirbench {

/// Counter-based splittable random stream.
///
/// A stream is identified by (root_seed, substream label path). The same
/// pair always yields the identical draw sequence, and distinct labels give
/// statistically independent sequences, so per-subject substreams can be
/// consumed in any order (or on any thread) without changing the data.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t root_seed);

  /// Child stream with `label` appended to the label path. Pure: does not
  /// advance this stream, independent of call order.
  [[nodiscard]] RandomStream derive(std::string_view label) const;

  std::uint64_t next_u64();

  /// Uniform in [0, 1).
  double uniform();
  double uniform(double lo, double hi);
  /// Uniform integer in [0, n). n must be > 0.
  std::uint64_t uniform_int(std::uint64_t n);
  /// sd == 0 returns exactly `mean`.
  double gaussian(double mean, double sd);
  /// Log-uniform over [lo, hi], lo > 0.
  double log_uniform(double lo, double hi);
  double triangular(double lo, double mode, double hi);

  std::uint64_t root_seed() const { return root_seed_; }
  const std::string& label() const { return label_; }

 private:
  RandomStream(std::uint64_t root_seed, std::string label, std::uint64_t key);

  std::uint64_t root_seed_;
  std::string label_;
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace nirbench
