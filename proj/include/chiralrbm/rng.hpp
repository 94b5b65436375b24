#pragma once

#include <complex>
#include <cstdint>

namespace chiralrbm {

/// Counter-based random stream.
///
/// Output k of the stream is a pure function of (master_seed, stream_index, k),
/// so any logical sample can be regenerated without replaying the others and
/// results do not depend on how samples are spread over workers.
class RngStream {
 public:
  RngStream() = default;
  RngStream(std::uint64_t master_seed, std::uint64_t stream_index);

  std::uint64_t master_seed() const noexcept { return master_seed_; }
  std::uint64_t stream_index() const noexcept { return stream_index_; }
  std::uint64_t counter() const noexcept { return counter_; }

  /// Independent child stream, addressed by index. Does not advance *this.
  RngStream child(std::uint64_t index) const;

  std::uint64_t next_u64();
  /// Uniform on the open interval (0, 1).
  double uniform();
  /// Standard normal.
  double normal();
  /// Two independent standard normals packed as (re, im).
  std::complex<double> normal_pair();

 private:
  std::uint64_t master_seed_ = 0;
  std::uint64_t stream_index_ = 0;
  std::uint64_t key_ = 0;
  std::uint64_t counter_ = 0;
};

/// SplitMix64 finaliser.
std::uint64_t mix64(std::uint64_t x) noexcept;

}  // namespace chiralrbm
