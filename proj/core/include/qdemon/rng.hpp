#pragma once

// Counter-based random streams. Every Monte Carlo shot owns a stream keyed by
// the master seed and addressed by (stream, shot index), so results do not
// depend on how shots are scheduled across threads.

#include <array>
#include <cstdint>

namespace qdemon {

/// Philox4x32-10 block function (Salmon et al., SC'11).
struct Philox4x32 {
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static Counter block(Counter ctr, Key key);
};

class StreamRng {
 public:
  StreamRng(std::uint64_t master_seed, std::uint64_t stream, std::uint64_t index);

  std::uint32_t next_u32();
  std::uint64_t next_u64();
  /// Uniform on the open interval (0, 1), 53-bit resolution.
  double uniform();
  /// Standard normal (Box-Muller).
  double normal();

 private:
  void refill();

  Philox4x32::Key key_{};
  Philox4x32::Counter ctr_{};
  Philox4x32::Counter buf_{};
  int used_ = 4;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace qdemon
