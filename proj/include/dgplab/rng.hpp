#pragma once

#include <cstdint>
#include <random>

namespace dgplab {

/// Identifies an independent random stream. Runs are reproducible given the
/// experiment seed, and any two distinct keys give unrelated streams, so
/// replicates and layers can be drawn in any order or in parallel.
struct StreamKey {
  std::uint64_t seed = 0;
  std::uint64_t module = 0;
  std::uint64_t replicate = 0;
  std::uint64_t layer = 0;
};

/// Module ids used in stream keys.
namespace stream_module {
inline constexpr std::uint64_t data = 1;
inline constexpr std::uint64_t prior = 2;
inline constexpr std::uint64_t chain = 3;
inline constexpr std::uint64_t test = 4;
inline constexpr std::uint64_t truth = 5;
}  // namespace stream_module

class RngStream {
 public:
  explicit RngStream(const StreamKey& key) : key_(key), engine_(mix(key)) {}
  explicit RngStream(std::uint64_t seed) : RngStream(StreamKey{seed, 0, 0, 0}) {}

  double normal() { return normal_(engine_); }
  double uniform() { return uniform_(engine_); }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  std::mt19937_64& engine() { return engine_; }
  const StreamKey& key() const { return key_; }

  /// Child stream derived from this stream's key; does not consume draws.
  RngStream child(std::uint64_t layer) const {
    StreamKey k = key_;
    k.layer = splitmix(k.layer ^ (0x9e3779b97f4a7c15ULL + layer));
    return RngStream(k);
  }

  /// Independent stream keyed by the next draw of this one.
  RngStream split() {
    StreamKey k = key_;
    k.layer = splitmix(engine_() ^ k.layer);
    return RngStream(k);
  }

  static std::uint64_t splitmix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
  }

 private:
  static std::uint64_t mix(const StreamKey& k) {
    std::uint64_t h = splitmix(k.seed);
    h = splitmix(h ^ k.module);
    h = splitmix(h ^ k.replicate);
    h = splitmix(h ^ k.layer);
    return h;
  }

  StreamKey key_;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

}  // namespace dgplab
