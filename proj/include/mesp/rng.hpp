#pragma once

#include <cmath>
#include <cstdint>

namespace mesp {

/// Counter-based generator: every (masterSeed, streamId) pair yields an
/// independent reproducible stream, so parallel trials never share state.
class SubStream {
 public:
  SubStream(std::uint64_t masterSeed, std::uint64_t streamId)
      : state_(mix(masterSeed + 0x9E3779B97F4A7C15ULL * (streamId + 1))),
        masterSeed_(masterSeed),
        streamId_(streamId) {}

  std::uint64_t next() {
    state_ += 0x9E3779B97F4A7C15ULL;
    return mix(state_);
  }

  /// Uniform draw in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Standard normal via Box-Muller; consumes two uniforms per pair.
  double gaussian() {
    if (haveSpare_) {
      haveSpare_ = false;
      return spare_;
    }
    double u1 = uniform();
    double u2 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double theta = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(theta);
    haveSpare_ = true;
    return r * std::cos(theta);
  }

  std::uint64_t masterSeed() const { return masterSeed_; }
  std::uint64_t streamId() const { return streamId_; }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ULL;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBULL;
    z ^= z >> 31;
    return z;
  }

  std::uint64_t state_;
  std::uint64_t masterSeed_;
  std::uint64_t streamId_;
  bool haveSpare_ = false;
  double spare_ = 0.0;
};

}  // namespace mesp
