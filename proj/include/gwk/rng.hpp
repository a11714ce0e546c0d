#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace gwk {

std::uint64_t fnv1a64(std::string_view s, std::uint64_t h = 0xcbf29ce484222325ULL);
std::uint64_t splitmix64(std::uint64_t x);

// seedable generator; child streams are keyed by name so suites never share draws
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0) : seed_(seed), eng_(splitmix64(seed)) {}

  std::uint64_t seed() const { return seed_; }
  Rng child(std::string_view name) const { return Rng(splitmix64(seed_ ^ fnv1a64(name))); }

  std::uint64_t next() { return eng_(); }
  // [0, 1)
  double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  int uniform_int(int lo, int hi_inclusive) {
    auto span = static_cast<std::uint64_t>(hi_inclusive - lo) + 1;
    return lo + static_cast<int>(eng_() % span);
  }
  double normal();

 private:
  std::uint64_t seed_;
  std::mt19937_64 eng_;
};

}  // namespace gwk
