#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace idid {

// Tolerance for accepting a probability row as normalized. Rows further from
// 1 than this are rejected outright, never renormalized.
inline constexpr double kNormTol = 1e-9;

// Absolute tolerance on Q-values when declaring optimal-action ties.
inline constexpr double kTieTol = 1e-9;

// Beliefs are quantized to 12 decimals when used as memo keys.
inline constexpr double kQuantScale = 1e12;

// splitmix64. All randomized behavior in the library derives from this one
// generator so that a seed pins results independently of the standard
// library's distribution internals.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // uniform double in [0, 1)
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // uniform integer in [0, n), n >= 1; rejection sampled so it is unbiased
  int uniform_int(int n);

  // derive an independent stream, e.g. one per simulation run
  static std::uint64_t derive(std::uint64_t seed, std::uint64_t index);

 private:
  std::uint64_t state_;
};

// Shortest decimal string that round-trips the double exactly.
std::string format_double(double v);

std::int64_t quantize(double v);
std::vector<std::int64_t> quantize_vector(const std::vector<double>& v);

// Optional stderr logging controlled by the IDID_LOG environment variable
// (values: info, debug). Silent when unset.
bool log_enabled(int level);  // 1 = info, 2 = debug
void log_line(int level, const std::string& msg);

}  // namespace idid
