#include "idid/common.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>

namespace idid {

int Rng::uniform_int(int n) {
  const std::uint64_t bound = static_cast<std::uint64_t>(n);
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  std::uint64_t x = next();
  while (x >= limit) x = next();
  return static_cast<int>(x % bound);
}

std::uint64_t Rng::derive(std::uint64_t seed, std::uint64_t index) {
  Rng r(seed ^ (0x632be59bd9b4e019ull * (index + 1)));
  return r.next();
}

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::int64_t quantize(double v) {
  return static_cast<std::int64_t>(std::llround(v * kQuantScale));
}

std::vector<std::int64_t> quantize_vector(const std::vector<double>& v) {
  std::vector<std::int64_t> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = quantize(v[i]);
  return out;
}

namespace {
int env_log_level() {
  static int level = [] {
    const char* s = std::getenv("IDID_LOG");
    if (!s) return 0;
    if (std::strcmp(s, "debug") == 0) return 2;
    if (std::strcmp(s, "info") == 0) return 1;
    return 0;
  }();
  return level;
}
}  // namespace

bool log_enabled(int level) { return env_log_level() >= level; }

void log_line(int level, const std::string& msg) {
  if (log_enabled(level)) std::fprintf(stderr, "[idid] %s\n", msg.c_str());
}

}  // namespace idid
