#include "nirbench/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace nirbench {

namespace {

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ull;

// SplitMix64 finalizer: a strong 64-bit mixing function.
std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

std::uint64_t fnv1a(std::string_view s, std::uint64_t h) {
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

}  // namespace

RandomStream::RandomStream(std::uint64_t root_seed)
    : root_seed_(root_seed), key_(mix64(root_seed + kGolden)) {}

RandomStream::RandomStream(std::uint64_t root_seed, std::string label, std::uint64_t key)
    : root_seed_(root_seed), label_(std::move(label)), key_(key) {}

RandomStream RandomStream::derive(std::string_view label) const {
  if (label.empty()) throw std::invalid_argument("RandomStream::derive: empty label");
  std::string path = label_.empty() ? std::string(label) : label_ + "/" + std::string(label);
  std::uint64_t key = mix64(fnv1a(label, key_ ^ 0xcbf29ce484222325ull));
  return RandomStream(root_seed_, std::move(path), key);
}

std::uint64_t RandomStream::next_u64() {
  counter_ += kGolden;
  return mix64(key_ ^ counter_);
}

double RandomStream::uniform() {
  // 53-bit mantissa in [0, 1)
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RandomStream::uniform(double lo, double hi) {
  return lo + (hi - lo) * uniform();
}

std::uint64_t RandomStream::uniform_int(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("uniform_int: n must be > 0");
  // Rejection sampling to avoid modulo bias.
  const std::uint64_t limit = ~0ull - (~0ull % n);
  std::uint64_t v;
  do {
    v = next_u64();
  } while (v >= limit);
  return v % n;
}

double RandomStream::gaussian(double mean, double sd) {
  // Box-Muller; u1 in (0, 1] keeps the log finite.
  double u1 = (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
  double u2 = uniform();
  double z = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  return mean + sd * z;
}

double RandomStream::log_uniform(double lo, double hi) {
  if (lo <= 0 || hi < lo) throw std::invalid_argument("log_uniform: need 0 < lo <= hi");
  return std::exp(uniform(std::log(lo), std::log(hi)));
}

double RandomStream::triangular(double lo, double mode, double hi) {
  double u = uniform();
  double fc = (mode - lo) / (hi - lo);
  if (u < fc) return lo + std::sqrt(u * (hi - lo) * (mode - lo));
  return hi - std::sqrt((1.0 - u) * (hi - lo) * (hi - mode));
}

}  // namespace nirbench
