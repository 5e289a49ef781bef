#include "petct/rng.hpp"

#include <cmath>
#include <numbers>

namespace petct {

namespace {

constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ull;

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xCBF29CE484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001B3ull;
  }
  return h;
}

}  // namespace

RngStream RngStream::derive(std::uint64_t seed, std::string_view case_id,
                            std::uint64_t transform_index,
                            std::uint64_t substream_index) {
  std::uint64_t key = mix64(seed + kGamma);
  key = mix64(key ^ fnv1a(case_id));
  key = mix64(key ^ (transform_index + kGamma));
  key = mix64(key ^ (substream_index + 2 * kGamma));
  return RngStream(key);
}

std::uint64_t RngStream::next_u64() {
  state_ += kGamma;
  return mix64(state_);
}

double RngStream::next_double() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RngStream::uniform(double lo, double hi) {
  return lo + (hi - lo) * next_double();
}

bool RngStream::bernoulli(double p) { return next_double() < p; }

double RngStream::normal(double mean, double sigma) {
  // u1 in (0, 1] so the log is finite.
  const double u1 = 1.0 - next_double();
  const double u2 = next_double();
  const double r = std::sqrt(-2.0 * std::log(u1));
  return mean + sigma * r * std::cos(2.0 * std::numbers::pi * u2);
}

std::uint64_t RngStream::below(std::uint64_t n) {
  return n == 0 ? 0 : next_u64() % n;
}

}  // namespace petct
