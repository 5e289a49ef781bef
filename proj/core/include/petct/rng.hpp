#ifndef PETCT_RNG_HPP
#define PETCT_RNG_HPP

#include <cstdint>
#include <string_view>

namespace petct {

/// Seedable counter-based random stream (splitmix64 core). Substreams are
/// derived from (seed, case_id, transform_index, substream_index), so draws
/// are reproducible regardless of evaluation or thread order.
class RngStream {
 public:
  explicit RngStream(std::uint64_t key) : state_(key) {}

  static RngStream derive(std::uint64_t seed, std::string_view case_id,
                          std::uint64_t transform_index,
                          std::uint64_t substream_index);

  std::uint64_t next_u64();

  /// Uniform double in [0, 1).
  double next_double();
  double uniform(double lo, double hi);
  bool bernoulli(double p);
  /// Box-Muller normal deviate; consumes two uniforms per call.
  double normal(double mean, double sigma);
  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n);

 private:
  std::uint64_t state_;
};

}  // namespace petct

#endif  // PETCT_RNG_HPP
