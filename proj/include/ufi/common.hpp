#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace ufi {

inline constexpr std::string_view kVersion = "1.0.0";

enum class Task { classification, regression };

std::string_view to_string(Task task);
Task parse_task(std::string_view text);

/// Input data violates a precondition (malformed CSV, missing value, unknown
/// label, mismatched column count). Maps to CLI exit code 1.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad configuration or flag combination. Maps to CLI exit code 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// SplitMix64 finalizer; used to derive independent per-tree / per-rep seeds
/// from a master seed so results do not depend on scheduling.
constexpr std::uint64_t mix_seed(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream,
                                    std::uint64_t index) {
  return mix_seed(mix_seed(master ^ mix_seed(stream)) + index);
}

// Stream tags for derive_seed so different consumers never share a sequence.
inline constexpr std::uint64_t kTreeStream = 1;
inline constexpr std::uint64_t kRepStream = 2;
inline constexpr std::uint64_t kPermutationStream = 3;
inline constexpr std::uint64_t kProbeStream = 4;

/// Runs body(i) for i in [0, count) on up to `threads` workers. Each index is
/// processed exactly once; callers write results into pre-sized slots so the
/// outcome is independent of scheduling. threads <= 1 runs inline.
void parallel_for(std::size_t count, int threads,
                  const std::function<void(std::size_t)>& body);

/// Default worker count: UFI_THREADS if set and positive, else 1.
int default_threads();

}  // namespace ufi
