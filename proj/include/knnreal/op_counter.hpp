#pragma once

#include <cstdint>

namespace knnreal {

/// Counts elementary steps (adjacency entries touched, bucket moves) so that
/// asymptotic claims can be checked independently of wall-clock noise.
struct OpCounter {
  std::uint64_t ops = 0;

  void add(std::uint64_t n = 1) noexcept { ops += n; }
};

inline void count(OpCounter* c, std::uint64_t n = 1) noexcept {
  if (c != nullptr) c->add(n);
}

}  // namespace knnreal
