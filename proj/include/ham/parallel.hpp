#pragma once

// Deterministic parallel helpers. Work is split into index ranges whose
// results are stored by index, so the merge order never depends on the
// number of worker threads.

#include <cstddef>
#include <cstdint>
#include <memory>
#include <random>

#include <tbb/global_control.h>
#include <tbb/parallel_for.h>

namespace ham {

//! Limits TBB worker threads for the lifetime of the object.
class ThreadLimit {
 public:
  explicit ThreadLimit(std::size_t n)
      : ctl_(n > 0 ? std::make_unique<tbb::global_control>(
                         tbb::global_control::max_allowed_parallelism, n)
                   : nullptr) {}

 private:
  std::unique_ptr<tbb::global_control> ctl_;
};

template <class Fn>
void parallel_for_index(std::size_t n, Fn&& fn) {
  tbb::parallel_for(std::size_t{0}, n, [&](std::size_t i) { fn(i); });
}

//! SplitMix64 finalizer; used to derive independent stream seeds.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

//! Seed for stream (a, b) under a master seed; a counter-style derivation.
inline std::uint64_t stream_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b = 0) {
  return splitmix64(splitmix64(splitmix64(master) ^ a) ^ (b * 0xd1342543de82ef95ULL + 1));
}

using Rng = std::mt19937_64;

//! Uniform double in (0, 1), never 0 or 1. Built from raw 64-bit draws so the
//! sequence is identical across standard library implementations.
inline double uniform01(Rng& rng) {
  return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

}  // namespace ham
