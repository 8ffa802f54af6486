#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>

namespace fasthcs {

/// Resolves a user thread request: 0 means hardware concurrency.
unsigned resolve_threads(unsigned requested);

/// Calls fn(i) for i in [0, count) on up to `threads` workers. Work items
/// are claimed dynamically, so fn must write only to slot i of its output.
/// The first exception thrown by any fn is rethrown after all workers join.
void parallel_for(std::size_t count, unsigned threads,
                  const std::function<void(std::size_t)>& fn);

/// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

/// Seed for an independent stream identified by (seed, a, b). Streams
/// depend only on their identifiers, never on the worker that runs them.
std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t a,
                          std::uint64_t b = 0);

using Rng = std::mt19937_64;

inline Rng make_stream(std::uint64_t seed, std::uint64_t a,
                       std::uint64_t b = 0) {
  return Rng(stream_seed(seed, a, b));
}

/// Uniform integer in [0, bound) by rejection on the raw engine output, so
/// draws are identical across standard library implementations.
std::uint64_t uniform_below(Rng& rng, std::uint64_t bound);

/// Standard normal draw (Marsaglia polar method on uniform_unit).
double standard_normal(Rng& rng);

/// Uniform double in [0, 1) with 53 random bits.
double uniform_unit(Rng& rng);

}  // namespace fasthcs
