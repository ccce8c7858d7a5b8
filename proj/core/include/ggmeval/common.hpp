#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace ggmeval {

// Error hierarchy. The CLI maps ArgumentError/ConfigError/LoadError to exit
// code 2 and everything else to exit code 1.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ArgumentError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class LoadError : public Error {
 public:
  using Error::Error;
};

class FormatError : public Error {
 public:
  using Error::Error;
};

class DataError : public Error {
 public:
  using Error::Error;
};

class ShapeError : public Error {
 public:
  using Error::Error;
};

class NumericError : public Error {
 public:
  using Error::Error;
};

class EmptyDatasetError : public Error {
 public:
  using Error::Error;
};

// Mixes a base seed with a sequence of tags into an independent stream seed
// (splitmix64 finalizer applied per tag).
std::uint64_t derive_seed(std::uint64_t base,
                          std::initializer_list<std::uint64_t> tags);

// Seeded random source. The engine is std::mt19937_64, whose output sequence
// is fixed by the standard; the samplers below are written out so that results
// do not depend on the standard library's distribution implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Uniform in [0, 1) with 53 random bits.
  double uniform01();

  // Uniform integer in [0, n). Requires n > 0.
  std::size_t uniform_index(std::size_t n);

  bool coin() { return (engine_() >> 63) != 0; }

  // Uniform in [lo, hi].
  double uniform_real(double lo, double hi) {
    return lo + (hi - lo) * uniform01();
  }

  // Shuffles in place (Fisher-Yates).
  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = uniform_index(i);
      std::swap(v[i - 1], v[j]);
    }
  }

  // k distinct indices from [0, n), in selection order.
  std::vector<std::size_t> sample_without_replacement(std::size_t n,
                                                      std::size_t k);

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

// Runs body(i) for i in [0, n) on up to `workers` threads. Each index is
// processed exactly once; callers write results into pre-sized slots so the
// outcome does not depend on scheduling. The first exception thrown by any
// body is rethrown on the calling thread.
void parallel_for(std::size_t n, std::size_t workers,
                  const std::function<void(std::size_t)>& body);

// Worker count used when the caller passes 0.
std::size_t default_workers();

}  // namespace ggmeval
