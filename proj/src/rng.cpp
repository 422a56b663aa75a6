// Copyright 2026 The edge-diffuse Authors
// SPDX-License-Identifier: Apache-2.0

#include "edgediffuse/rng.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace edgediffuse {

std::uint64_t mix_seed(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

SeededRng::SeededRng(std::uint64_t seed) : seed_(seed), engine_(mix_seed(seed)) {}

SeededRng SeededRng::child(std::uint64_t index) const {
  return SeededRng(mix_seed(seed_ ^ mix_seed(index + 0x632be59bd9b4e019ULL)));
}

double SeededRng::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

std::uint64_t SeededRng::uniform_index(std::uint64_t bound) {
  if (bound == 0) throw std::invalid_argument("uniform_index: bound must be positive");
  // Rejection sampling removes modulo bias.
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t x;
  do {
    x = engine_();
  } while (x >= limit);
  return x % bound;
}

std::int64_t SeededRng::uniform_int(std::int64_t lo, std::int64_t hi) {
  if (hi < lo) throw std::invalid_argument("uniform_int: empty range");
  return lo + static_cast<std::int64_t>(
                  uniform_index(static_cast<std::uint64_t>(hi - lo) + 1));
}

int SeededRng::binomial(int n, double prob) {
  if (n < 0) throw std::invalid_argument("binomial: negative trial count");
  if (prob <= 0.0 || n == 0) return 0;
  if (prob >= 1.0) return n;
  if (n > 64) {
    int k = 0;
    for (int i = 0; i < n; ++i) k += bernoulli(prob) ? 1 : 0;
    return k;
  }
  // Inverse CDF walking the pmf recurrence.
  const double u = uniform();
  const double q = 1.0 - prob;
  double pmf = std::pow(q, n);
  double cdf = pmf;
  int k = 0;
  while (u >= cdf && k < n) {
    pmf *= (static_cast<double>(n - k) / static_cast<double>(k + 1)) * (prob / q);
    ++k;
    cdf += pmf;
  }
  return k;
}

std::size_t SeededRng::categorical(const std::vector<double>& weights) {
  double total = 0.0;
  for (double w : weights) total += w;
  if (weights.empty() || !(total > 0.0)) {
    throw std::invalid_argument("categorical: weights must have positive mass");
  }
  const double u = uniform() * total;
  double acc = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    acc += weights[i];
    if (u < acc) return i;
  }
  // Rounding can leave u == total; return the last positive weight.
  for (std::size_t i = weights.size(); i > 0; --i) {
    if (weights[i - 1] > 0.0) return i - 1;
  }
  return weights.size() - 1;
}

}  // namespace edgediffuse
