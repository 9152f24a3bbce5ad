// Copyright 2026 The qnn-graphlearn Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <random>

#include "qnngl/types.hpp"

namespace qnngl {

// All randomness flows through explicitly seeded generators; there is no
// global state. Distribution sampling is implemented here rather than with
// std::*_distribution so that a seed produces the same stream on every
// standard library.
using Rng = std::mt19937_64;

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Derives an independent child seed from a master seed and a path of
// stream indices (e.g. {tag, s_value, shot}). Used to hand each shot its
// own stream so parallel execution order cannot affect results.
inline std::uint64_t child_seed(std::uint64_t master, std::initializer_list<std::uint64_t> path) {
  std::uint64_t h = splitmix64(master);
  for (std::uint64_t p : path) h = splitmix64(h ^ splitmix64(p));
  return h;
}

inline Rng child_rng(std::uint64_t master, std::initializer_list<std::uint64_t> path) {
  return Rng(child_seed(master, path));
}

// Uniform double in (0, 1] with 53-bit resolution.
inline double uniform_unit(Rng& rng) {
  return (static_cast<double>(rng() >> 11) + 1.0) * 0x1.0p-53;
}

// Uniform index in [0, n).
inline std::uint64_t uniform_index(Rng& rng, std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("uniform_index: empty range");
  return rng() % n;  // modulo bias is ~n/2^64, irrelevant at the sizes used here
}

// Standard normal via Box-Muller; consumes two words per draw.
inline double standard_normal(Rng& rng) {
  double u1 = uniform_unit(rng);
  double u2 = uniform_unit(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

// Complex Gaussian with independent standard-normal real and imaginary parts.
inline Complex standard_normal_complex(Rng& rng) {
  double re = standard_normal(rng);
  double im = standard_normal(rng);
  return Complex(re, im);
}

}  // namespace qnngl
