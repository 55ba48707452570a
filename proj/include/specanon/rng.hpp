//
// Copyright 2026 The specanon Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#ifndef SPECANON_RNG_HPP_
#define SPECANON_RNG_HPP_

#include <boost/random/normal_distribution.hpp>
#include <boost/random/poisson_distribution.hpp>
#include <boost/random/uniform_01.hpp>
#include <boost/random/uniform_int_distribution.hpp>

#include <cstddef>
#include <cstdint>
#include <random>

namespace specanon {

// SplitMix64 finalizer. Used only to derive stream identifiers.
constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// A reproducible random stream identified by (seed, stream id).
//
// The engine is std::mt19937_64 seeded through std::seed_seq from the four
// 32-bit halves of seed and stream id; both algorithms are fully specified
// by the standard. Variates come from Boost.Random distributions, whose
// output (unlike the std:: distributions) does not depend on the standard
// library implementation. Together this makes draw sequences identical on
// every platform.
//
// Sub-streams: substream(i) yields the stream (seed, mix64(stream ^ mix64(i))).
// Simulation code derives one sub-stream per replication index.
//
// A stream is single-owner and must not be drawn from concurrently.
class RngStream {
 public:
  using Engine = std::mt19937_64;

  explicit RngStream(std::uint64_t seed, std::uint64_t stream = 0)
      : seed_(seed), stream_(stream), engine_(make_engine(seed, stream)) {}

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_; }

  RngStream substream(std::uint64_t index) const {
    return RngStream(seed_, mix64(stream_ ^ mix64(index)));
  }

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on [0, 1).
  double uniform() { return boost::random::uniform_01<double>()(engine_); }

  double normal() { return boost::random::normal_distribution<double>(0.0, 1.0)(engine_); }

  // Uniform on {0, ..., n - 1} without modulo bias.
  std::size_t index(std::size_t n) {
    return boost::random::uniform_int_distribution<std::size_t>(0, n - 1)(engine_);
  }

  std::uint64_t poisson(double rate) {
    return boost::random::poisson_distribution<std::uint64_t, double>(rate)(engine_);
  }

  Engine& engine() { return engine_; }

 private:
  static Engine make_engine(std::uint64_t seed, std::uint64_t stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream),
                      static_cast<std::uint32_t>(stream >> 32)};
    return Engine(seq);
  }

  std::uint64_t seed_;
  std::uint64_t stream_;
  Engine engine_;
};

}  // namespace specanon

#endif  // SPECANON_RNG_HPP_
