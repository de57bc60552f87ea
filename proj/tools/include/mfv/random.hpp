#pragma once

#include <cstdint>
#include <random>

#include "mfh/matrix.hpp"
#include "mfh/mf_data.hpp"

namespace mfv {

/// Seeded generator for randomized checks. The stream is std::mt19937_64
/// seeded with the given value; only determinism for a fixed seed is
/// promised, not the particular stream.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0) : gen_(seed) {}

  std::int64_t uniform(std::int64_t lo, std::int64_t hi) {
    return std::uniform_int_distribution<std::int64_t>(lo, hi)(gen_);
  }

 private:
  std::mt19937_64 gen_;
};

/// Random Laurent polynomial with exponents in [min_exp, max_deg] per
/// variable (min_exp is clamped to 0 on variables that are not inverted)
/// and total degree at most max_deg.
mfh::RingElement random_element(const mfh::RingPtr& ring, Rng& rng, int max_deg = 5,
                                int min_exp = -2, int terms = 4);
mfh::Vec random_vec(const mfh::RingPtr& ring, int rank, Rng& rng, int max_deg = 5);
/// F'(t_l) = t_l^p + p g_l with g_l a random polynomial of degree <= max_deg.
mfh::FrobeniusLifting random_lifting(const mfh::RingPtr& ring, Rng& rng, int max_deg = 5);

}  // namespace mfv
