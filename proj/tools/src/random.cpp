#include "mfv/random.hpp"

#include <algorithm>

namespace mfv {

mfh::RingElement random_element(const mfh::RingPtr& ring, Rng& rng, int max_deg, int min_exp,
                                int terms) {
  mfh::RingElement::Terms t;
  const int d = ring->dim();
  for (int k = 0; k < terms; ++k) {
    mfh::Exponent e{0, 0};
    int budget = max_deg;
    for (int l = 0; l < d; ++l) {
      int lo = ring->is_inverted(l) ? std::min(min_exp, 0) : 0;
      e[l] = static_cast<int>(rng.uniform(lo, std::max(lo, budget)));
      budget -= std::max(e[l], 0);
    }
    t[e] = rng.uniform(0, ring->modulus() - 1);
  }
  return mfh::RingElement(ring, t);
}

mfh::Vec random_vec(const mfh::RingPtr& ring, int rank, Rng& rng, int max_deg) {
  mfh::Vec v;
  for (int a = 0; a < rank; ++a) v.push_back(random_element(ring, rng, max_deg));
  return v;
}

mfh::FrobeniusLifting random_lifting(const mfh::RingPtr& ring, Rng& rng, int max_deg) {
  mfh::FrobeniusLifting F = mfh::FrobeniusLifting::standard(ring);
  const std::int64_t p = ring->prime();
  for (auto& img : F.images) img = img + random_element(ring, rng, max_deg, 0).scaled(p);
  return F;
}

}  // namespace mfv
