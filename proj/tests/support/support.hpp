#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "mfh/associate.hpp"
#include "mfh/descent.hpp"
#include "mfh/error.hpp"
#include "mfh/mf_data.hpp"
#include "mfh/ring.hpp"
#include "mfh/submodule.hpp"
#include "mfv/fixture.hpp"

namespace testing_support {

inline std::string fixture_path(const std::string& name) {
  return std::string(MFV_FIXTURE_DIR) + "/" + name;
}

inline mfv::Model load_model(const std::string& name) {
  return mfv::Model(mfv::load_fixture(fixture_path(name)));
}

/// Z/p^m[t] or Z/p^m[t, 1/t].
inline mfh::RingPtr line_ring(int p, int m, bool invert_t = true,
                              std::vector<std::vector<std::int64_t>> dens = {}) {
  return mfh::ChartRing::make(p, m, {"t"}, {invert_t}, std::move(dens));
}

inline mfh::RingElement el(const mfh::RingPtr& R, const std::string& s) {
  return mfh::parse_element(s, R);
}

inline mfh::Vec vec(const mfh::RingPtr& R, const std::vector<std::string>& entries) {
  mfh::Vec v;
  for (const auto& s : entries) v.push_back(el(R, s));
  return v;
}

inline mfh::Matrix mat(const mfh::RingPtr& R, const std::vector<std::vector<std::string>>& rows) {
  std::vector<mfh::Vec> rs;
  for (const auto& r : rows) rs.push_back(vec(R, r));
  return mfh::Matrix::from_rows(R, rs);
}

/// KUM5 built by hand: Z/25[t, 1/t], A = [[0, 1/t], [0, 0]], Phi = diag(1, 5).
inline mfh::DeRhamChart kum5(const std::string& F = "t^5") {
  auto R = line_ring(5, 2);
  mfh::FrobeniusLifting lift = mfh::FrobeniusLifting::parse(R, {F});
  mfh::Matrix Phi = mat(R, {{"1", "0"}, {"0", "5"}});
  if (F != "t^5") {
    mfh::DeRhamChart base("U", 1, {0, 1}, {mat(R, {{"0", "t^-1"}, {"0", "0"}})},
                          mfh::FrobeniusLifting::standard(R), Phi);
    return mfh::transport_frobenius(base, lift);
  }
  return mfh::DeRhamChart("U", 1, {0, 1}, {mat(R, {{"0", "t^-1"}, {"0", "0"}})}, lift, Phi);
}

// ---- independent oracles ---------------------------------------------------

/// Laurent polynomial in one variable over Z/N as a plain exponent map.
using Laurent = std::map<int, std::int64_t>;

inline std::int64_t reduce(std::int64_t a, std::int64_t N) { return ((a % N) + N) % N; }

inline Laurent trim(Laurent f) {
  for (auto it = f.begin(); it != f.end();)
    it = it->second == 0 ? f.erase(it) : std::next(it);
  return f;
}

inline Laurent to_laurent(const mfh::RingElement& f) {
  Laurent out;
  for (const auto& [e, c] : f.numerator()) out[e[0]] = c;
  return out;
}

inline Laurent laurent_mul(const Laurent& a, const Laurent& b, std::int64_t N) {
  Laurent out;
  for (const auto& [ea, ca] : a)
    for (const auto& [eb, cb] : b) out[ea + eb] = reduce(out[ea + eb] + ca * cb % N, N);
  return trim(out);
}

inline Laurent laurent_add(const Laurent& a, const Laurent& b, std::int64_t N) {
  Laurent out = a;
  for (const auto& [e, c] : b) out[e] = reduce(out[e] + c, N);
  return trim(out);
}

inline Laurent laurent_derivative(const Laurent& a, std::int64_t N) {
  Laurent out;
  for (const auto& [e, c] : a) out[e - 1] = reduce(c * e, N);
  return trim(out);
}

/// ord_p(k!) by multiplying out and dividing, for small k.
inline int brute_ord_factorial(int k, int p) {
  int v = 0;
  for (int i = 2; i <= k; ++i)
    for (int x = i; x % p == 0; x /= p) ++v;
  return v;
}

/// Inverse mod a prime by exhaustive search.
inline std::int64_t brute_inverse(std::int64_t a, std::int64_t p) {
  for (std::int64_t x = 1; x < p; ++x)
    if (reduce(a * x, p) == 1) return x;
  return 0;
}

}  // namespace testing_support
