#pragma once

// Shared fixtures, random generators and brute-force oracles for the test
// suites. Oracles here deliberately avoid the library's own algorithms.

#include "polytower/complex.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

namespace polytower::testing {

inline ComplexPtr atoms(const std::vector<std::vector<std::string>>& simplices) {
  return Complex::from_atoms(simplices);
}

inline Simplex ids(const ComplexPtr& k, const std::vector<std::string>& names) {
  std::vector<VertexName> vn;
  for (const auto& n : names) vn.emplace_back(n);
  return k->simplex_of(vn);
}

inline VertexName sub_name(const std::vector<std::string>& parts) {
  std::vector<VertexName> vn;
  for (const auto& p : parts) vn.emplace_back(p);
  return VertexName::list(std::move(vn));
}

/// Every non-empty subset of a maximal simplex, by direct enumeration over
/// all subsets of the vertex set.
inline std::size_t closure_count_oracle(const std::vector<std::vector<std::string>>& maximal) {
  std::set<std::string> verts;
  for (const auto& s : maximal) verts.insert(s.begin(), s.end());
  const std::vector<std::string> v(verts.begin(), verts.end());
  std::size_t count = 0;
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << v.size()); ++mask) {
    std::set<std::string> subset;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (mask & (std::uint64_t{1} << i)) subset.insert(v[i]);
    }
    for (const auto& s : maximal) {
      const std::set<std::string> ss(s.begin(), s.end());
      if (std::includes(ss.begin(), ss.end(), subset.begin(), subset.end())) {
        ++count;
        break;
      }
    }
  }
  return count;
}

/// Number of strictly increasing chains of each length in the face poset,
/// by recursive extension of chains (independent of the flag construction).
inline std::vector<std::size_t> chain_count_oracle(const Complex& k) {
  const auto all = k.simplices().all();
  std::vector<std::size_t> counts;
  std::vector<std::size_t> chain;
  auto extend = [&](auto&& self, std::size_t last) -> void {
    const std::size_t len = chain.size();
    if (counts.size() < len) counts.resize(len, 0);
    ++counts[len - 1];
    for (std::size_t j = 0; j < all.size(); ++j) {
      if (all[j].size() > all[last].size() && is_face(all[last], all[j])) {
        chain.push_back(j);
        self(self, j);
        chain.pop_back();
      }
    }
  };
  for (std::size_t i = 0; i < all.size(); ++i) {
    chain = {i};
    extend(extend, i);
  }
  return counts;
}

/// Random complex on up to `max_vertices` atoms with at most
/// `max_simplices` simplices after closure.
inline ComplexPtr random_complex(std::mt19937_64& rng, int max_vertices, std::size_t max_simplices,
                                 int max_dim = 3) {
  std::uniform_int_distribution<int> nv(2, max_vertices);
  const int n = nv(rng);
  std::vector<std::string> names;
  for (int i = 0; i < n; ++i) names.push_back("v" + std::to_string(i));
  std::vector<std::vector<std::string>> tops;
  for (const auto& name : names) tops.push_back({name});
  std::uniform_int_distribution<int> dim(1, max_dim);
  for (int attempt = 0; attempt < 12; ++attempt) {
    std::vector<std::string> pick = names;
    std::shuffle(pick.begin(), pick.end(), rng);
    pick.resize(std::min<std::size_t>(pick.size(), static_cast<std::size_t>(dim(rng) + 1)));
    auto trial = tops;
    trial.push_back(pick);
    if (Complex::from_atoms(trial)->simplex_count() <= max_simplices) tops = std::move(trial);
  }
  return Complex::from_atoms(tops);
}

/// Random point on the closed simplex `sigma` with coordinates of
/// denominator at most `den`; faces are hit with positive probability.
inline Point random_point_on(std::mt19937_64& rng, const ComplexPtr& k, const Simplex& sigma,
                             const Rational& scale = 1, long den = 12) {
  std::uniform_int_distribution<long> w(0, den);
  for (;;) {
    std::vector<long> weights;
    long total = 0;
    for (std::size_t i = 0; i < sigma.size(); ++i) {
      weights.push_back(w(rng));
      total += weights.back();
    }
    if (total == 0) continue;
    Point::Coordinates coords;
    for (std::size_t i = 0; i < sigma.size(); ++i) coords.emplace_back(sigma[i], Rational(weights[i], total));
    return Point(k, coords, scale);
  }
}

inline Point random_point(std::mt19937_64& rng, const ComplexPtr& k, const Rational& scale = 1, long den = 12) {
  const auto& tops = k->maximal();
  std::uniform_int_distribution<std::size_t> pick(0, tops.size() - 1);
  return random_point_on(rng, k, tops[pick(rng)], scale, den);
}

}  // namespace polytower::testing
