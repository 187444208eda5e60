#pragma once

// Extreme rays of a pointed polyhedral cone {x >= 0 : A x = 0} by the
// double-description method over the rationals.

#include "lamkit/linalg.hpp"

#include <algorithm>
#include <bitset>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace lamkit {

inline constexpr std::size_t kMaxConeDimension = 256;

namespace detail {

using ZeroSet = std::bitset<kMaxConeDimension>;

inline ZeroSet zero_set(const RationalVector& r) {
  ZeroSet z;
  for (std::size_t i = 0; i < r.size(); ++i)
    if (r[i] == 0) z.set(i);
  return z;
}

inline void make_primitive(RationalVector& r) {
  auto ints = primitive_integral(r);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = Rational(ints[i]);
}

}  // namespace detail

/// Primitive integral generators of the extreme rays of
/// {x in R^dim : x >= 0, equalities * x = 0}, sorted lexicographically.
inline std::vector<std::vector<Integer>> extreme_rays(const RationalMatrix& equalities,
                                                      std::size_t dim) {
  if (dim > kMaxConeDimension) throw std::length_error("cone dimension exceeds supported size");
  std::vector<RationalVector> rays;
  for (std::size_t i = 0; i < dim; ++i) {
    RationalVector e(dim, Rational(0));
    e[i] = 1;
    rays.push_back(std::move(e));
  }
  for (const auto& row : equalities) {
    if (row.size() != dim) throw std::invalid_argument("equality row has wrong width");
    std::vector<Rational> value(rays.size());
    std::vector<std::size_t> pos, neg, zero;
    for (std::size_t k = 0; k < rays.size(); ++k) {
      Rational v = 0;
      for (std::size_t i = 0; i < dim; ++i)
        if (row[i] != 0 && rays[k][i] != 0) v += row[i] * rays[k][i];
      value[k] = v;
      (v > 0 ? pos : (v < 0 ? neg : zero)).push_back(k);
    }
    std::vector<detail::ZeroSet> zs;
    zs.reserve(rays.size());
    for (const auto& r : rays) zs.push_back(detail::zero_set(r));

    std::vector<RationalVector> next;
    for (auto k : zero) next.push_back(rays[k]);
    for (auto p : pos) {
      for (auto n : neg) {
        const detail::ZeroSet common = zs[p] & zs[n];
        bool adjacent = true;
        for (std::size_t k = 0; k < rays.size() && adjacent; ++k) {
          if (k == p || k == n) continue;
          if ((common & zs[k]) == common) adjacent = false;
        }
        if (!adjacent) continue;
        RationalVector r(dim, Rational(0));
        for (std::size_t i = 0; i < dim; ++i) r[i] = value[p] * rays[n][i] - value[n] * rays[p][i];
        detail::make_primitive(r);
        next.push_back(std::move(r));
      }
    }
    rays = std::move(next);
  }
  std::vector<std::vector<Integer>> out;
  out.reserve(rays.size());
  for (const auto& r : rays) out.push_back(primitive_integral(r));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

/// True when the solutions of equalities*x = 0 supported inside the support
/// of `ray` form a one-dimensional space.
inline bool support_is_extremal(const RationalMatrix& equalities, const std::vector<Integer>& ray) {
  std::vector<std::size_t> support;
  for (std::size_t i = 0; i < ray.size(); ++i)
    if (ray[i] != 0) support.push_back(i);
  if (support.empty()) return false;
  return rank(select_columns(equalities, support)) + 1 == support.size();
}

}  // namespace lamkit
