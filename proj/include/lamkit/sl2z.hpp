#pragma once

// The linear SL(2,Z) action on the plane, modulo -1.
//
// Orbits are grown by breadth-first search over the generators
// S = [[0,-1],[1,0]], T = [[1,1],[0,1]] and T^-1, written 'S', 'T', 't'.
// A word is read left to right: "ST" applies S first, then T. Points are
// kept up to sign.

#include "lamkit/scalar.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <limits>
#include <map>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <vector>

namespace lamkit::sl2z {

struct IntMatrix {
  long long a = 1, b = 0, c = 0, d = 1;

  long long det() const { return a * d - b * c; }
  friend IntMatrix operator*(const IntMatrix& m, const IntMatrix& n) {
    return {m.a * n.a + m.b * n.c, m.a * n.b + m.b * n.d, m.c * n.a + m.d * n.c, m.c * n.b + m.d * n.d};
  }
};

inline const IntMatrix S{0, -1, 1, 0};
inline const IntMatrix T{1, 1, 0, 1};
inline const IntMatrix T_inv{1, -1, 0, 1};

inline const IntMatrix& generator(char g) {
  switch (g) {
    case 'S': return S;
    case 'T': return T;
    case 't': return T_inv;
    default: throw std::invalid_argument(std::string("unknown generator '") + g + "'");
  }
}

template <class Scalar>
struct Point {
  Scalar x{0};
  Scalar y{0};
};

template <class Scalar>
Point<Scalar> apply(const IntMatrix& m, const Point<Scalar>& p) {
  return {Scalar(m.a) * p.x + Scalar(m.b) * p.y, Scalar(m.c) * p.x + Scalar(m.d) * p.y};
}

/// Representative of {p, -p}: first nonzero coordinate positive.
template <class Scalar>
Point<Scalar> canonical(Point<Scalar> p) {
  const int sx = sign_of(p.x);
  if (sx < 0 || (sx == 0 && sign_of(p.y) < 0)) return {Scalar(0) - p.x, Scalar(0) - p.y};
  return p;
}

template <class Scalar>
Point<Scalar> evaluate(const std::string& word, Point<Scalar> seed) {
  for (char g : word) seed = apply(generator(g), seed);
  return canonical(seed);
}

template <class Scalar>
struct OrbitPoint {
  Point<Scalar> point;
  std::string word;
};

enum class SeedClass { RationalDependent, Independent, Unknown };

inline const char* seed_class_name(SeedClass c) {
  switch (c) {
    case SeedClass::RationalDependent: return "rational-dependent";
    case SeedClass::Independent: return "independent";
    default: return "unknown";
  }
}

inline SeedClass classify_seed(const Point<Rational>& p) {
  if (p.x == 0 && p.y == 0) throw std::invalid_argument("classify_seed: zero vector");
  return SeedClass::RationalDependent;
}

/// Exact in Q(sqrt 5): the coordinates are Q-dependent iff their ratio is
/// rational.
inline SeedClass classify_seed(const Point<GoldenField>& p) {
  if (p.x.sign() == 0 && p.y.sign() == 0) throw std::invalid_argument("classify_seed: zero vector");
  const Rational det = p.x.rational_part() * p.y.surd_part() - p.x.surd_part() * p.y.rational_part();
  return det == 0 ? SeedClass::RationalDependent : SeedClass::Independent;
}

/// Evidence only: expands the slope as a continued fraction. Termination
/// within the cutoff (up to rounding noise) means dependent, a long
/// expansion with moderate denominators means independent.
inline SeedClass classify_seed(const Point<double>& p, int cutoff = 12, double max_denominator = 1e6) {
  if (p.x == 0 && p.y == 0) throw std::invalid_argument("classify_seed: zero vector");
  const double ax = std::abs(p.x), ay = std::abs(p.y);
  if (std::min(ax, ay) <= 1e-12 * std::max(ax, ay)) return SeedClass::RationalDependent;
  double r = std::max(ax, ay) / std::min(ax, ay);
  double q_prev = 0, q = 1;
  for (int i = 0; i < cutoff; ++i) {
    const double a = std::floor(r);
    const double f = r - a;
    const double q_next = a * q + q_prev;
    q_prev = q;
    q = q_next;
    // Remainder at the level of the rounding error accumulated so far.
    if (f <= 1e-9 * q * q) return q <= max_denominator ? SeedClass::RationalDependent : SeedClass::Unknown;
    if (q > max_denominator) return SeedClass::Unknown;
    r = 1.0 / f;
  }
  return SeedClass::Independent;
}

namespace detail {

template <class Scalar>
struct PointLess {
  bool operator()(const Point<Scalar>& u, const Point<Scalar>& v) const {
    if constexpr (ScalarTraits<Scalar>::exact) {
      const int sx = sign_of(Scalar(u.x - v.x));
      if (sx != 0) return sx < 0;
      return sign_of(Scalar(u.y - v.y)) < 0;
    } else {
      // Dedup tolerance 1e-12.
      if (std::abs(u.x - v.x) > 1e-12) return u.x < v.x;
      if (std::abs(u.y - v.y) > 1e-12) return u.y < v.y;
      return false;
    }
  }
};

template <class Scalar>
Scalar norm2(const Point<Scalar>& p) {
  return p.x * p.x + p.y * p.y;
}

}  // namespace detail

/// Orbit points of norm <= R reachable by words of length <= depth. With an
/// exploration radius, only words whose every prefix stays within it are
/// followed. For integral seeds and exploration radius R this still reaches
/// every orbit point of the ball given enough depth, since the Euclidean
/// algorithm path back to the seed never leaves it.
template <class Scalar>
std::vector<OrbitPoint<Scalar>> orbit_ball(const Point<Scalar>& seed, const Scalar& R, int depth,
                                           std::optional<std::type_identity_t<Scalar>> explore_radius = std::nullopt) {
  if (sign_of(seed.x) == 0 && sign_of(seed.y) == 0) throw std::invalid_argument("orbit_ball: zero seed");
  if (sign_of(R) <= 0) throw std::invalid_argument("orbit_ball: radius must be positive");
  if (depth < 0) throw std::invalid_argument("orbit_ball: depth must be nonnegative");
  const Scalar R2 = R * R;
  const bool bounded = explore_radius.has_value();
  const Scalar E2 = bounded ? Scalar(*explore_radius * *explore_radius) : Scalar(0);
  std::map<Point<Scalar>, std::string, detail::PointLess<Scalar>> seen;
  const auto start = canonical(seed);
  if (bounded && sign_of(Scalar(detail::norm2(start) - E2)) > 0) return {};
  seen.emplace(start, "");
  std::vector<Point<Scalar>> frontier{start};
  for (int level = 0; level < depth && !frontier.empty(); ++level) {
    std::vector<Point<Scalar>> next;
    for (const auto& p : frontier) {
      const std::string& w = seen.at(p);
      for (char g : {'S', 'T', 't'}) {
        auto q = canonical(apply(generator(g), p));
        if (bounded && sign_of(Scalar(detail::norm2(q) - E2)) > 0) continue;
        if (seen.emplace(q, w + g).second) next.push_back(q);
      }
    }
    frontier = std::move(next);
  }
  std::vector<OrbitPoint<Scalar>> out;
  out.reserve(seen.size());
  for (auto& [p, w] : seen)
    if (sign_of(Scalar(detail::norm2(p) - R2)) <= 0) out.push_back({p, w});
  return out;
}

/// Minimum distance between distinct points, taken up to sign; returns the
/// squared gap (exact for exact scalars).
template <class Scalar>
Scalar discreteness_gap2(const std::vector<Point<Scalar>>& pts) {
  if (pts.size() < 2) throw std::invalid_argument("discreteness_gap: needs at least two points");
  // Each class is represented by both signs so plain distances suffice.
  std::vector<Point<Scalar>> all;
  for (const auto& p : pts) {
    all.push_back(p);
    all.push_back({Scalar(0) - p.x, Scalar(0) - p.y});
  }
  std::sort(all.begin(), all.end(), detail::PointLess<Scalar>{});
  bool have = false;
  Scalar best(0);
  for (std::size_t i = 0; i < all.size(); ++i)
    for (std::size_t j = i + 1; j < all.size(); ++j) {
      const Scalar dx = all[j].x - all[i].x;
      if (have && sign_of(Scalar(dx * dx - best)) >= 0) break;
      const Scalar dy = all[j].y - all[i].y;
      const Scalar d2 = dx * dx + dy * dy;
      if (sign_of(d2) == 0) continue;
      if (!have || sign_of(Scalar(d2 - best)) < 0) {
        best = d2;
        have = true;
      }
    }
  if (!have) throw std::invalid_argument("discreteness_gap: needs at least two distinct points");
  return best;
}

template <class Scalar>
double discreteness_gap(const std::vector<Point<Scalar>>& pts) {
  return std::sqrt(to_double(discreteness_gap2(pts)));
}

template <class Scalar>
std::vector<Point<Scalar>> points_of(const std::vector<OrbitPoint<Scalar>>& orbit) {
  std::vector<Point<Scalar>> out;
  for (const auto& o : orbit) out.push_back(o.point);
  return out;
}

struct Box {
  double x0 = 0, x1 = 1, y0 = 0, y1 = 1;
  bool contains(double x, double y) const { return x >= x0 && x <= x1 && y >= y0 && y <= y1; }
};

/// Relative difference between the number of cloud points in `box` and in
/// g^-1(box), for a uniform cloud on a rectangle covering both.
inline double lebesgue_invariance_check(const IntMatrix& g, const Box& box, std::size_t samples, std::uint64_t seed) {
  if (g.det() != 1) throw std::invalid_argument("lebesgue_invariance_check: determinant is not one");
  if (samples == 0) throw std::invalid_argument("lebesgue_invariance_check: needs samples");
  // g^-1 = [[d,-b],[-c,a]] maps box corners to the preimage corners.
  Box cover = box;
  for (double x : {box.x0, box.x1})
    for (double y : {box.y0, box.y1}) {
      const double px = static_cast<double>(g.d) * x - static_cast<double>(g.b) * y;
      const double py = -static_cast<double>(g.c) * x + static_cast<double>(g.a) * y;
      cover.x0 = std::min(cover.x0, px);
      cover.x1 = std::max(cover.x1, px);
      cover.y0 = std::min(cover.y0, py);
      cover.y1 = std::max(cover.y1, py);
    }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ux(cover.x0, cover.x1), uy(cover.y0, cover.y1);
  std::size_t in_box = 0, in_pre = 0;
  for (std::size_t i = 0; i < samples; ++i) {
    const double x = ux(rng), y = uy(rng);
    if (box.contains(x, y)) ++in_box;
    const double gx = static_cast<double>(g.a) * x + static_cast<double>(g.b) * y;
    const double gy = static_cast<double>(g.c) * x + static_cast<double>(g.d) * y;
    if (box.contains(gx, gy)) ++in_pre;
  }
  if (in_box == 0) return in_pre == 0 ? 0.0 : 1.0;
  return std::abs(static_cast<double>(in_box) - static_cast<double>(in_pre)) / static_cast<double>(in_box);
}

}  // namespace lamkit::sl2z
