#pragma once

// Translation and half-translation surfaces built from polygons, the linear
// SL(2,R) action, saddle connections and the short-connection graph.
//
// Polygons are listed counterclockwise. Edge i of a polygon runs from vertex
// i to vertex i+1. Glued edges are matched start-to-end so the surface stays
// oriented: for a translation gluing the two edge vectors are opposite, for a
// half-translation gluing (rotation by pi) they are equal. Every polygon
// vertex is a singular or marked point; saddle connections run between such
// points.

#include "lamkit/scalar.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <map>
#include <memory>
#include <numbers>
#include <optional>
#include <queue>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace lamkit {

class SurfaceError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

template <class T>
struct Vec2 {
  T x{0};
  T y{0};

  friend Vec2 operator+(const Vec2& a, const Vec2& b) { return {a.x + b.x, a.y + b.y}; }
  friend Vec2 operator-(const Vec2& a, const Vec2& b) { return {a.x - b.x, a.y - b.y}; }
  friend Vec2 operator-(const Vec2& a) { return {T(0) - a.x, T(0) - a.y}; }
  friend Vec2 operator*(int s, const Vec2& a) { return s > 0 ? a : -a; }
  friend bool operator==(const Vec2&, const Vec2&) = default;
};

template <class T>
T cross(const Vec2<T>& a, const Vec2<T>& b) {
  return a.x * b.y - a.y * b.x;
}
template <class T>
T dot(const Vec2<T>& a, const Vec2<T>& b) {
  return a.x * b.x + a.y * b.y;
}
template <class T>
T norm2(const Vec2<T>& a) {
  return dot(a, a);
}

template <class T>
struct Mat2 {
  T a{1}, b{0}, c{0}, d{1};

  static Mat2 identity() { return {T(1), T(0), T(0), T(1)}; }
  T det() const { return a * d - b * c; }
  Vec2<T> operator()(const Vec2<T>& v) const { return {a * v.x + b * v.y, c * v.x + d * v.y}; }
  friend Mat2 operator*(const Mat2& m, const Mat2& n) {
    return {m.a * n.a + m.b * n.c, m.a * n.b + m.b * n.d, m.c * n.a + m.d * n.c, m.c * n.b + m.d * n.d};
  }
  friend bool operator==(const Mat2&, const Mat2&) = default;
};

inline Mat2<double> geodesic_flow(double t) { return {std::exp(t), 0.0, 0.0, std::exp(-t)}; }
/// h_t = [[1,0],[t,1]]; fixes vertical vectors.
inline Mat2<double> horocycle_flow(double t) { return {1.0, 0.0, t, 1.0}; }

enum class GlueKind { Translation, HalfTranslation };

inline const char* glue_kind_name(GlueKind k) {
  return k == GlueKind::Translation ? "translation" : "half-translation";
}

struct EdgeRef {
  int polygon = 0;
  int edge = 0;

  friend auto operator<=>(const EdgeRef&, const EdgeRef&) = default;
};

struct Gluing {
  EdgeRef first;
  EdgeRef second;
  GlueKind kind = GlueKind::Translation;
};

/// Affine chart change x -> sign*x + shift.
template <class T>
struct Chart {
  int sign = 1;
  Vec2<T> shift;

  Vec2<T> operator()(const Vec2<T>& x) const { return sign * x + shift; }
  /// this after `inner`.
  Chart after(const Chart& inner) const { return {sign * inner.sign, sign * inner.shift + shift}; }
  Chart inverse() const { return {sign, -(sign * shift)}; }
};

template <class T>
struct Triangle {
  int polygon = 0;
  std::array<int, 3> corner{};  // polygon vertex indices
  std::array<Vec2<T>, 3> pts;
  /// Across edge k (pts[k] -> pts[k+1]): neighbour triangle, its edge index
  /// and the chart taking neighbour coordinates to ours.
  std::array<int, 3> nb_tri{};
  std::array<int, 3> nb_edge{};
  std::array<Chart<T>, 3> nb_chart{};
};

struct SingularPoint {
  /// Cone angle is k*pi.
  int angle_pi = 0;
  /// (polygon, vertex) pairs identified to this point.
  std::vector<std::pair<int, int>> corners;
};

template <class T>
class FlatSurface {
 public:
  FlatSurface() = default;
  FlatSurface(std::vector<std::vector<Vec2<T>>> polygons, std::vector<Gluing> gluings)
      : polygons_(std::move(polygons)), gluings_(std::move(gluings)) {
    build();
  }

  const std::vector<std::vector<Vec2<T>>>& polygons() const { return polygons_; }
  const std::vector<Gluing>& gluings() const { return gluings_; }
  const std::vector<SingularPoint>& points() const { return points_; }
  const std::vector<Triangle<T>>& triangles() const { return triangles_; }
  int point_of(int polygon, int vertex) const {
    return vertex_point_[static_cast<std::size_t>(polygon)][static_cast<std::size_t>(vertex)];
  }
  bool translation() const {
    return std::all_of(gluings_.begin(), gluings_.end(),
                       [](const Gluing& g) { return g.kind == GlueKind::Translation; });
  }
  T area() const {
    T a(0);
    for (const auto& p : polygons_) a += twice_area(p);
    return a / T(2);
  }
  int genus() const {
    int e = static_cast<int>(gluings_.size());
    int chi = static_cast<int>(points_.size()) - e + static_cast<int>(polygons_.size());
    return (2 - chi) / 2;
  }
  /// Points of cone angle pi (simple poles) act as punctures.
  int poles() const {
    return static_cast<int>(std::count_if(points_.begin(), points_.end(),
                                          [](const SingularPoint& p) { return p.angle_pi == 1; }));
  }

  /// Image under a linear map of determinant one or a positive similarity;
  /// gluings are kept.
  FlatSurface transformed(const Mat2<T>& m) const {
    auto polys = polygons_;
    for (auto& p : polys)
      for (auto& v : p) v = m(v);
    return FlatSurface(std::move(polys), gluings_);
  }

 private:
  static T twice_area(const std::vector<Vec2<T>>& p) {
    T a(0);
    for (std::size_t i = 0; i < p.size(); ++i) a += cross(p[i], p[(i + 1) % p.size()]);
    return a;
  }

  Vec2<T> vertex(int poly, int i) const {
    const auto& p = polygons_[static_cast<std::size_t>(poly)];
    const auto n = static_cast<int>(p.size());
    return p[static_cast<std::size_t>(((i % n) + n) % n)];
  }
  Vec2<T> edge_vector(EdgeRef e) const { return vertex(e.polygon, e.edge + 1) - vertex(e.polygon, e.edge); }

  void build() {
    if (polygons_.empty()) throw SurfaceError("surface has no polygons");
    std::size_t edges = 0;
    for (std::size_t p = 0; p < polygons_.size(); ++p) {
      if (polygons_[p].size() < 3) throw SurfaceError("polygon " + std::to_string(p) + " has fewer than 3 vertices");
      if (sign_of(twice_area(polygons_[p])) <= 0)
        throw SurfaceError("polygon " + std::to_string(p) + " has nonpositive area or is clockwise");
      edges += polygons_[p].size();
    }
    // Perfect matching of edges.
    partner_.assign(polygons_.size(), {});
    for (std::size_t p = 0; p < polygons_.size(); ++p)
      partner_[p].assign(polygons_[p].size(), {EdgeRef{-1, -1}, GlueKind::Translation});
    for (const auto& g : gluings_) {
      for (EdgeRef e : {g.first, g.second})
        if (e.polygon < 0 || e.polygon >= static_cast<int>(polygons_.size()) || e.edge < 0 ||
            e.edge >= static_cast<int>(polygons_[static_cast<std::size_t>(e.polygon)].size()))
          throw SurfaceError("gluing references a missing edge");
      auto& a = partner_[static_cast<std::size_t>(g.first.polygon)][static_cast<std::size_t>(g.first.edge)];
      auto& b = partner_[static_cast<std::size_t>(g.second.polygon)][static_cast<std::size_t>(g.second.edge)];
      if (a.first.polygon != -1 || b.first.polygon != -1 || g.first == g.second)
        throw SurfaceError("an edge is glued more than once");
      a = {g.second, g.kind};
      b = {g.first, g.kind};
      const Vec2<T> u = edge_vector(g.first);
      const Vec2<T> v = edge_vector(g.second);
      const Vec2<T> want = g.kind == GlueKind::Translation ? -u : u;
      if (!is_zero(v.x - want.x) || !is_zero(v.y - want.y))
        throw SurfaceError("glued edges (" + std::to_string(g.first.polygon) + "," +
                           std::to_string(g.first.edge) + ") and (" + std::to_string(g.second.polygon) +
                           "," + std::to_string(g.second.edge) + ") differ in length or direction");
    }
    if (gluings_.size() * 2 != edges) throw SurfaceError("edge pairing is not a perfect matching");
    build_points();
    triangulate();
  }

  // Corner (p,i) sits between edge i-1 and edge i. Turning counterclockwise
  // past edge i-1 lands in the corner at the start of its partner edge.
  void build_points() {
    vertex_point_.assign(polygons_.size(), {});
    for (std::size_t p = 0; p < polygons_.size(); ++p) vertex_point_[p].assign(polygons_[p].size(), -1);
    for (std::size_t p = 0; p < polygons_.size(); ++p)
      for (std::size_t i = 0; i < polygons_[p].size(); ++i) {
        if (vertex_point_[p][i] != -1) continue;
        SingularPoint pt;
        double angle = 0;
        int cp = static_cast<int>(p), ci = static_cast<int>(i);
        while (vertex_point_[static_cast<std::size_t>(cp)][static_cast<std::size_t>(ci)] == -1) {
          vertex_point_[static_cast<std::size_t>(cp)][static_cast<std::size_t>(ci)] = static_cast<int>(points_.size());
          pt.corners.emplace_back(cp, ci);
          const Vec2<T> out = vertex(cp, ci + 1) - vertex(cp, ci);
          const Vec2<T> in = vertex(cp, ci - 1) - vertex(cp, ci);
          // A straight corner may come out of atan2 as -pi (signed zero).
          const int turn = sign_of(cross(out, in));
          if (turn == 0)
            angle += sign_of(dot(out, in)) > 0 ? 0.0 : std::numbers::pi;
          else
            angle += std::atan2(to_double(cross(out, in)), to_double(dot(out, in))) + (turn < 0 ? 2 * std::numbers::pi : 0.0);
          const int n = static_cast<int>(polygons_[static_cast<std::size_t>(cp)].size());
          const EdgeRef prev{cp, (ci + n - 1) % n};
          const EdgeRef next = partner_[static_cast<std::size_t>(prev.polygon)][static_cast<std::size_t>(prev.edge)].first;
          cp = next.polygon;
          ci = next.edge;
        }
        const double k = angle / std::numbers::pi;
        pt.angle_pi = static_cast<int>(std::lround(k));
        if (std::abs(k - pt.angle_pi) > 1e-6 || pt.angle_pi < 1)
          throw SurfaceError("cone angle " + std::to_string(angle) + " is not a positive multiple of pi");
        points_.push_back(std::move(pt));
      }
  }

  void triangulate() {
    std::map<std::pair<int, int>, std::pair<int, int>> polygon_edge;  // (poly, edge) -> (tri, k)
    std::map<std::array<int, 3>, std::pair<int, int>> diagonal;       // (poly, a, b) -> (tri, k)
    for (std::size_t p = 0; p < polygons_.size(); ++p) {
      const auto& poly = polygons_[p];
      const int n = static_cast<int>(poly.size());
      std::vector<int> live(static_cast<std::size_t>(n));
      for (int i = 0; i < n; ++i) live[static_cast<std::size_t>(i)] = i;
      auto add = [&](int a, int b, int c) {
        Triangle<T> t;
        t.polygon = static_cast<int>(p);
        t.corner = {a, b, c};
        t.pts = {poly[static_cast<std::size_t>(a)], poly[static_cast<std::size_t>(b)], poly[static_cast<std::size_t>(c)]};
        const int id = static_cast<int>(triangles_.size());
        triangles_.push_back(t);
        const std::array<int, 3> v{a, b, c};
        for (int k = 0; k < 3; ++k) {
          const int s = v[static_cast<std::size_t>(k)], e = v[static_cast<std::size_t>((k + 1) % 3)];
          if ((s + 1) % n == e) {
            polygon_edge[{static_cast<int>(p), s}] = {id, k};
          } else {
            auto key = std::array<int, 3>{static_cast<int>(p), std::min(s, e), std::max(s, e)};
            auto it = diagonal.find(key);
            if (it == diagonal.end()) {
              diagonal[key] = {id, k};
            } else {
              auto [o, ok] = it->second;
              link(id, k, o, ok, Chart<T>{1, {}});
            }
          }
        }
      };
      while (live.size() > 3) {
        const std::size_t m = live.size();
        bool clipped = false;
        for (std::size_t j = 0; j < m && !clipped; ++j) {
          const int a = live[(j + m - 1) % m], b = live[j], c = live[(j + 1) % m];
          const auto& A = poly[static_cast<std::size_t>(a)];
          const auto& B = poly[static_cast<std::size_t>(b)];
          const auto& C = poly[static_cast<std::size_t>(c)];
          if (sign_of(cross(B - A, C - B)) <= 0) continue;
          bool empty = true;
          for (int q : live) {
            if (q == a || q == b || q == c) continue;
            const auto& Q = poly[static_cast<std::size_t>(q)];
            if (sign_of(cross(B - A, Q - A)) >= 0 && sign_of(cross(C - B, Q - B)) >= 0 &&
                sign_of(cross(A - C, Q - C)) >= 0) {
              empty = false;
              break;
            }
          }
          if (!empty) continue;
          add(a, b, c);
          live.erase(live.begin() + static_cast<std::ptrdiff_t>(j));
          clipped = true;
        }
        if (!clipped) throw SurfaceError("polygon " + std::to_string(p) + " is not simple");
      }
      if (sign_of(cross(poly[static_cast<std::size_t>(live[1])] - poly[static_cast<std::size_t>(live[0])],
                        poly[static_cast<std::size_t>(live[2])] - poly[static_cast<std::size_t>(live[1])])) <= 0)
        throw SurfaceError("polygon " + std::to_string(p) + " degenerates under triangulation");
      add(live[0], live[1], live[2]);
    }
    for (const auto& g : gluings_) {
      auto [t1, k1] = polygon_edge.at({g.first.polygon, g.first.edge});
      auto [t2, k2] = polygon_edge.at({g.second.polygon, g.second.edge});
      // Start of the first edge meets the end of the second.
      const Vec2<T> p0 = vertex(g.first.polygon, g.first.edge);
      const Vec2<T> q1 = vertex(g.second.polygon, g.second.edge + 1);
      Chart<T> to_first = g.kind == GlueKind::Translation ? Chart<T>{1, p0 - q1} : Chart<T>{-1, p0 + q1};
      link(t1, k1, t2, k2, to_first);
    }
  }

  // `chart` maps t2 coordinates to t1 coordinates.
  void link(int t1, int k1, int t2, int k2, Chart<T> chart) {
    auto& a = triangles_[static_cast<std::size_t>(t1)];
    auto& b = triangles_[static_cast<std::size_t>(t2)];
    a.nb_tri[static_cast<std::size_t>(k1)] = t2;
    a.nb_edge[static_cast<std::size_t>(k1)] = k2;
    a.nb_chart[static_cast<std::size_t>(k1)] = chart;
    b.nb_tri[static_cast<std::size_t>(k2)] = t1;
    b.nb_edge[static_cast<std::size_t>(k2)] = k1;
    b.nb_chart[static_cast<std::size_t>(k2)] = chart.inverse();
  }

  std::vector<std::vector<Vec2<T>>> polygons_;
  std::vector<Gluing> gluings_;
  std::vector<std::vector<std::pair<EdgeRef, GlueKind>>> partner_;
  std::vector<std::vector<int>> vertex_point_;
  std::vector<SingularPoint> points_;
  std::vector<Triangle<T>> triangles_;
};

template <class T>
FlatSurface<double> to_double_surface(const FlatSurface<T>& s) {
  std::vector<std::vector<Vec2<double>>> polys;
  for (const auto& p : s.polygons()) {
    polys.emplace_back();
    for (const auto& v : p) polys.back().push_back({to_double(v.x), to_double(v.y)});
  }
  return FlatSurface<double>(std::move(polys), s.gluings());
}

/// Rescales to area one and rotates so that `direction` becomes vertical.
inline FlatSurface<double> normalize_with_vertical(const FlatSurface<double>& s, Vec2<double> direction) {
  const double len = std::sqrt(norm2(direction));
  const double c = direction.y / len, sn = direction.x / len;
  // Rotation taking (sn, c) to (0, 1).
  const Mat2<double> rot{c, -sn, sn, c};
  const double k = 1.0 / std::sqrt(s.area());
  const Mat2<double> scale{k, 0.0, 0.0, k};
  return s.transformed(rot * scale);
}

// ---------------------------------------------------------------------------
// Saddle connections.

/// One crossing of a triangle by a developed segment: the chart taking the
/// triangle's coordinates into the developing plane.
template <class T>
struct PathPiece {
  int triangle = 0;
  Chart<T> chart;
};

template <class T>
struct SaddleConnection {
  /// Holonomy in the base surface's coordinates.
  Vec2<T> base_holonomy;
  /// Holonomy after the state's accumulated matrix.
  Vec2<T> holonomy;
  double length = 0;
  int start_point = 0;
  int end_point = 0;
  bool horizontal = false;
  /// Start corner and the developing chart pieces, starting triangle first.
  int start_triangle = 0;
  int start_vertex = 0;
  std::vector<PathPiece<T>> path;
};

namespace detail {

/// Region of holonomy vectors relevant to a search, as seen from the source.
template <class T>
struct SearchRegion {
  std::function<bool(const Vec2<T>&)> contains;
  /// May the closed segment a-b meet the region?
  std::function<bool(const Vec2<T>&, const Vec2<T>&)> meets;
};

template <class T>
T segment_distance2(const Vec2<T>& a, const Vec2<T>& b) {
  const Vec2<T> d = b - a;
  const T dd = norm2(d);
  if (sign_of(dd) == 0) return norm2(a);
  const T t = T(0) - dot(a, d);
  if (sign_of(t) <= 0) return norm2(a);
  if (sign_of(t - dd) >= 0) return norm2(b);
  const Vec2<T> p{a.x + d.x * t / dd, a.y + d.y * t / dd};
  return norm2(p);
}

/// Holonomies v with |M v| <= L.
template <class T>
SearchRegion<T> disk_region(Mat2<T> m, T radius2) {
  const T slack = ScalarTraits<T>::exact ? T(0) : T(1e-9);
  return {[m, radius2, slack](const Vec2<T>& v) { return sign_of(norm2(m(v)) - radius2 - slack) <= 0; },
          [m, radius2, slack](const Vec2<T>& a, const Vec2<T>& b) {
            return sign_of(segment_distance2(m(a), m(b)) - radius2 - slack) <= 0;
          }};
}

/// Holonomies with |x| <= hx and |y| <= hy.
inline SearchRegion<double> box_region(double hx, double hy) {
  const double e = 1e-9;
  return {[=](const Vec2<double>& v) { return std::abs(v.x) <= hx + e && std::abs(v.y) <= hy + e; },
          [=](const Vec2<double>& a, const Vec2<double>& b) {
            // Liang-Barsky clip of the segment against the box.
            double t0 = 0, t1 = 1;
            const double dx = b.x - a.x, dy = b.y - a.y;
            const double p[4] = {-dx, dx, -dy, dy};
            const double q[4] = {a.x + hx + e, hx + e - a.x, a.y + hy + e, hy + e - a.y};
            for (int i = 0; i < 4; ++i) {
              if (p[i] == 0) {
                if (q[i] < 0) return false;
              } else {
                const double r = q[i] / p[i];
                if (p[i] < 0)
                  t0 = std::max(t0, r);
                else
                  t1 = std::min(t1, r);
              }
            }
            return t0 <= t1;
          }};
}

template <class T>
struct DirectedHit {
  int start_tri, start_vertex;
  Vec2<T> dir;  // in start triangle coordinates
  int end_tri, end_vertex;
  Vec2<T> rev_dir;  // reversed direction in end triangle coordinates
  std::vector<PathPiece<T>> path;
};

template <class T>
class Developer {
 public:
  Developer(const FlatSurface<T>& s, SearchRegion<T> region) : s_(s), region_(std::move(region)) {}

  std::vector<DirectedHit<T>> run() {
    const auto& tris = s_.triangles();
    for (int t = 0; t < static_cast<int>(tris.size()); ++t)
      for (int k = 0; k < 3; ++k) from_corner(t, k);
    return std::move(hits_);
  }

 private:
  const Triangle<T>& tri(int t) const { return s_.triangles()[static_cast<std::size_t>(t)]; }

  void from_corner(int t, int k) {
    const auto& tr = tri(t);
    src_tri_ = t;
    src_vertex_ = k;
    src_ = tr.pts[static_cast<std::size_t>(k)];
    const Vec2<T> a = tr.pts[static_cast<std::size_t>((k + 1) % 3)];
    const Vec2<T> b = tr.pts[static_cast<std::size_t>((k + 2) % 3)];
    const Vec2<T> lo = a - src_;
    const Vec2<T> hi = b - src_;
    path_.assign(1, PathPiece<T>{t, Chart<T>{1, {}}});
    // The wedge is half-open: its first side is reported here, the second
    // belongs to the next corner around the point.
    if (region_.contains(lo)) record(lo, t, (k + 1) % 3, Chart<T>{1, {}});
    descend(t, (k + 1) % 3, Chart<T>{1, {}}, lo, hi);
  }

  void record(const Vec2<T>& d, int end_tri, int end_vertex, const Chart<T>& chart) {
    hits_.push_back({src_tri_, src_vertex_, d, end_tri, end_vertex, chart.sign * (-d), path_});
  }

  // Rays from the source with directions strictly between lo and hi leave
  // triangle t (developed by `chart`) through its edge j.
  void descend(int t, int j, const Chart<T>& chart, const Vec2<T>& lo, const Vec2<T>& hi) {
    const auto& tr = tri(t);
    const Vec2<T> p = chart(tr.pts[static_cast<std::size_t>(j)]) - src_;
    const Vec2<T> q = chart(tr.pts[static_cast<std::size_t>((j + 1) % 3)]) - src_;
    if (!region_.meets(p, q)) return;
    const int t2 = tr.nb_tri[static_cast<std::size_t>(j)];
    const int j2 = tr.nb_edge[static_cast<std::size_t>(j)];
    const Chart<T> c2 = chart.after(tr.nb_chart[static_cast<std::size_t>(j)]);
    const auto& tr2 = tri(t2);
    const int xv = (j2 + 2) % 3;
    const Vec2<T> x = c2(tr2.pts[static_cast<std::size_t>(xv)]) - src_;
    path_.push_back({t2, c2});
    const int after_lo = sign_of(cross(lo, x));
    const int before_hi = sign_of(cross(x, hi));
    if (after_lo > 0 && before_hi > 0) {
      if (region_.contains(x)) record(x, t2, xv, c2);
      descend(t2, (j2 + 1) % 3, c2, lo, x);
      descend(t2, (j2 + 2) % 3, c2, x, hi);
    } else if (after_lo <= 0) {
      descend(t2, (j2 + 2) % 3, c2, lo, hi);
    } else {
      descend(t2, (j2 + 1) % 3, c2, lo, hi);
    }
    path_.pop_back();
  }

  const FlatSurface<T>& s_;
  SearchRegion<T> region_;
  std::vector<DirectedHit<T>> hits_;
  std::vector<PathPiece<T>> path_;
  int src_tri_ = 0, src_vertex_ = 0;
  Vec2<T> src_;
};

/// Moves a (triangle, vertex, direction) key so the direction lies in the
/// half-open corner [first side, second side).
template <class T>
std::tuple<int, int, Vec2<T>> canonical_corner(const FlatSurface<T>& s, int t, int k, Vec2<T> dir) {
  const auto& tr = s.triangles()[static_cast<std::size_t>(t)];
  const Vec2<T> second = tr.pts[static_cast<std::size_t>((k + 2) % 3)] - tr.pts[static_cast<std::size_t>(k)];
  if (sign_of(cross(second, dir)) == 0 && sign_of(dot(second, dir)) > 0) {
    const int e = (k + 2) % 3;  // edge from pts[k+2] to pts[k]
    const int t2 = tr.nb_tri[static_cast<std::size_t>(e)];
    const int e2 = tr.nb_edge[static_cast<std::size_t>(e)];
    const int sign = tr.nb_chart[static_cast<std::size_t>(e)].sign;
    return {t2, e2, sign * dir};
  }
  return {t, k, dir};
}

template <class T>
bool key_less(const std::tuple<int, int, Vec2<T>>& a, const std::tuple<int, int, Vec2<T>>& b) {
  if (std::get<0>(a) != std::get<0>(b)) return std::get<0>(a) < std::get<0>(b);
  if (std::get<1>(a) != std::get<1>(b)) return std::get<1>(a) < std::get<1>(b);
  // Same corner: earlier counterclockwise direction first.
  return sign_of(cross(std::get<2>(a), std::get<2>(b))) > 0;
}

}  // namespace detail

/// Saddle connections of `s` whose holonomy lies in `region`, one per
/// unoriented connection.
template <class T>
std::vector<SaddleConnection<T>> enumerate_connections(const FlatSurface<T>& s, const Mat2<T>& applied,
                                                       const detail::SearchRegion<T>& region) {
  detail::Developer<T> dev(s, region);
  auto hits = dev.run();
  std::vector<SaddleConnection<T>> out;
  for (auto& h : hits) {
    auto key = detail::canonical_corner(s, h.start_tri, h.start_vertex, h.dir);
    auto rev = detail::canonical_corner(s, h.end_tri, h.end_vertex, h.rev_dir);
    if (detail::key_less(rev, key)) continue;
    SaddleConnection<T> c;
    c.base_holonomy = h.dir;
    c.holonomy = applied(h.dir);
    c.length = std::sqrt(to_double(norm2(c.holonomy)));
    const auto& st = s.triangles()[static_cast<std::size_t>(h.start_tri)];
    const auto& et = s.triangles()[static_cast<std::size_t>(h.end_tri)];
    c.start_point = s.point_of(st.polygon, st.corner[static_cast<std::size_t>(h.start_vertex)]);
    c.end_point = s.point_of(et.polygon, et.corner[static_cast<std::size_t>(h.end_vertex)]);
    c.horizontal = is_zero(c.holonomy.y);
    c.start_triangle = h.start_tri;
    c.start_vertex = h.start_vertex;
    c.path = std::move(h.path);
    out.push_back(std::move(c));
  }
  std::sort(out.begin(), out.end(), [](const SaddleConnection<T>& a, const SaddleConnection<T>& b) {
    if (a.length != b.length) return a.length < b.length;
    if (a.holonomy.x != b.holonomy.x) return a.holonomy.x < b.holonomy.x;
    if (a.holonomy.y != b.holonomy.y) return a.holonomy.y < b.holonomy.y;
    if (a.start_triangle != b.start_triangle) return a.start_triangle < b.start_triangle;
    return a.start_vertex < b.start_vertex;
  });
  return out;
}

// ---------------------------------------------------------------------------
// Flow states.

template <class T>
struct FlowState {
  std::shared_ptr<const FlatSurface<T>> base;
  Mat2<T> applied = Mat2<T>::identity();

  explicit FlowState(FlatSurface<T> s) : base(std::make_shared<const FlatSurface<T>>(std::move(s))) {}
  FlowState(std::shared_ptr<const FlatSurface<T>> b, Mat2<T> m) : base(std::move(b)), applied(m) {}

  T area() const { return base->area() * applied.det(); }
};

template <class T>
bool unimodular(const Mat2<T>& m) {
  if constexpr (ScalarTraits<T>::exact)
    return m.det() == T(1);
  else
    return std::abs(to_double(m.det()) - 1.0) <= 1e-12;
}

template <class T>
FlowState<T> apply_matrix(const FlowState<T>& state, const Mat2<T>& m) {
  if (!unimodular(m)) throw std::invalid_argument("apply_matrix: determinant is not one");
  return FlowState<T>(state.base, m * state.applied);
}

/// All saddle connections of length <= L, up to orientation.
template <class T>
std::vector<SaddleConnection<T>> saddle_connections(const FlowState<T>& state, T length) {
  if (sign_of(length) <= 0) throw std::invalid_argument("saddle_connections: length bound must be positive");
  return enumerate_connections(*state.base, state.applied,
                               detail::disk_region(state.applied, T(length * length)));
}

// ---------------------------------------------------------------------------
// Disjointness.

namespace detail {

template <class T>
bool same_point(const Vec2<T>& a, const Vec2<T>& b) {
  return is_zero(a.x - b.x) && is_zero(a.y - b.y);
}

// Do two segments, given in one triangle's coordinates, share a point inside
// the closed triangle other than one of its vertices?
template <class T>
bool pieces_meet(const Triangle<T>& tr, Vec2<T> a0, Vec2<T> a1, Vec2<T> b0, Vec2<T> b1) {
  const Vec2<T> da = a1 - a0, db = b1 - b0;
  const T den = cross(da, db);
  auto inside = [&tr](const Vec2<T>& p) {
    for (int k = 0; k < 3; ++k)
      if (sign_of(cross(tr.pts[static_cast<std::size_t>((k + 1) % 3)] - tr.pts[static_cast<std::size_t>(k)],
                        p - tr.pts[static_cast<std::size_t>(k)])) < 0)
        return false;
    for (const auto& v : tr.pts)
      if (same_point(p, v)) return false;
    return true;
  };
  if (sign_of(den) == 0) {
    if (sign_of(cross(da, b0 - a0)) != 0) return false;
    // Collinear: overlap inside the triangle means the same geodesic.
    const T la = dot(da, da);
    T s0 = dot(b0 - a0, da) / la, s1 = dot(b1 - a0, da) / la;
    if (s1 < s0) std::swap(s0, s1);
    T lo = s0 > T(0) ? s0 : T(0);
    T hi = s1 < T(1) ? s1 : T(1);
    if (sign_of(hi - lo) < 0) return false;
    const T mid = (lo + hi) / T(2);
    return inside(Vec2<T>{a0.x + da.x * mid, a0.y + da.y * mid});
  }
  const T s = cross(b0 - a0, db) / den;
  const T u = cross(b0 - a0, da) / den;
  if (sign_of(s) < 0 || sign_of(s - T(1)) > 0 || sign_of(u) < 0 || sign_of(u - T(1)) > 0) return false;
  return inside(Vec2<T>{a0.x + da.x * s, a0.y + da.y * s});
}

}  // namespace detail

/// True when the open segments of the two connections do not meet.
template <class T>
bool connections_disjoint(const FlatSurface<T>& s, const SaddleConnection<T>& a, const SaddleConnection<T>& b) {
  for (const auto& pa : a.path)
    for (const auto& pb : b.path) {
      if (pa.triangle != pb.triangle) continue;
      const auto& tr = s.triangles()[static_cast<std::size_t>(pa.triangle)];
      // Bring both segments into the triangle's own coordinates.
      const auto ia = pa.chart.inverse();
      const auto ib = pb.chart.inverse();
      const auto& sa = s.triangles()[static_cast<std::size_t>(a.start_triangle)].pts[static_cast<std::size_t>(a.start_vertex)];
      const auto& sb = s.triangles()[static_cast<std::size_t>(b.start_triangle)].pts[static_cast<std::size_t>(b.start_vertex)];
      if (detail::pieces_meet(tr, ia(sa), ia(sa + a.base_holonomy), ib(sb), ib(sb + b.base_holonomy)))
        return false;
    }
  return true;
}

/// Largest number of pairwise disjoint connections on any surface of this
/// type: the edge count of a triangulation by saddle connections.
template <class T>
int disjointness_cap(const FlatSurface<T>& s) {
  return 6 * s.genus() - 6 + 3 * static_cast<int>(s.points().size());
}

struct AlphaResult {
  bool bounded = false;
  double value = 0;
  /// Indices into the connection list of a minimizing disjoint set.
  std::vector<int> witness;
};

namespace detail {

inline bool extend_independent(const std::vector<std::vector<bool>>& meet, std::vector<int>& chosen,
                               int next, int n, int k) {
  if (static_cast<int>(chosen.size()) == k) return true;
  if (n - next < k - static_cast<int>(chosen.size())) return false;
  for (int i = next; i < n; ++i) {
    bool ok = true;
    for (int c : chosen)
      if (meet[static_cast<std::size_t>(c)][static_cast<std::size_t>(i)]) {
        ok = false;
        break;
      }
    if (!ok) continue;
    chosen.push_back(i);
    if (extend_independent(meet, chosen, i + 1, n, k)) return true;
    chosen.pop_back();
  }
  return false;
}

}  // namespace detail

/// alpha_k: least L such that the connections of length <= L contain k
/// pairwise disjoint ones. Searches connections up to `cap_length`.
template <class T>
AlphaResult disjoint_system_alpha(const FlowState<T>& state, int k, T cap_length, int cap = -1) {
  if (cap < 0) cap = disjointness_cap(*state.base);
  if (k < 1 || k > cap)
    throw std::invalid_argument("disjoint_system_alpha: k must lie in [1, " + std::to_string(cap) + "]");
  const auto conns = saddle_connections(state, cap_length);
  const int n = static_cast<int>(conns.size());
  std::vector<std::vector<bool>> meet(static_cast<std::size_t>(n), std::vector<bool>(static_cast<std::size_t>(n), false));
  AlphaResult out;
  for (int m = 0; m < n; ++m) {
    for (int i = 0; i < m; ++i) {
      const bool x = !connections_disjoint(*state.base, conns[static_cast<std::size_t>(i)], conns[static_cast<std::size_t>(m)]);
      meet[static_cast<std::size_t>(i)][static_cast<std::size_t>(m)] = x;
      meet[static_cast<std::size_t>(m)][static_cast<std::size_t>(i)] = x;
    }
    // Only a prefix ending at a length change can be the minimizer.
    if (m + 1 < n && conns[static_cast<std::size_t>(m + 1)].length == conns[static_cast<std::size_t>(m)].length) continue;
    std::vector<int> chosen;
    if (detail::extend_independent(meet, chosen, 0, m + 1, k)) {
      out.bounded = true;
      out.value = conns[static_cast<std::size_t>(m)].length;
      out.witness = chosen;
      return out;
    }
  }
  return out;
}

/// Size of a largest pairwise disjoint subfamily (exact search).
template <class T>
int max_disjoint_family(const FlatSurface<T>& s, const std::vector<SaddleConnection<T>>& conns) {
  const int n = static_cast<int>(conns.size());
  std::vector<std::vector<bool>> meet(static_cast<std::size_t>(n), std::vector<bool>(static_cast<std::size_t>(n), false));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < i; ++j) {
      const bool x = !connections_disjoint(s, conns[static_cast<std::size_t>(i)], conns[static_cast<std::size_t>(j)]);
      meet[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = x;
      meet[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] = x;
    }
  int best = 0;
  for (int k = 1; k <= n; ++k) {
    std::vector<int> chosen;
    if (!detail::extend_independent(meet, chosen, 0, n, k)) break;
    best = k;
  }
  return best;
}

// ---------------------------------------------------------------------------
// The short-connection graph.

struct KEpsilonResult {
  bool acyclic = true;
  bool connected = false;
  /// When not acyclic: indices of connections forming a closed circuit, in
  /// order, with the point each one starts from.
  std::vector<int> circuit;
  std::vector<int> circuit_points;
};

namespace detail {

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(static_cast<std::size_t>(n)) {
    for (int i = 0; i < n; ++i) parent[static_cast<std::size_t>(i)] = i;
  }
  int find(int x) {
    while (parent[static_cast<std::size_t>(x)] != x) {
      parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
      x = parent[static_cast<std::size_t>(x)];
    }
    return x;
  }
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent[static_cast<std::size_t>(a)] = b;
    return true;
  }
};

}  // namespace detail

/// Circuit test on the graph whose vertices are the singular points and
/// whose edges are the given connections of length <= eps.
template <class T>
KEpsilonResult short_graph(int points, const std::vector<SaddleConnection<T>>& conns, double eps) {
  KEpsilonResult out;
  detail::UnionFind uf(points);
  // Forest adjacency, for extracting the circuit.
  std::vector<std::vector<std::pair<int, int>>> adj(static_cast<std::size_t>(points));
  int components = points;
  for (int i = 0; i < static_cast<int>(conns.size()); ++i) {
    const auto& c = conns[static_cast<std::size_t>(i)];
    if (c.length > eps) continue;
    if (uf.unite(c.start_point, c.end_point)) {
      --components;
      adj[static_cast<std::size_t>(c.start_point)].emplace_back(c.end_point, i);
      adj[static_cast<std::size_t>(c.end_point)].emplace_back(c.start_point, i);
      continue;
    }
    out.acyclic = false;
    // Forest path from end back to start closes the circuit.
    std::vector<int> from(static_cast<std::size_t>(points), -2), via(static_cast<std::size_t>(points), -1);
    std::queue<int> q;
    q.push(c.end_point);
    from[static_cast<std::size_t>(c.end_point)] = -1;
    while (!q.empty()) {
      int u = q.front();
      q.pop();
      for (auto [v, e] : adj[static_cast<std::size_t>(u)])
        if (from[static_cast<std::size_t>(v)] == -2) {
          from[static_cast<std::size_t>(v)] = u;
          via[static_cast<std::size_t>(v)] = e;
          q.push(v);
        }
    }
    out.circuit.push_back(i);
    out.circuit_points.push_back(c.start_point);
    for (int v = c.start_point; v != c.end_point; v = from[static_cast<std::size_t>(v)]) {
      out.circuit.push_back(via[static_cast<std::size_t>(v)]);
      out.circuit_points.push_back(v);
    }
    // Reorder so that each entry starts where the previous one ended.
    std::rotate(out.circuit.begin(), out.circuit.begin() + 1, out.circuit.end());
    std::rotate(out.circuit_points.begin(), out.circuit_points.begin() + 1, out.circuit_points.end());
    std::reverse(out.circuit.begin(), out.circuit.end());
    std::reverse(out.circuit_points.begin(), out.circuit_points.end());
    out.circuit_points.clear();
    int at = c.end_point;
    for (int e : out.circuit) {
      out.circuit_points.push_back(at);
      const auto& ce = conns[static_cast<std::size_t>(e)];
      at = ce.start_point == at ? ce.end_point : ce.start_point;
    }
    return out;
  }
  out.connected = components == 1;
  return out;
}

/// Checks a circuit certificate: consecutive connections chain up, the
/// chain closes, and each has length <= eps.
template <class T>
bool verify_circuit(const std::vector<SaddleConnection<T>>& conns, const KEpsilonResult& r, double eps) {
  if (r.acyclic || r.circuit.empty() || r.circuit.size() != r.circuit_points.size()) return false;
  int at = r.circuit_points.front();
  std::vector<int> used = r.circuit;
  std::sort(used.begin(), used.end());
  if (std::adjacent_find(used.begin(), used.end()) != used.end()) return false;
  for (std::size_t i = 0; i < r.circuit.size(); ++i) {
    const auto& c = conns[static_cast<std::size_t>(r.circuit[i])];
    if (c.length > eps || r.circuit_points[i] != at) return false;
    if (c.start_point == at)
      at = c.end_point;
    else if (c.end_point == at)
      at = c.start_point;
    else
      return false;
  }
  return at == r.circuit_points.front();
}

template <class T>
KEpsilonResult in_K_epsilon(const FlowState<T>& state, double eps) {
  if (!(eps > 0)) throw std::invalid_argument("in_K_epsilon: epsilon must be positive");
  const auto conns = saddle_connections(state, T(eps));
  return short_graph(static_cast<int>(state.base->points().size()), conns, eps);
}

/// Largest grid value at which the short-connection graph has no circuit,
/// or 0 when there is none.
template <class T>
double systole_lower_bound(const FlowState<T>& state, std::vector<double> grid) {
  if (grid.empty()) return 0;
  std::sort(grid.begin(), grid.end());
  const auto conns = saddle_connections(state, T(grid.back()));
  double best = 0;
  for (double eps : grid)
    if (short_graph(static_cast<int>(state.base->points().size()), conns, eps).acyclic) best = eps;
  return best;
}

/// Length of the shortest closed chain of saddle connections among `conns`;
/// infinity when the list contains no circuit. On a flat surface every
/// closed geodesic is such a chain or parallel to one of equal length.
template <class T>
double shortest_circuit(int points, const std::vector<SaddleConnection<T>>& conns) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t e = 0; e < conns.size(); ++e) {
    const auto& c = conns[e];
    if (c.length >= best) continue;
    if (c.start_point == c.end_point) {
      best = c.length;
      continue;
    }
    // Shortest path between the ends avoiding e.
    std::vector<double> dist(static_cast<std::size_t>(points), std::numeric_limits<double>::infinity());
    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    dist[static_cast<std::size_t>(c.start_point)] = 0;
    pq.push({0, c.start_point});
    while (!pq.empty()) {
      auto [d, u] = pq.top();
      pq.pop();
      if (d > dist[static_cast<std::size_t>(u)]) continue;
      for (std::size_t f = 0; f < conns.size(); ++f) {
        if (f == e) continue;
        const auto& g = conns[f];
        int v = -1;
        if (g.start_point == u) v = g.end_point;
        else if (g.end_point == u) v = g.start_point;
        if (v < 0 || d + g.length >= dist[static_cast<std::size_t>(v)]) continue;
        dist[static_cast<std::size_t>(v)] = d + g.length;
        pq.push({dist[static_cast<std::size_t>(v)], v});
      }
    }
    best = std::min(best, c.length + dist[static_cast<std::size_t>(c.end_point)]);
  }
  return best;
}

// ---------------------------------------------------------------------------
// Horocycle averages.

struct HorocycleSample {
  double t = 0;
  double systole_bound = 0;
  bool in_k = false;
};

struct HorocycleReport {
  std::vector<HorocycleSample> series;
  double fraction = 0;
  std::size_t base_connections = 0;
};

inline std::vector<double> default_epsilon_grid() {
  std::vector<double> g;
  for (int i = 1; i <= 60; ++i) g.push_back(0.005 * i);
  return g;
}

/// Samples t = 0, dt, 2dt, ... below T (at least one sample). At each time
/// the certified systole bound of h_t * state is computed on `grid`; the
/// fraction counts samples whose bound is at least delta.
inline HorocycleReport horocycle_average(const FlowState<double>& state, double delta, double T, double dt,
                                         std::vector<double> grid = default_epsilon_grid()) {
  if (!(delta > 0) || !(T > 0) || !(dt > 0)) throw std::invalid_argument("horocycle_average: delta, T and dt must be positive");
  grid.push_back(delta);
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  const double emax = grid.back();
  const std::size_t n = std::max<std::size_t>(1, static_cast<std::size_t>(std::floor(T / dt + 1e-9)));
  // Every connection that is short at some sample time, found once on the
  // current state: |x| <= emax and |y| <= emax (1 + T).
  const Mat2<double> id = Mat2<double>::identity();
  const auto base = FlatSurface<double>(state.base->transformed(state.applied));
  auto conns = enumerate_connections(base, id, detail::box_region(emax, emax * (1 + T)));
  HorocycleReport rep;
  rep.base_connections = conns.size();
  const int points = static_cast<int>(base.points().size());
  std::size_t good = 0;
  std::vector<SaddleConnection<double>> active;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) * dt;
    const Mat2<double> h = horocycle_flow(t);
    active.clear();
    for (const auto& c : conns) {
      const Vec2<double> v = h(c.base_holonomy);
      const double len = std::sqrt(norm2(v));
      if (len > emax) continue;
      auto copy = c;
      copy.holonomy = v;
      copy.length = len;
      active.push_back(std::move(copy));
    }
    std::sort(active.begin(), active.end(),
              [](const auto& a, const auto& b) { return a.length < b.length; });
    // First circuit as connections are added by length.
    double first_circuit = std::numeric_limits<double>::infinity();
    detail::UnionFind uf(points);
    for (const auto& c : active)
      if (!uf.unite(c.start_point, c.end_point)) {
        first_circuit = c.length;
        break;
      }
    double bound = 0;
    for (double eps : grid)
      if (eps < first_circuit) bound = eps;
    const bool ok = bound >= delta;
    if (ok) ++good;
    rep.series.push_back({t, bound, ok});
  }
  rep.fraction = static_cast<double>(good) / static_cast<double>(n);
  return rep;
}

}  // namespace lamkit
