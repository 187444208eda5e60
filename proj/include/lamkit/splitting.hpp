#pragma once

// Splits, full splits and measure-driven full splitting sequences.
//
// Split convention. Let e be a large branch, oriented from v = end 0 to
// w = end 1, drawn horizontally with v on the left. The four branch ends
// around e are
//
//     a = (v,SR)  upper left          b = (w,SL)  upper right
//     d = (v,SL)  lower left          c = (w,SR)  lower right
//
// A right split keeps a and c as winners: v becomes a switch with large
// side a and small sides b (SL) and the diagonal e' (SR); w gets large side
// c and small sides d (SL) and e' (SR). A left split keeps b and d: v gets
// large side b, small sides e' (SL) and a (SR); w gets large side d, small
// sides e' (SL) and c (SR). Branch ids are kept, e becomes e'.

#include "lamkit/measures.hpp"

#include <array>
#include <deque>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace lamkit {

enum class SplitDirection { Right, Left };

inline char direction_letter(SplitDirection d) { return d == SplitDirection::Right ? 'R' : 'L'; }

class NotSplittable : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class NonGenericMeasure : public std::runtime_error {
 public:
  NonGenericMeasure(const std::string& what, int step = -1)
      : std::runtime_error(step >= 0 ? "step " + std::to_string(step) + ": " + what : what),
        step_(step) {}
  int step() const { return step_; }

 private:
  int step_;
};

class InternalInconsistency : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

struct Quad {
  int a = -1, b = -1, c = -1, d = -1;
};

/// The four branch ends around a large branch, as darts.
struct QuadDarts {
  Dart a, b, c, d;
};

inline QuadDarts quad_darts(const TrainTrack& track, int e) {
  if (e < 0 || e >= track.branch_count()) throw NotSplittable("branch index out of range");
  if (!track.is_large(e)) throw NotSplittable("branch " + std::to_string(e) + " is not large");
  const int v = track.branch(e).ends[0].switch_id;
  const int w = track.branch(e).ends[1].switch_id;
  return {track.occupant(v, Slot::SmallRight), track.occupant(w, Slot::SmallLeft),
          track.occupant(w, Slot::SmallRight), track.occupant(v, Slot::SmallLeft)};
}

struct SplitRecord {
  TrainTrack parent;
  TrainTrack child;
  int large_branch = -1;
  SplitDirection direction = SplitDirection::Right;
  Quad quad;
  /// child branch id of every parent branch; e goes to the diagonal.
  std::vector<int> correspondence;

  std::array<int, 2> winners() const {
    return direction == SplitDirection::Right ? std::array<int, 2>{quad.a, quad.c}
                                              : std::array<int, 2>{quad.b, quad.d};
  }
  std::array<int, 2> losers() const {
    return direction == SplitDirection::Right ? std::array<int, 2>{quad.b, quad.d}
                                              : std::array<int, 2>{quad.a, quad.c};
  }
};

inline SplitRecord split(const TrainTrack& track, int e, SplitDirection dir) {
  const QuadDarts q = quad_darts(track, e);
  const int v = track.branch(e).ends[0].switch_id;
  const int w = track.branch(e).ends[1].switch_id;
  const bool right = dir == SplitDirection::Right;

  auto branches = track.branches();
  auto place = [&](Dart d, HalfBranch to) {
    branches[static_cast<std::size_t>(d.branch)].ends[static_cast<std::size_t>(d.end)] = to;
  };
  if (right) {
    place(q.a, {v, Slot::Large});
    place(q.b, {v, Slot::SmallLeft});
    place(q.c, {w, Slot::Large});
    place(q.d, {w, Slot::SmallLeft});
    branches[static_cast<std::size_t>(e)].ends = {HalfBranch{v, Slot::SmallRight},
                                                 HalfBranch{w, Slot::SmallRight}};
  } else {
    place(q.a, {v, Slot::SmallRight});
    place(q.b, {v, Slot::Large});
    place(q.c, {w, Slot::SmallRight});
    place(q.d, {w, Slot::Large});
    branches[static_cast<std::size_t>(e)].ends = {HalfBranch{v, Slot::SmallLeft},
                                                 HalfBranch{w, Slot::SmallLeft}};
  }
  // The cusp of v faces the region left of e and the cusp of w the region on
  // the right. After a right split the two cusps trade switches.
  auto punctures = track.puncture_switches();
  if (right)
    for (int& s : punctures) s = s == v ? w : (s == w ? v : s);

  SplitRecord rec{track,
                  TrainTrack(track.surface(), track.switch_count(), std::move(branches),
                             std::move(punctures)),
                  e,
                  dir,
                  {q.a.branch, q.b.branch, q.c.branch, q.d.branch},
                  {}};
  rec.correspondence.resize(static_cast<std::size_t>(track.branch_count()));
  for (int b = 0; b < track.branch_count(); ++b) rec.correspondence[static_cast<std::size_t>(b)] = b;
  return rec;
}

/// Parent measure from a child measure: unchanged off e, and
/// nu(e) = nu(e') + nu(loser1) + nu(loser2).
template <class Scalar>
BranchWeights<Scalar> project_measure(const SplitRecord& rec, const BranchWeights<Scalar>& child) {
  if (child.track_tag != fingerprint(rec.child) ||
      static_cast<int>(child.weights.size()) != rec.child.branch_count())
    throw MeasureMismatch("project_measure: measure does not live on the child track");
  std::vector<Scalar> w(child.weights.size(), Scalar(0));
  for (std::size_t b = 0; b < w.size(); ++b)
    w[b] = child.weights[static_cast<std::size_t>(rec.correspondence[b])];
  const auto e = static_cast<std::size_t>(rec.large_branch);
  const auto l = rec.losers();
  w[e] = child.weights[static_cast<std::size_t>(rec.correspondence[e])] +
         child.weights[static_cast<std::size_t>(l[0])] + child.weights[static_cast<std::size_t>(l[1])];
  if (!satisfies_switch_conditions(rec.parent, w))
    throw InternalInconsistency("project_measure: parent switch conditions fail");
  return BranchWeights<Scalar>(rec.parent, child.kind, std::move(w));
}

template <class Scalar>
struct LiftResult {
  /// Empty when both directions are possible (tie on the diagonal).
  std::optional<SplitDirection> direction;
  std::optional<BranchWeights<Scalar>> child_measure;
  std::optional<SplitRecord> record;

  bool determined() const { return direction.has_value(); }
};

template <class Scalar>
LiftResult<Scalar> lift_measure(const TrainTrack& track, int e, const BranchWeights<Scalar>& mu) {
  const QuadDarts q = quad_darts(track, e);
  const auto& w = mu.weights;
  if (mu.track_tag != fingerprint(track) || static_cast<int>(w.size()) != track.branch_count())
    throw MeasureMismatch("lift_measure: measure does not live on this track");
  const Scalar diff = w[static_cast<std::size_t>(q.a.branch)] - w[static_cast<std::size_t>(q.b.branch)];
  LiftResult<Scalar> out;
  const int s = sign_of(diff);
  if (s == 0) return out;
  const SplitDirection dir = s > 0 ? SplitDirection::Right : SplitDirection::Left;
  auto rec = split(track, e, dir);
  std::vector<Scalar> cw = w;
  cw[static_cast<std::size_t>(e)] = s > 0 ? diff : Scalar(0) - diff;
  if (!satisfies_switch_conditions(rec.child, cw))
    throw InternalInconsistency("lift_measure: child switch conditions fail");
  out.direction = dir;
  out.child_measure = BranchWeights<Scalar>(rec.child, mu.kind, std::move(cw));
  out.record = std::move(rec);
  return out;
}

template <class Scalar>
struct FullSplitResult {
  TrainTrack child;
  BranchWeights<Scalar> measure;
  Scalar ratio;
  /// Split branches (parent's large branches, increasing) and directions.
  std::vector<int> large_branches;
  std::vector<SplitDirection> directions;
  std::vector<SplitRecord> records;

  std::string word() const {
    std::string s;
    for (auto d : directions) s += direction_letter(d);
    return s;
  }
};

namespace detail {

template <class Scalar>
FullSplitResult<Scalar> full_split_in_order(const TrainTrack& track, const BranchWeights<Scalar>& mu,
                                            const std::vector<int>& order, int step) {
  TrainTrack cur = track;
  BranchWeights<Scalar> m = mu;
  std::map<int, SplitDirection> chosen;
  std::vector<SplitRecord> records;
  for (int e : order) {
    auto lift = lift_measure(cur, e, m);
    if (!lift.determined())
      throw NonGenericMeasure("tie at large branch " + std::to_string(e), step);
    chosen[e] = *lift.direction;
    cur = lift.record->child;
    m = *lift.child_measure;
    records.push_back(std::move(*lift.record));
  }
  const Scalar before = mu.total();
  const Scalar after = m.total();
  if (sign_of(after) <= 0) throw NonGenericMeasure("measure vanished after full split", step);
  for (auto& x : m.weights) x = x / after;
  FullSplitResult<Scalar> out{cur, m, before / after, {}, {}, std::move(records)};
  for (auto& [e, d] : chosen) {
    out.large_branches.push_back(e);
    out.directions.push_back(d);
  }
  return out;
}

}  // namespace detail

/// Splits at every large branch of the parent once. The measure is returned
/// with total weight one and `ratio` = old total / new total.
template <class Scalar>
FullSplitResult<Scalar> full_split(const TrainTrack& track, const BranchWeights<Scalar>& mu,
                                   int step = -1) {
  const auto large = track.large_branches();
  auto out = detail::full_split_in_order(track, mu, large, step);
  if (large.size() >= 2) {
    // Large branches share no switch, so the order must not matter.
    std::vector<int> rev(large.rbegin(), large.rend());
    auto other = detail::full_split_in_order(track, mu, rev, step);
    if (!(other.child == out.child) || !(other.measure == out.measure))
      throw InternalInconsistency("full split depends on the order of large branches");
  }
  return out;
}

template <class Scalar>
struct SequenceStep {
  TrainTrack track;
  /// Directions of the full split that produced this step (empty at step 0).
  std::vector<int> large_branches;
  std::vector<SplitDirection> directions;
  BranchWeights<Scalar> measure;
  Scalar ratio;

  std::string word() const {
    std::string s;
    for (auto d : directions) s += direction_letter(d);
    return s;
  }
};

template <class Scalar>
struct SplittingSequence {
  std::vector<SequenceStep<Scalar>> steps;

  Scalar cumulative_expansion() const {
    Scalar p(1);
    for (std::size_t i = 1; i < steps.size(); ++i) p = p * steps[i].ratio;
    return p;
  }
};

template <class Scalar>
BranchWeights<Scalar> normalized(const BranchWeights<Scalar>& mu) {
  BranchWeights<Scalar> out = mu;
  const Scalar t = mu.total();
  if (sign_of(t) <= 0) throw std::invalid_argument("cannot normalize a zero measure");
  for (auto& x : out.weights) x = x / t;
  return out;
}

/// Appends `n` full splits to `seq`.
template <class Scalar>
void extend_sequence(SplittingSequence<Scalar>& seq, int n) {
  for (int k = 0; k < n; ++k) {
    const auto& last = seq.steps.back();
    const int step = static_cast<int>(seq.steps.size()) - 1;
    auto fs = full_split(last.track, last.measure, step);
    if (!satisfies_switch_conditions(fs.child, fs.measure.weights))
      throw InternalInconsistency("switch conditions fail after full split");
    if (sign_of(fs.ratio - Scalar(1)) < 0)
      throw InternalInconsistency("expansion ratio below one");
    seq.steps.push_back({std::move(fs.child), std::move(fs.large_branches),
                         std::move(fs.directions), std::move(fs.measure), std::move(fs.ratio)});
  }
}

template <class Scalar>
SplittingSequence<Scalar> drive_sequence(const TrainTrack& track, const BranchWeights<Scalar>& mu,
                                         int n) {
  require_valid(track, "drive_sequence");
  check_measure(track, mu);
  if (mu.kind != MeasureKind::Transverse) throw MeasureMismatch("drive_sequence needs a transverse measure");
  if (!is_positive(mu.weights))
    throw NonGenericMeasure("drive_sequence needs a strictly positive measure", 0);
  SplittingSequence<Scalar> seq;
  seq.steps.push_back({track, {}, {}, normalized(mu), Scalar(1)});
  extend_sequence(seq, n);
  return seq;
}

// ---------------------------------------------------------------------------
// Isomorphisms.

/// Orientation-preserving combinatorial isomorphism: switch s goes to
/// switch_map[s] with every slot kept; branch b goes to branch_map[b], with
/// its ends swapped when flipped[b].
struct TrackIsomorphism {
  std::vector<int> switch_map;
  std::vector<int> branch_map;
  std::vector<bool> flipped;

  TrackIsomorphism inverse() const {
    TrackIsomorphism inv;
    inv.switch_map.resize(switch_map.size());
    inv.branch_map.resize(branch_map.size());
    inv.flipped.resize(flipped.size());
    for (std::size_t s = 0; s < switch_map.size(); ++s)
      inv.switch_map[static_cast<std::size_t>(switch_map[s])] = static_cast<int>(s);
    for (std::size_t b = 0; b < branch_map.size(); ++b) {
      inv.branch_map[static_cast<std::size_t>(branch_map[b])] = static_cast<int>(b);
      inv.flipped[static_cast<std::size_t>(branch_map[b])] = flipped[b];
    }
    return inv;
  }

  /// this after `first`.
  TrackIsomorphism after(const TrackIsomorphism& first) const {
    TrackIsomorphism out;
    for (int s : first.switch_map) out.switch_map.push_back(switch_map[static_cast<std::size_t>(s)]);
    for (std::size_t b = 0; b < first.branch_map.size(); ++b) {
      const auto mid = static_cast<std::size_t>(first.branch_map[b]);
      out.branch_map.push_back(branch_map[mid]);
      out.flipped.push_back(first.flipped[b] != flipped[mid]);
    }
    return out;
  }

  template <class Scalar>
  std::vector<Scalar> push_weights(const std::vector<Scalar>& w) const {
    std::vector<Scalar> out(w.size(), Scalar(0));
    for (std::size_t b = 0; b < w.size(); ++b) out[static_cast<std::size_t>(branch_map[b])] = w[b];
    return out;
  }

  friend bool operator==(const TrackIsomorphism&, const TrackIsomorphism&) = default;
};

namespace detail {

// Region index holding each switch's cusp.
inline std::vector<int> cusp_regions(const TrainTrack& t, const std::vector<RegionDescriptor>& regions) {
  std::vector<int> out(static_cast<std::size_t>(t.switch_count()), -1);
  for (std::size_t r = 0; r < regions.size(); ++r)
    for (int s : regions[r].cusp_switches) out[static_cast<std::size_t>(s)] = static_cast<int>(r);
  return out;
}

// Extends switch 0 -> target to a full isomorphism, if possible.
inline std::optional<TrackIsomorphism> grow_isomorphism(const TrainTrack& t1, const TrainTrack& t2,
                                                        int target) {
  const auto ns = static_cast<std::size_t>(t1.switch_count());
  const auto nb = static_cast<std::size_t>(t1.branch_count());
  TrackIsomorphism iso{std::vector<int>(ns, -1), std::vector<int>(nb, -1), std::vector<bool>(nb, false)};
  std::vector<int> inv_switch(ns, -1);
  std::vector<int> inv_branch(nb, -1);
  std::deque<int> queue{0};
  iso.switch_map[0] = target;
  inv_switch[static_cast<std::size_t>(target)] = 0;
  while (!queue.empty()) {
    const int s = queue.front();
    queue.pop_front();
    const int s2 = iso.switch_map[static_cast<std::size_t>(s)];
    for (Slot slot : kAllSlots) {
      const Dart d1 = t1.occupant(s, slot);
      const Dart d2 = t2.occupant(s2, slot);
      const bool flip = d1.end != d2.end;
      auto& bm = iso.branch_map[static_cast<std::size_t>(d1.branch)];
      if (bm == -1) {
        if (inv_branch[static_cast<std::size_t>(d2.branch)] != -1) return std::nullopt;
        bm = d2.branch;
        inv_branch[static_cast<std::size_t>(d2.branch)] = d1.branch;
        iso.flipped[static_cast<std::size_t>(d1.branch)] = flip;
      } else if (bm != d2.branch || iso.flipped[static_cast<std::size_t>(d1.branch)] != flip) {
        return std::nullopt;
      }
      const HalfBranch o1 = t1.branch(d1.branch).ends[static_cast<std::size_t>(1 - d1.end)];
      const HalfBranch o2 = t2.branch(d2.branch).ends[static_cast<std::size_t>(1 - d2.end)];
      if (o1.slot != o2.slot) return std::nullopt;
      auto& sm = iso.switch_map[static_cast<std::size_t>(o1.switch_id)];
      if (sm == -1) {
        if (inv_switch[static_cast<std::size_t>(o2.switch_id)] != -1) return std::nullopt;
        sm = o2.switch_id;
        inv_switch[static_cast<std::size_t>(o2.switch_id)] = o1.switch_id;
        queue.push_back(o1.switch_id);
      } else if (sm != o2.switch_id) {
        return std::nullopt;
      }
    }
  }
  for (int m : iso.switch_map)
    if (m == -1) return std::nullopt;
  return iso;
}

}  // namespace detail

/// Every isomorphism t1 -> t2, ordered by the image of switch 0. Punctured
/// regions must go to punctured regions.
inline std::vector<TrackIsomorphism> all_isomorphisms(const TrainTrack& t1, const TrainTrack& t2) {
  std::vector<TrackIsomorphism> out;
  if (!(t1.surface() == t2.surface()) || t1.switch_count() != t2.switch_count() ||
      t1.branch_count() != t2.branch_count() || t1.switch_count() == 0 || !t1.slots_well_formed() ||
      !t2.slots_well_formed())
    return out;
  const auto r1 = compute_regions(t1);
  const auto r2 = compute_regions(t2);
  const auto c1 = detail::cusp_regions(t1, r1);
  const auto c2 = detail::cusp_regions(t2, r2);
  for (int target = 0; target < t2.switch_count(); ++target) {
    auto iso = detail::grow_isomorphism(t1, t2, target);
    if (!iso) continue;
    bool ok = true;
    for (std::size_t s = 0; s < c1.size() && ok; ++s) {
      const auto& a = r1[static_cast<std::size_t>(c1[s])];
      const auto& b = r2[static_cast<std::size_t>(c2[static_cast<std::size_t>(iso->switch_map[s])])];
      ok = a.punctured == b.punctured;
    }
    if (ok) out.push_back(std::move(*iso));
  }
  return out;
}

inline std::optional<TrackIsomorphism> tracks_isomorphic(const TrainTrack& t1, const TrainTrack& t2) {
  auto all = all_isomorphisms(t1, t2);
  if (all.empty()) return std::nullopt;
  return all.front();
}

/// Lexicographically least relabeling over all BFS starts; isomorphic tracks
/// have equal canonical forms.
inline std::vector<int> canonical_form(const TrainTrack& t) {
  std::vector<int> best;
  const auto regions = compute_regions(t);
  const auto cusp = detail::cusp_regions(t, regions);
  for (int start = 0; start < t.switch_count(); ++start) {
    std::vector<int> label(static_cast<std::size_t>(t.switch_count()), -1);
    std::vector<int> order{start};
    label[static_cast<std::size_t>(start)] = 0;
    std::vector<int> code;
    for (std::size_t i = 0; i < order.size(); ++i) {
      const int s = order[i];
      for (Slot slot : kAllSlots) {
        const Dart d = t.occupant(s, slot);
        const HalfBranch o = t.branch(d.branch).ends[static_cast<std::size_t>(1 - d.end)];
        auto& l = label[static_cast<std::size_t>(o.switch_id)];
        if (l == -1) {
          l = static_cast<int>(order.size());
          order.push_back(o.switch_id);
        }
        code.push_back(l);
        code.push_back(static_cast<int>(o.slot));
      }
      code.push_back(regions[static_cast<std::size_t>(cusp[static_cast<std::size_t>(s)])].punctured);
    }
    if (static_cast<int>(order.size()) != t.switch_count()) code.push_back(-1);
    if (best.empty() || code < best) best = std::move(code);
  }
  return best;
}

// ---------------------------------------------------------------------------
// Periodicity and cylinders.

struct Periodicity {
  int i = 0;
  int j = 0;
  TrackIsomorphism iso;
};

/// Checks that `iso` carries state i onto state j projectively.
template <class Scalar>
bool verify_periodicity(const SplittingSequence<Scalar>& seq, const Periodicity& p) {
  const auto& a = seq.steps[static_cast<std::size_t>(p.i)];
  const auto& b = seq.steps[static_cast<std::size_t>(p.j)];
  const auto pushed = p.iso.push_weights(a.measure.weights);
  // Both sides normalized: the positive multiple is total(b) / total(pushed).
  Scalar ta(0), tb(0);
  for (const auto& x : pushed) ta += x;
  for (const auto& x : b.measure.weights) tb += x;
  if (sign_of(ta) <= 0 || sign_of(tb) <= 0) return false;
  for (std::size_t k = 0; k < pushed.size(); ++k)
    if (!is_zero(pushed[k] * tb - b.measure.weights[k] * ta)) return false;
  // The isomorphism must respect the combinatorics.
  for (int br = 0; br < a.track.branch_count(); ++br) {
    const auto& e1 = a.track.branch(br).ends;
    const auto& e2 = b.track.branch(p.iso.branch_map[static_cast<std::size_t>(br)]).ends;
    for (std::size_t k = 0; k < 2; ++k) {
      const auto& src = e1[k];
      const auto& dst = e2[p.iso.flipped[static_cast<std::size_t>(br)] ? 1 - k : k];
      if (dst.slot != src.slot || dst.switch_id != p.iso.switch_map[static_cast<std::size_t>(src.switch_id)])
        return false;
    }
  }
  return true;
}

/// Least j, then least i < j, such that some isomorphism carries
/// (track_i, measure_i) to (track_j, a positive multiple of measure_j).
template <class Scalar>
std::optional<Periodicity> detect_periodicity(const SplittingSequence<Scalar>& seq) {
  std::vector<std::vector<int>> forms;
  for (const auto& st : seq.steps) forms.push_back(canonical_form(st.track));
  for (std::size_t j = 1; j < seq.steps.size(); ++j)
    for (std::size_t i = 0; i < j; ++i) {
      if (forms[i] != forms[j]) continue;
      for (auto& iso : all_isomorphisms(seq.steps[i].track, seq.steps[j].track)) {
        Periodicity p{static_cast<int>(i), static_cast<int>(j), std::move(iso)};
        if (verify_periodicity(seq, p)) return p;
      }
    }
  return std::nullopt;
}

/// True iff driving mu from the sequence's first track reproduces the
/// recorded split directions through step `step`, i.e. mu is carried by the
/// track at that step.
template <class Scalar>
bool in_cylinder(const BranchWeights<Scalar>& mu, const SplittingSequence<Scalar>& seq, int step) {
  if (step < 0 || step >= static_cast<int>(seq.steps.size()))
    throw std::out_of_range("in_cylinder: step outside the sequence");
  if (!is_positive(mu.weights)) throw NonGenericMeasure("in_cylinder needs a strictly positive measure");
  const auto& t0 = seq.steps.front().track;
  check_measure(t0, mu);
  TrainTrack cur = t0;
  BranchWeights<Scalar> m = normalized(mu);
  for (int k = 1; k <= step; ++k) {
    const auto& want = seq.steps[static_cast<std::size_t>(k)];
    for (std::size_t i = 0; i < want.large_branches.size(); ++i) {
      auto lift = lift_measure(cur, want.large_branches[i], m);
      if (!lift.determined()) throw NonGenericMeasure("tie while testing cylinder", k - 1);
      if (*lift.direction != want.directions[i]) return false;
      cur = lift.record->child;
      m = *lift.child_measure;
    }
    m = normalized(m);
  }
  return cur == seq.steps[static_cast<std::size_t>(step)].track;
}

}  // namespace lamkit
