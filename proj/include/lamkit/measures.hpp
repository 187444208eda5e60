#pragma once

// Transverse and tangential measures on a train track, the switch system,
// recurrence tests and vertex cycles.

#include "lamkit/cone.hpp"
#include "lamkit/lp.hpp"
#include "lamkit/traintrack.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace lamkit {

enum class MeasureKind { Transverse, Tangential };

inline const char* measure_kind_name(MeasureKind k) {
  return k == MeasureKind::Transverse ? "transverse" : "tangential";
}

/// Weight per branch, tied to the track it was built for by fingerprint.
template <class Scalar = Rational>
struct BranchWeights {
  MeasureKind kind = MeasureKind::Transverse;
  std::uint64_t track_tag = 0;
  std::vector<Scalar> weights;

  BranchWeights() = default;
  BranchWeights(const TrainTrack& track, MeasureKind k, std::vector<Scalar> w)
      : kind(k), track_tag(fingerprint(track)), weights(std::move(w)) {
    if (static_cast<int>(weights.size()) != track.branch_count())
      throw std::invalid_argument("weight vector length differs from branch count");
  }

  Scalar total() const {
    Scalar t(0);
    for (const auto& w : weights) t += w;
    return t;
  }

  friend bool operator==(const BranchWeights&, const BranchWeights&) = default;
};

class MeasureMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class EmptyConeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Rows are switches, columns branches: (#ends on the large slot) minus
/// (#ends on small slots).
inline RationalMatrix switch_system(const TrainTrack& track) {
  require_valid(track, "switch_system");
  RationalMatrix m(static_cast<std::size_t>(track.switch_count()),
                   RationalVector(static_cast<std::size_t>(track.branch_count()), Rational(0)));
  for (int b = 0; b < track.branch_count(); ++b)
    for (const auto& e : track.branch(b).ends)
      m[static_cast<std::size_t>(e.switch_id)][static_cast<std::size_t>(b)] +=
          e.slot == Slot::Large ? 1 : -1;
  return m;
}

/// Residual of the switch conditions for arbitrary scalar weights.
template <class Scalar>
std::vector<Scalar> switch_residual(const TrainTrack& track, const std::vector<Scalar>& w) {
  std::vector<Scalar> r(static_cast<std::size_t>(track.switch_count()), Scalar(0));
  for (int b = 0; b < track.branch_count(); ++b)
    for (const auto& e : track.branch(b).ends) {
      if (e.slot == Slot::Large)
        r[static_cast<std::size_t>(e.switch_id)] += w[static_cast<std::size_t>(b)];
      else
        r[static_cast<std::size_t>(e.switch_id)] -= w[static_cast<std::size_t>(b)];
    }
  return r;
}

template <class Scalar>
bool satisfies_switch_conditions(const TrainTrack& track, const std::vector<Scalar>& w) {
  if (static_cast<int>(w.size()) != track.branch_count()) return false;
  for (const auto& v : switch_residual(track, w))
    if (!is_zero(v)) return false;
  return true;
}

template <class Scalar>
bool is_nonnegative(const std::vector<Scalar>& w) {
  for (const auto& v : w)
    if (sign_of(v) < 0) return false;
  return true;
}

template <class Scalar>
bool is_positive(const std::vector<Scalar>& w) {
  for (const auto& v : w)
    if (sign_of(v) <= 0) return false;
  return true;
}

/// Trigon inequalities mu(c_i) <= mu(c_{i+1}) + mu(c_{i+2}) on every trigon.
template <class Scalar>
bool satisfies_trigon_inequalities(const TrainTrack& track, const std::vector<Scalar>& w) {
  for (const auto& region : compute_regions(track)) {
    if (region.kind != RegionKind::Trigon) continue;
    auto sides = region.sides();
    std::array<Scalar, 3> len{Scalar(0), Scalar(0), Scalar(0)};
    for (std::size_t i = 0; i < 3; ++i)
      for (int b : sides[i]) len[i] += w[static_cast<std::size_t>(b)];
    for (std::size_t i = 0; i < 3; ++i)
      if (sign_of(len[(i + 1) % 3] + len[(i + 2) % 3] - len[i]) < 0) return false;
  }
  return true;
}

/// Throws unless `w` is a valid measure of its stated kind on `track`.
template <class Scalar>
void check_measure(const TrainTrack& track, const BranchWeights<Scalar>& w) {
  if (w.track_tag != fingerprint(track)) throw MeasureMismatch("weights belong to another track");
  if (static_cast<int>(w.weights.size()) != track.branch_count())
    throw MeasureMismatch("weight vector length differs from branch count");
  if (!is_nonnegative(w.weights)) throw MeasureMismatch("negative branch weight");
  if (w.kind == MeasureKind::Transverse && !satisfies_switch_conditions(track, w.weights))
    throw MeasureMismatch("switch conditions fail");
  if (w.kind == MeasureKind::Tangential && !satisfies_trigon_inequalities(track, w.weights))
    throw MeasureMismatch("trigon inequalities fail");
}

/// Branch count minus the rank of the switch system.
inline int cone_dimension(const TrainTrack& track) {
  auto m = switch_system(track);
  return track.branch_count() - static_cast<int>(rank(std::move(m)));
}

struct RecurrenceResult {
  bool decision = false;
  /// Positive weights on every branch, scaled to total weight one.
  std::optional<BranchWeights<Rational>> witness;
  /// Optimal minimum branch weight over the total-weight-one slice.
  Rational margin;
};

namespace detail {

// maximize t subject to constraints on w, sum(w) = 1, t <= w_b, all >= 0.
inline RecurrenceResult max_min_weight(const TrainTrack& track, MeasureKind kind,
                                       const RationalMatrix& eq, const RationalMatrix& le) {
  const std::size_t nb = static_cast<std::size_t>(track.branch_count());
  LinearProgram lp;
  lp.variables = nb + 1;
  lp.objective.assign(nb + 1, Rational(0));
  lp.objective[nb] = 1;
  for (const auto& row : eq) {
    RationalVector r(row);
    r.push_back(0);
    lp.eq_lhs.push_back(std::move(r));
    lp.eq_rhs.push_back(0);
  }
  RationalVector total(nb + 1, Rational(1));
  total[nb] = 0;
  lp.eq_lhs.push_back(total);
  lp.eq_rhs.push_back(1);
  for (const auto& row : le) {
    RationalVector r(row);
    r.push_back(0);
    lp.le_lhs.push_back(std::move(r));
    lp.le_rhs.push_back(0);
  }
  for (std::size_t b = 0; b < nb; ++b) {
    RationalVector r(nb + 1, Rational(0));
    r[b] = -1;
    r[nb] = 1;
    lp.le_lhs.push_back(std::move(r));
    lp.le_rhs.push_back(0);
  }
  auto sol = solve(lp);
  RecurrenceResult out;
  if (sol.status != LpStatus::Optimal) return out;
  out.margin = sol.value;
  if (sol.value > 0) {
    out.decision = true;
    out.witness = BranchWeights<Rational>(track, kind, RationalVector(sol.x.begin(), sol.x.end() - 1));
  }
  return out;
}

}  // namespace detail

/// Recurrent iff some transverse measure is positive on every branch.
inline RecurrenceResult is_recurrent(const TrainTrack& track) {
  return detail::max_min_weight(track, MeasureKind::Transverse, switch_system(track), {});
}

/// Trigon inequality rows (side_i - side_{i+1} - side_{i+2} <= 0).
inline RationalMatrix trigon_system(const TrainTrack& track) {
  RationalMatrix rows;
  const std::size_t nb = static_cast<std::size_t>(track.branch_count());
  for (const auto& region : compute_regions(track)) {
    if (region.kind != RegionKind::Trigon) continue;
    auto sides = region.sides();
    for (std::size_t i = 0; i < 3; ++i) {
      RationalVector r(nb, Rational(0));
      for (int b : sides[i]) r[static_cast<std::size_t>(b)] += 1;
      for (int b : sides[(i + 1) % 3]) r[static_cast<std::size_t>(b)] -= 1;
      for (int b : sides[(i + 2) % 3]) r[static_cast<std::size_t>(b)] -= 1;
      rows.push_back(std::move(r));
    }
  }
  return rows;
}

/// Transversely recurrent iff some tangential measure is positive on every
/// branch. Only the region census is needed, so this also runs on tracks
/// that fail other validity checks as long as slots are well formed.
inline RecurrenceResult is_transversely_recurrent(const TrainTrack& track) {
  if (!track.slots_well_formed())
    throw PreconditionError("is_transversely_recurrent: slots are not well formed");
  return detail::max_min_weight(track, MeasureKind::Tangential, {}, trigon_system(track));
}

/// Extreme rays of the transverse cone as primitive integral measures.
inline std::vector<BranchWeights<Rational>> vertex_cycles(const TrainTrack& track) {
  auto system = switch_system(track);
  if (!is_recurrent(track).decision)
    throw EmptyConeError("vertex_cycles: track is not recurrent");
  std::vector<BranchWeights<Rational>> out;
  for (const auto& ray : extreme_rays(system, static_cast<std::size_t>(track.branch_count()))) {
    if (!support_is_extremal(system, ray))
      throw std::logic_error("vertex_cycles: ray failed support-rank certification");
    RationalVector w;
    w.reserve(ray.size());
    for (const auto& v : ray) w.emplace_back(v);
    if (!satisfies_switch_conditions(track, w))
      throw std::logic_error("vertex_cycles: ray violates switch conditions");
    out.emplace_back(track, MeasureKind::Transverse, std::move(w));
  }
  return out;
}

/// Intersection pairing sum_b mu(b) nu(b).
template <class Scalar>
Scalar pair(const BranchWeights<Scalar>& transverse, const BranchWeights<Scalar>& tangential) {
  if (transverse.kind != MeasureKind::Transverse || tangential.kind != MeasureKind::Tangential)
    throw MeasureMismatch("pair expects (transverse, tangential)");
  if (transverse.track_tag != tangential.track_tag ||
      transverse.weights.size() != tangential.weights.size())
    throw MeasureMismatch("pair: measures live on different tracks");
  Scalar s(0);
  for (std::size_t b = 0; b < transverse.weights.size(); ++b)
    s += transverse.weights[b] * tangential.weights[b];
  return s;
}

}  // namespace lamkit
