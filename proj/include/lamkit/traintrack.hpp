#pragma once

// Combinatorial maximal generic train tracks.
//
// A track is a trivalent graph whose switches carry three half-branch slots:
// one on the large side and two on the small side. Facing the small side of a
// switch, SmallLeft is the left slot and SmallRight the right one, with left
// and right taken with respect to the orientation of the surface. The
// counterclockwise cyclic order around every switch is therefore
//
//     Large -> SmallRight -> SmallLeft -> Large
//
// and this ribbon structure alone determines the embedding of the track in
// the surface. Complementary regions are the boundary cycles of the ribbon
// graph; each switch contributes one cusp (the corner between its two small
// slots). Punctures are placed explicitly: a punctured region is named by a
// switch whose cusp lies on it.

#include "lamkit/scalar.hpp"

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace lamkit {

enum class Slot : std::uint8_t { Large = 0, SmallLeft = 1, SmallRight = 2 };

inline constexpr std::array<Slot, 3> kAllSlots{Slot::Large, Slot::SmallLeft, Slot::SmallRight};

inline const char* slot_name(Slot s) {
  switch (s) {
    case Slot::Large:
      return "L";
    case Slot::SmallLeft:
      return "SL";
    case Slot::SmallRight:
      return "SR";
  }
  return "?";
}

/// Counterclockwise successor around a switch.
inline Slot next_ccw(Slot s) {
  switch (s) {
    case Slot::Large:
      return Slot::SmallRight;
    case Slot::SmallRight:
      return Slot::SmallLeft;
    case Slot::SmallLeft:
      return Slot::Large;
  }
  return Slot::Large;
}

/// Thrown for input that cannot be interpreted as a track at all (indices
/// out of range, negative counts). Invariant violations of a well-formed
/// track are reported by validate_track instead.
class StructuralError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Thrown when an operation's precondition on the track is not met.
class PreconditionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SurfaceKind {
  int genus = 0;
  int punctures = 0;

  int complexity() const { return 3 * genus - 3 + punctures; }
  int euler_characteristic() const { return 2 - 2 * genus - punctures; }
  /// Dimension of measured lamination space.
  int lamination_dimension() const { return 6 * genus - 6 + 2 * punctures; }

  friend bool operator==(const SurfaceKind&, const SurfaceKind&) = default;
};

struct HalfBranch {
  int switch_id = 0;
  Slot slot = Slot::Large;

  friend bool operator==(const HalfBranch&, const HalfBranch&) = default;
};

struct Branch {
  std::array<HalfBranch, 2> ends;

  friend bool operator==(const Branch&, const Branch&) = default;
};

/// The branch end occupying a switch slot.
struct Dart {
  int branch = -1;
  int end = 0;

  friend bool operator==(const Dart&, const Dart&) = default;
};

class TrainTrack {
 public:
  TrainTrack() = default;
  TrainTrack(SurfaceKind surface, int switch_count, std::vector<Branch> branches,
             std::vector<int> puncture_switches = {})
      : surface_(surface),
        switch_count_(switch_count),
        branches_(std::move(branches)),
        puncture_switches_(std::move(puncture_switches)) {
    if (surface_.genus < 0 || surface_.punctures < 0)
      throw StructuralError("negative genus or puncture count");
    if (switch_count_ < 0) throw StructuralError("negative switch count");
    for (std::size_t b = 0; b < branches_.size(); ++b) {
      for (const auto& end : branches_[b].ends) {
        if (end.switch_id < 0 || end.switch_id >= switch_count_)
          throw StructuralError("branch " + std::to_string(b) + " references switch " +
                                std::to_string(end.switch_id) + " out of range");
      }
    }
    for (int s : puncture_switches_)
      if (s < 0 || s >= switch_count_)
        throw StructuralError("puncture designation references switch " + std::to_string(s) +
                              " out of range");
    slots_.assign(static_cast<std::size_t>(switch_count_) * 3, std::vector<Dart>{});
    for (std::size_t b = 0; b < branches_.size(); ++b)
      for (int e = 0; e < 2; ++e) {
        const auto& h = branches_[b].ends[e];
        slots_[slot_index(h.switch_id, h.slot)].push_back({static_cast<int>(b), e});
      }
  }

  const SurfaceKind& surface() const { return surface_; }
  int switch_count() const { return switch_count_; }
  int branch_count() const { return static_cast<int>(branches_.size()); }
  const std::vector<Branch>& branches() const { return branches_; }
  const Branch& branch(int b) const { return branches_.at(static_cast<std::size_t>(b)); }
  const std::vector<int>& puncture_switches() const { return puncture_switches_; }

  /// True when every slot holds exactly one branch end.
  bool slots_well_formed() const {
    return std::all_of(slots_.begin(), slots_.end(),
                       [](const auto& v) { return v.size() == 1; });
  }

  /// Occupant of a slot; requires slots_well_formed().
  Dart occupant(int s, Slot slot) const {
    const auto& v = slots_.at(slot_index(s, slot));
    if (v.size() != 1) throw PreconditionError("slot occupancy is not one-to-one");
    return v.front();
  }

  const std::vector<Dart>& occupants(int s, Slot slot) const {
    return slots_.at(slot_index(s, slot));
  }

  const HalfBranch& half_branch(Dart d) const {
    return branches_.at(static_cast<std::size_t>(d.branch)).ends[static_cast<std::size_t>(d.end)];
  }

  /// A branch whose two half-branches are large.
  bool is_large(int b) const {
    const auto& br = branch(b);
    return br.ends[0].slot == Slot::Large && br.ends[1].slot == Slot::Large;
  }
  bool is_small(int b) const {
    const auto& br = branch(b);
    return br.ends[0].slot != Slot::Large && br.ends[1].slot != Slot::Large;
  }
  bool is_mixed(int b) const { return !is_large(b) && !is_small(b); }

  std::vector<int> large_branches() const {
    std::vector<int> out;
    for (int b = 0; b < branch_count(); ++b)
      if (is_large(b)) out.push_back(b);
    return out;
  }

  friend bool operator==(const TrainTrack& a, const TrainTrack& b) {
    return a.surface_ == b.surface_ && a.switch_count_ == b.switch_count_ &&
           a.branches_ == b.branches_ && a.puncture_switches_ == b.puncture_switches_;
  }

 private:
  static std::size_t slot_index(int s, Slot slot) {
    return static_cast<std::size_t>(s) * 3 + static_cast<std::size_t>(slot);
  }

  SurfaceKind surface_;
  int switch_count_ = 0;
  std::vector<Branch> branches_;
  std::vector<int> puncture_switches_;
  std::vector<std::vector<Dart>> slots_;
};

/// Stable 64-bit fingerprint of a track's combinatorics (FNV-1a), used to
/// tie weight vectors to the track they live on.
inline std::uint64_t fingerprint(const TrainTrack& track) {
  std::uint64_t h = 1469598103934665603ULL;
  auto mix = [&h](std::int64_t v) {
    for (int i = 0; i < 8; ++i) {
      h ^= static_cast<std::uint64_t>((v >> (8 * i)) & 0xff);
      h *= 1099511628211ULL;
    }
  };
  mix(track.surface().genus);
  mix(track.surface().punctures);
  mix(track.switch_count());
  for (const auto& br : track.branches())
    for (const auto& e : br.ends) {
      mix(e.switch_id);
      mix(static_cast<int>(e.slot));
    }
  for (int s : track.puncture_switches()) mix(s);
  return h;
}

// ---------------------------------------------------------------------------
// Complementary regions.

enum class RegionKind { Trigon, PuncturedMonogon, Other };

/// One step of a region boundary: a branch traversed from end 0 to end 1
/// (forward) or the reverse.
struct BoundaryStep {
  int branch = -1;
  bool forward = true;
  /// True when the corner reached at the end of this step is a cusp.
  bool cusp_after = false;

  friend bool operator==(const BoundaryStep&, const BoundaryStep&) = default;
};

struct RegionDescriptor {
  RegionKind kind = RegionKind::Other;
  std::vector<BoundaryStep> boundary;
  int cusp_count = 0;
  bool punctured = false;
  /// Switches whose cusp lies on this region.
  std::vector<int> cusp_switches;

  /// Smooth sides between consecutive cusps, each a list of branches with
  /// multiplicity. Empty when the region has no cusp.
  std::vector<std::vector<int>> sides() const {
    std::vector<std::vector<int>> out;
    if (cusp_count == 0) return out;
    std::size_t start = 0;
    while (!boundary[start].cusp_after) ++start;
    std::vector<int> current;
    for (std::size_t k = 1; k <= boundary.size(); ++k) {
      const auto& step = boundary[(start + k) % boundary.size()];
      current.push_back(step.branch);
      if (step.cusp_after) {
        out.push_back(std::move(current));
        current.clear();
      }
    }
    return out;
  }
};

/// Boundary cycles of the ribbon graph. Requires slots_well_formed().
inline std::vector<RegionDescriptor> compute_regions(const TrainTrack& track) {
  if (!track.slots_well_formed())
    throw PreconditionError("region census needs one branch end per slot");
  const int nb = track.branch_count();
  std::vector<std::array<bool, 2>> seen(static_cast<std::size_t>(nb), {false, false});
  std::vector<int> cusp_region(static_cast<std::size_t>(track.switch_count()), -1);
  std::vector<RegionDescriptor> regions;
  for (int b0 = 0; b0 < nb; ++b0) {
    for (int e0 = 0; e0 < 2; ++e0) {
      if (seen[static_cast<std::size_t>(b0)][static_cast<std::size_t>(e0)]) continue;
      RegionDescriptor region;
      Dart d{b0, e0};
      // Walk: leave through d, arrive at the other end, turn to the next slot
      // counterclockwise, leave again.
      while (!seen[static_cast<std::size_t>(d.branch)][static_cast<std::size_t>(d.end)]) {
        seen[static_cast<std::size_t>(d.branch)][static_cast<std::size_t>(d.end)] = true;
        const HalfBranch arrive = track.branch(d.branch).ends[static_cast<std::size_t>(1 - d.end)];
        const Slot turn = next_ccw(arrive.slot);
        const bool cusp = arrive.slot == Slot::SmallRight && turn == Slot::SmallLeft;
        region.boundary.push_back({d.branch, d.end == 0, cusp});
        if (cusp) {
          ++region.cusp_count;
          region.cusp_switches.push_back(arrive.switch_id);
          cusp_region[static_cast<std::size_t>(arrive.switch_id)] = static_cast<int>(regions.size());
        }
        d = track.occupant(arrive.switch_id, turn);
      }
      regions.push_back(std::move(region));
    }
  }
  for (int s : track.puncture_switches()) {
    int r = cusp_region[static_cast<std::size_t>(s)];
    if (r >= 0) regions[static_cast<std::size_t>(r)].punctured = true;
  }
  for (auto& r : regions) {
    if (r.cusp_count == 3 && !r.punctured)
      r.kind = RegionKind::Trigon;
    else if (r.cusp_count == 1 && r.punctured)
      r.kind = RegionKind::PuncturedMonogon;
    else
      r.kind = RegionKind::Other;
  }
  return regions;
}

// ---------------------------------------------------------------------------
// Validation.

struct ValidationReport {
  std::vector<std::string> violations;

  bool ok() const { return violations.empty(); }
};

inline ValidationReport validate_track(const TrainTrack& track) {
  ValidationReport report;
  auto violate = [&report](std::string msg) { report.violations.push_back(std::move(msg)); };
  const auto& surface = track.surface();
  if (surface.complexity() < 1)
    violate("surface (" + std::to_string(surface.genus) + "," + std::to_string(surface.punctures) +
            ") has 3g-3+m < 1");
  if (track.switch_count() == 0) violate("track has no switches");

  for (int s = 0; s < track.switch_count(); ++s) {
    for (Slot slot : kAllSlots) {
      const auto n = track.occupants(s, slot).size();
      if (n == 1) continue;
      if (slot == Slot::Large && n > 1)
        violate("switch " + std::to_string(s) + " has " + std::to_string(n) +
                " large half-branches");
      else
        violate("switch " + std::to_string(s) + " slot " + slot_name(slot) + " holds " +
                std::to_string(n) + " half-branches");
    }
  }
  if (!track.slots_well_formed()) return report;

  // Connectivity.
  std::vector<int> parent(static_cast<std::size_t>(track.switch_count()));
  for (std::size_t i = 0; i < parent.size(); ++i) parent[i] = static_cast<int>(i);
  auto find = [&parent](int x) {
    while (parent[static_cast<std::size_t>(x)] != x) {
      parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
      x = parent[static_cast<std::size_t>(x)];
    }
    return x;
  };
  for (const auto& br : track.branches())
    parent[static_cast<std::size_t>(find(br.ends[0].switch_id))] = find(br.ends[1].switch_id);
  int components = 0;
  for (int s = 0; s < track.switch_count(); ++s)
    if (find(s) == s) ++components;
  if (components > 1) violate("track is disconnected (" + std::to_string(components) + " components)");

  const auto regions = compute_regions(track);
  int punctured = 0;
  int cusps = 0;
  for (std::size_t r = 0; r < regions.size(); ++r) {
    const auto& reg = regions[r];
    cusps += reg.cusp_count;
    if (reg.punctured) ++punctured;
    if (reg.kind == RegionKind::Other) {
      std::string what = reg.punctured ? "punctured region" : "region";
      violate(what + " " + std::to_string(r) + " has " + std::to_string(reg.cusp_count) +
              " cusps; only trigons and punctured monogons are allowed");
    }
  }
  std::vector<int> marks = track.puncture_switches();
  std::sort(marks.begin(), marks.end());
  if (std::adjacent_find(marks.begin(), marks.end()) != marks.end())
    violate("a switch is designated as a puncture more than once");
  if (punctured != static_cast<int>(marks.size()))
    violate("two puncture designations name the same region");
  if (punctured != surface.punctures)
    violate("census has " + std::to_string(punctured) + " punctured monogons but the surface has " +
            std::to_string(surface.punctures) + " punctures");
  if (cusps != track.switch_count())
    violate("cusp total " + std::to_string(cusps) + " differs from switch count " +
            std::to_string(track.switch_count()));
  const int chi = track.switch_count() - track.branch_count() + static_cast<int>(regions.size());
  if (chi != 2 - 2 * surface.genus)
    violate("cell structure has Euler characteristic " + std::to_string(chi) +
            " but the closed surface of genus " + std::to_string(surface.genus) + " has " +
            std::to_string(2 - 2 * surface.genus));
  return report;
}

inline void require_valid(const TrainTrack& track, const char* op) {
  auto report = validate_track(track);
  if (!report.ok())
    throw PreconditionError(std::string(op) + ": invalid track: " + report.violations.front());
}

}  // namespace lamkit
