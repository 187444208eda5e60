// Searches slot pairings for complete train tracks on a given surface and
// prints the first hits in .ttk form. Used to produce the fixtures in data/.
//
//   catalog_search exhaustive <genus> <punctures> <switches> [limit]
//   catalog_search random <genus> <punctures> <switches> <seed> [limit]
//   catalog_search defects <genus> <punctures> <switches>
//
// `defects` lists valid tracks that fail recurrence or transverse
// recurrence.

#include "lamkit/measures.hpp"
#include "lamkit/ttk_format.hpp"

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <random>
#include <string>
#include <vector>

using namespace lamkit;

namespace {

HalfBranch slot_of(int index) { return {index / 3, static_cast<Slot>(index % 3)}; }

/// Builds a track from a pairing of slot indices; returns nullopt unless the
/// census can be made valid by choosing puncture designations.
std::optional<TrainTrack> realize(SurfaceKind surface, int switches,
                                  const std::vector<std::pair<int, int>>& pairing) {
  std::vector<Branch> branches;
  for (auto [a, b] : pairing) branches.push_back({{slot_of(a), slot_of(b)}});
  TrainTrack bare(surface, switches, branches);
  auto regions = compute_regions(bare);
  std::vector<int> marks;
  for (const auto& r : regions) {
    if (r.cusp_count == 1)
      marks.push_back(r.cusp_switches.front());
    else if (r.cusp_count != 3)
      return std::nullopt;
  }
  if (static_cast<int>(marks.size()) != surface.punctures) return std::nullopt;
  TrainTrack t(surface, switches, branches, marks);
  if (!validate_track(t).ok()) return std::nullopt;
  return t;
}

bool complete(const TrainTrack& t) {
  return is_recurrent(t).decision && is_transversely_recurrent(t).decision;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 5) {
    std::cerr << "usage: catalog_search exhaustive|random|defects g m switches [seed] [limit]\n";
    return 2;
  }
  const std::string mode = argv[1];
  const SurfaceKind surface{std::atoi(argv[2]), std::atoi(argv[3])};
  const int switches = std::atoi(argv[4]);
  const int slots = 3 * switches;

  if (mode == "exhaustive" || mode == "defects") {
    const int limit = (mode == "exhaustive" && argc > 5) ? std::atoi(argv[5]) : 1;
    int found = 0;
    int valid = 0;
    std::vector<std::pair<int, int>> pairing;
    std::vector<bool> used(static_cast<std::size_t>(slots), false);
    std::function<void()> rec = [&]() {
      if (found >= limit && mode == "exhaustive") return;
      int first = 0;
      while (first < slots && used[static_cast<std::size_t>(first)]) ++first;
      if (first == slots) {
        auto t = realize(surface, switches, pairing);
        if (!t) return;
        ++valid;
        bool rec_ok = is_recurrent(*t).decision;
        bool trans_ok = is_transversely_recurrent(*t).decision;
        if (mode == "exhaustive" && rec_ok && trans_ok) {
          ++found;
          std::cout << "# hit " << found << " large=" << t->large_branches().size() << "\n"
                    << serialize_ttk(*t);
        } else if (mode == "defects" && !(rec_ok && trans_ok)) {
          std::cout << "# recurrent=" << rec_ok << " transversely_recurrent=" << trans_ok << "\n"
                    << serialize_ttk(*t);
        }
        return;
      }
      used[static_cast<std::size_t>(first)] = true;
      for (int other = first + 1; other < slots; ++other) {
        if (used[static_cast<std::size_t>(other)]) continue;
        used[static_cast<std::size_t>(other)] = true;
        pairing.emplace_back(first, other);
        rec();
        pairing.pop_back();
        used[static_cast<std::size_t>(other)] = false;
      }
      used[static_cast<std::size_t>(first)] = false;
    };
    rec();
    std::cerr << "valid maximal tracks seen: " << valid << "\n";
    return 0;
  }

  if (mode == "random") {
    if (argc < 6) return 2;
    std::mt19937_64 rng(std::strtoull(argv[5], nullptr, 10));
    const int limit = argc > 6 ? std::atoi(argv[6]) : 1;
    int found = 0;
    std::vector<int> perm(static_cast<std::size_t>(slots));
    for (long long trial = 0; found < limit; ++trial) {
      for (int i = 0; i < slots; ++i) perm[static_cast<std::size_t>(i)] = i;
      std::shuffle(perm.begin(), perm.end(), rng);
      std::vector<std::pair<int, int>> pairing;
      for (int i = 0; i < slots; i += 2) {
        int a = perm[static_cast<std::size_t>(i)];
        int b = perm[static_cast<std::size_t>(i + 1)];
        pairing.emplace_back(std::min(a, b), std::max(a, b));
      }
      std::sort(pairing.begin(), pairing.end());
      auto t = realize(surface, switches, pairing);
      if (!t || !complete(*t)) continue;
      ++found;
      std::cout << "# hit " << found << " after " << trial + 1
                << " trials, large=" << t->large_branches().size() << "\n"
                << serialize_ttk(*t);
    }
    return 0;
  }
  std::cerr << "unknown mode\n";
  return 2;
}
