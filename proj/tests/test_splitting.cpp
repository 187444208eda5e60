#include "fixtures.hpp"
#include "lamkit/splitting.hpp"
#include "lamkit/ssl_format.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace lamkit;
using lamkit::testing::load_track;
using lamkit::testing::load_weights;

namespace {

struct Fixture {
  std::string track, weights;
};
const std::vector<Fixture> kCatalog{
    {"pt1.ttk", "pt1.weights"}, {"q4.ttk", "q4.weights"}, {"g2.ttk", "g2.weights"}, {"t12.ttk", "t12.weights"}};

// Relabels switches and branches and flips branch ends at random.
struct Relabeled {
  TrainTrack track;
  std::vector<int> switch_map, branch_map;
  std::vector<bool> flipped;
};

Relabeled relabel(const TrainTrack& t, std::mt19937& rng) {
  Relabeled r;
  r.switch_map.resize(static_cast<std::size_t>(t.switch_count()));
  std::iota(r.switch_map.begin(), r.switch_map.end(), 0);
  std::shuffle(r.switch_map.begin(), r.switch_map.end(), rng);
  r.branch_map.resize(static_cast<std::size_t>(t.branch_count()));
  std::iota(r.branch_map.begin(), r.branch_map.end(), 0);
  std::shuffle(r.branch_map.begin(), r.branch_map.end(), rng);
  std::vector<Branch> branches(static_cast<std::size_t>(t.branch_count()));
  for (int b = 0; b < t.branch_count(); ++b) {
    const bool flip = rng() % 2 == 1;
    r.flipped.push_back(flip);
    auto ends = t.branch(b).ends;
    for (auto& e : ends) e.switch_id = r.switch_map[static_cast<std::size_t>(e.switch_id)];
    if (flip) std::swap(ends[0], ends[1]);
    branches[static_cast<std::size_t>(r.branch_map[static_cast<std::size_t>(b)])].ends = ends;
  }
  std::vector<int> punct;
  for (int s : t.puncture_switches()) punct.push_back(r.switch_map[static_cast<std::size_t>(s)]);
  r.track = TrainTrack(t.surface(), t.switch_count(), std::move(branches), std::move(punct));
  return r;
}

// Direct check that `iso` carries every branch end of t1 onto t2.
bool carries(const TrackIsomorphism& iso, const TrainTrack& t1, const TrainTrack& t2) {
  for (int b = 0; b < t1.branch_count(); ++b) {
    const auto& src = t1.branch(b).ends;
    const auto& dst = t2.branch(iso.branch_map[static_cast<std::size_t>(b)]).ends;
    for (std::size_t k = 0; k < 2; ++k) {
      const auto& d = dst[iso.flipped[static_cast<std::size_t>(b)] ? 1 - k : k];
      if (d.slot != src[k].slot || d.switch_id != iso.switch_map[static_cast<std::size_t>(src[k].switch_id)])
        return false;
    }
  }
  return true;
}

BranchWeights<Rational> random_positive_measure(const TrainTrack& t, const std::vector<BranchWeights<Rational>>& cycles,
                                                std::mt19937& rng) {
  std::uniform_int_distribution<int> coef(1, 60);
  std::vector<Rational> w(static_cast<std::size_t>(t.branch_count()), Rational(0));
  for (const auto& c : cycles) {
    const Rational k = coef(rng);
    for (std::size_t b = 0; b < w.size(); ++b) w[b] += k * c.weights[b];
  }
  return BranchWeights<Rational>(t, MeasureKind::Transverse, std::move(w));
}

GoldenField phi() { return GoldenField(Rational(1, 2), Rational(1, 2)); }

}  // namespace

TEST(Split, HandExampleOnQ4) {
  auto t = load_track("q4.ttk");
  auto mu = load_weights("q4.weights", t);  // 3 2 1 2 1 3
  // Branch 0 runs from switch 0 to 1: a = 2, b = 3, c = 4, d = 1.
  auto lift = lift_measure(t, 0, mu);
  ASSERT_TRUE(lift.determined());
  EXPECT_EQ(*lift.direction, SplitDirection::Left);  // mu(a) = 1 < mu(b) = 2
  const auto& rec = *lift.record;
  EXPECT_EQ(rec.quad.a, 2);
  EXPECT_EQ(rec.quad.b, 3);
  EXPECT_EQ(rec.quad.c, 4);
  EXPECT_EQ(rec.quad.d, 1);
  EXPECT_EQ(lift.child_measure->weights, (std::vector<Rational>{1, 2, 1, 2, 1, 3}));
  EXPECT_TRUE(rec.child.is_small(0));
  EXPECT_TRUE(validate_track(rec.child).ok());
  // nu(e) = nu(e') + nu(loser 1) + nu(loser 2) on the parent.
  auto back = project_measure(rec, *lift.child_measure);
  EXPECT_EQ(back, mu);
}

TEST(Split, BothDirectionsGiveValidTracksWithSwappedRoles) {
  for (const auto& f : kCatalog) {
    auto t = load_track(f.track);
    for (int e : t.large_branches()) {
      auto r = split(t, e, SplitDirection::Right);
      auto l = split(t, e, SplitDirection::Left);
      EXPECT_TRUE(validate_track(r.child).ok()) << f.track << " R " << e;
      EXPECT_TRUE(validate_track(l.child).ok()) << f.track << " L " << e;
      EXPECT_EQ(r.winners(), l.losers());
      EXPECT_EQ(r.losers(), l.winners());
      EXPECT_EQ(cone_dimension(r.child) <= cone_dimension(t), true);
      EXPECT_FALSE(r.child == l.child);
    }
  }
}

TEST(Split, RejectsNonLargeBranches) {
  auto t = load_track("pt1.ttk");
  ASSERT_TRUE(t.is_mixed(2));
  EXPECT_THROW(split(t, 2, SplitDirection::Right), NotSplittable);
  EXPECT_THROW(split(t, 1, SplitDirection::Right), NotSplittable);
  EXPECT_THROW(split(t, 99, SplitDirection::Left), NotSplittable);
}

TEST(Split, LiftThenProjectIsIdentity) {
  std::mt19937 rng(2024);
  std::vector<TrainTrack> tracks;
  std::vector<std::vector<BranchWeights<Rational>>> cycles;
  for (const auto& f : kCatalog) {
    tracks.push_back(load_track(f.track));
    cycles.push_back(vertex_cycles(tracks.back()));
  }
  int determined = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const auto k = rng() % tracks.size();
    const auto& t = tracks[k];
    auto large = t.large_branches();
    const int e = large[rng() % large.size()];
    auto mu = random_positive_measure(t, cycles[k], rng);
    auto lift = lift_measure(t, e, mu);
    if (!lift.determined()) continue;
    ++determined;
    ASSERT_TRUE(satisfies_switch_conditions(lift.record->child, lift.child_measure->weights));
    ASSERT_TRUE(is_nonnegative(lift.child_measure->weights));
    ASSERT_EQ(project_measure(*lift.record, *lift.child_measure), mu) << "trial " << trial;
  }
  EXPECT_GT(determined, 900);
}

TEST(Split, TieIsUndeterminedAndStopsFullSplit) {
  auto t = load_track("q4.ttk");
  BranchWeights<Rational> mu(t, MeasureKind::Transverse, {2, 1, 1, 1, 1, 2});
  check_measure(t, mu);
  EXPECT_FALSE(lift_measure(t, 0, mu).determined());
  try {
    full_split(t, mu, 0);
    FAIL() << "expected a tie";
  } catch (const NonGenericMeasure& e) {
    EXPECT_EQ(e.step(), 0);
  }
}

TEST(Split, ZeroLoserWeightsStayZero) {
  auto t = load_track("q4.ttk");
  BranchWeights<Rational> v(t, MeasureKind::Transverse, {1, 1, 0, 1, 0, 1});
  check_measure(t, v);
  auto lift = lift_measure(t, 0, v);
  ASSERT_TRUE(lift.determined());
  EXPECT_EQ(*lift.direction, SplitDirection::Left);
  for (int b : lift.record->losers()) EXPECT_EQ(lift.child_measure->weights[static_cast<std::size_t>(b)], 0);
}

TEST(Split, FullSplitIsOrderIndependent) {
  auto t = load_track("q4.ttk");
  auto seq = drive_sequence(t, load_weights("q4_long.weights", t), 20);
  for (const auto& st : seq.steps) {
    auto large = st.track.large_branches();
    ASSERT_EQ(large.size(), 2u);
    auto a = detail::full_split_in_order(st.track, st.measure, large, -1);
    auto b = detail::full_split_in_order(st.track, st.measure, {large[1], large[0]}, -1);
    EXPECT_TRUE(a.child == b.child);
    EXPECT_EQ(a.measure, b.measure);
    EXPECT_EQ(a.ratio, b.ratio);
  }
}

TEST(Drive, ZeroStepsKeepsTheInput) {
  auto t = load_track("q4.ttk");
  auto seq = drive_sequence(t, load_weights("q4.weights", t), 0);
  ASSERT_EQ(seq.steps.size(), 1u);
  EXPECT_EQ(seq.cumulative_expansion(), 1);
  EXPECT_EQ(serialize_sequence(seq), "ssl 1\n");
}

TEST(Drive, LongDriveInvariants) {
  auto t = load_track("q4.ttk");
  auto mu = load_weights("q4_long.weights", t);
  auto seq = drive_sequence(t, mu, 100);
  ASSERT_EQ(seq.steps.size(), 101u);
  Rational product = 1;
  for (std::size_t k = 1; k < seq.steps.size(); ++k) {
    const auto& st = seq.steps[k];
    EXPECT_GE(st.ratio, 1);
    EXPECT_EQ(st.measure.total(), 1);
    EXPECT_TRUE(satisfies_switch_conditions(st.track, st.measure.weights));
    EXPECT_TRUE(validate_track(st.track).ok());
    product *= st.ratio;
  }
  EXPECT_EQ(seq.cumulative_expansion(), product);

  // Pull the last measure back through the recorded splits: it must land on
  // the normalized input scaled by the cumulative expansion.
  std::vector<SplitRecord> records;
  TrainTrack cur = t;
  for (std::size_t k = 1; k < seq.steps.size(); ++k)
    for (std::size_t i = 0; i < seq.steps[k].large_branches.size(); ++i) {
      records.push_back(split(cur, seq.steps[k].large_branches[i], seq.steps[k].directions[i]));
      cur = records.back().child;
    }
  ASSERT_TRUE(cur == seq.steps.back().track);
  auto m = seq.steps.back().measure;
  for (auto it = records.rbegin(); it != records.rend(); ++it) m = project_measure(*it, m);
  auto start = normalized(mu);
  for (std::size_t b = 0; b < m.weights.size(); ++b) EXPECT_EQ(m.weights[b], start.weights[b] * product);
}

TEST(Drive, SmallIntegralMeasureEndsOnATie) {
  auto t = load_track("pt1.ttk");
  try {
    drive_sequence(t, load_weights("pt1.weights", t), 10);
    FAIL() << "expected the drive to stop";
  } catch (const NonGenericMeasure& e) {
    EXPECT_GE(e.step(), 0);
    EXPECT_LT(e.step(), 10);
  }
}

TEST(Drive, GoldenMeasureHasRatioPhi) {
  auto t = load_track("q4.ttk");
  auto mu = load_weights<GoldenField>("q4_golden.weights", t);
  auto seq = drive_sequence(t, mu, 6);
  for (std::size_t k = 1; k < seq.steps.size(); ++k) {
    EXPECT_EQ(seq.steps[k].ratio, phi()) << k;
    EXPECT_EQ(seq.steps[k].word(), k % 2 == 1 ? "RR" : "LL") << k;
  }
}

TEST(Isomorphism, RandomRelabelingsAreDetected) {
  std::mt19937 rng(5);
  for (const auto& f : kCatalog) {
    auto t = load_track(f.track);
    for (int rep = 0; rep < 10; ++rep) {
      auto r = relabel(t, rng);
      auto iso = tracks_isomorphic(t, r.track);
      ASSERT_TRUE(iso.has_value()) << f.track;
      EXPECT_TRUE(carries(*iso, t, r.track));
      auto inv = tracks_isomorphic(r.track, t);
      ASSERT_TRUE(inv.has_value());
      EXPECT_TRUE(carries(iso->inverse(), r.track, t));
      EXPECT_EQ(canonical_form(t), canonical_form(r.track));
      // The planted relabeling is among the isomorphisms found.
      TrackIsomorphism planted{r.switch_map, r.branch_map, r.flipped};
      auto all = all_isomorphisms(t, r.track);
      EXPECT_NE(std::find(all.begin(), all.end(), planted), all.end());
    }
  }
}

TEST(Isomorphism, ComposesTransitively) {
  std::mt19937 rng(8);
  auto t = load_track("t12.ttk");
  auto a = relabel(t, rng), b = relabel(t, rng);
  auto ta = tracks_isomorphic(t, a.track);
  auto ab = tracks_isomorphic(a.track, b.track);
  ASSERT_TRUE(ta && ab);
  EXPECT_TRUE(carries(ab->after(*ta), t, b.track));
}

TEST(Isomorphism, SplitChildIsNotIsomorphicToParent) {
  auto t = load_track("pt1.ttk");
  auto child = split(t, 0, SplitDirection::Right).child;
  EXPECT_FALSE(tracks_isomorphic(t, child).has_value());
  EXPECT_FALSE(tracks_isomorphic(load_track("q4.ttk"), t).has_value());
}

TEST(Periodicity, GoldenMeasureIsPeriodic) {
  auto t = load_track("q4.ttk");
  auto seq = drive_sequence(t, load_weights<GoldenField>("q4_golden.weights", t), 4);
  auto p = detect_periodicity(seq);
  ASSERT_TRUE(p.has_value());
  EXPECT_EQ(p->i, 0);
  EXPECT_EQ(p->j, 2);
  EXPECT_TRUE(verify_periodicity(seq, *p));
  EXPECT_TRUE(carries(p->iso, seq.steps[0].track, seq.steps[2].track));
  // Expansion over one period is phi^2.
  EXPECT_EQ(seq.steps[1].ratio * seq.steps[2].ratio, phi() * phi());
  // A corrupted isomorphism does not verify.
  auto bad = *p;
  bad.iso.flipped[0] = !bad.iso.flipped[0];
  EXPECT_FALSE(verify_periodicity(seq, bad));
}

TEST(Periodicity, NoneOnShortOrAperiodicSequences) {
  auto t = load_track("q4.ttk");
  auto mu = load_weights("q4_long.weights", t);
  EXPECT_FALSE(detect_periodicity(drive_sequence(t, mu, 0)).has_value());
  auto seq = drive_sequence(t, mu, 30);
  if (auto p = detect_periodicity(seq)) {
    EXPECT_TRUE(verify_periodicity(seq, *p));
  }
}

TEST(Cylinder, MembershipFollowsSplitDirections) {
  auto t = load_track("q4.ttk");
  auto mu = load_weights("q4_long.weights", t);
  auto seq = drive_sequence(t, mu, 12);
  for (int k = 0; k <= 12; ++k) EXPECT_TRUE(in_cylinder(mu, seq, k));
  // Swap the coefficients of the two vertex cycles.
  auto v = vertex_cycles(t);
  ASSERT_EQ(v.size(), 2u);
  Rational big("2414213562373095048801688724209698078569671875376948073176679");
  std::vector<Rational> w(6);
  for (std::size_t b = 0; b < 6; ++b) w[b] = big * v[0].weights[b] + 1000 * v[1].weights[b];
  BranchWeights<Rational> other(t, MeasureKind::Transverse, w);
  EXPECT_TRUE(in_cylinder(other, seq, 0));
  bool left = false;
  for (int k = 1; k <= 12 && !left; ++k) left = !in_cylinder(other, seq, k);
  EXPECT_TRUE(left);
  BranchWeights<Rational> zero(t, MeasureKind::Transverse, {1, 1, 0, 1, 0, 1});
  EXPECT_THROW(in_cylinder(zero, seq, 3), NonGenericMeasure);
}

TEST(Log, RoundTripAndResume) {
  auto t = load_track("q4.ttk");
  auto mu = load_weights("q4_long.weights", t);
  auto full = drive_sequence(t, mu, 20);
  auto text = serialize_sequence(full);
  auto replayed = replay_log(t, mu, parse_log<Rational>(text));
  EXPECT_EQ(serialize_sequence(replayed), text);

  auto half = drive_sequence(t, mu, 10);
  auto resumed = replay_log(t, mu, parse_log<Rational>(serialize_sequence(half)));
  extend_sequence(resumed, 10);
  EXPECT_EQ(serialize_sequence(resumed), text);
}

TEST(Log, GoldenRoundTrip) {
  auto t = load_track("q4.ttk");
  auto mu = load_weights<GoldenField>("q4_golden.weights", t);
  auto text = serialize_sequence(drive_sequence(t, mu, 5));
  EXPECT_EQ(serialize_sequence(replay_log(t, mu, parse_log<GoldenField>(text))), text);
}

TEST(Log, MalformedLogsAreRejected) {
  EXPECT_THROW(parse_log<Rational>("ssl 2\n"), ParseError);
  EXPECT_THROW(parse_log<Rational>("ssl 1\nstep 2 RR 1/1 1/1\n"), ParseError);
  EXPECT_THROW(parse_log<Rational>("ssl 1\nstep 1 RX 1/1 1/1\n"), ParseError);
  auto t = load_track("q4.ttk");
  auto mu = load_weights("q4.weights", t);
  EXPECT_THROW(replay_log(t, mu, parse_log<Rational>("ssl 1\nstep 1 R 1/1 1/1 1/1 1/1 1/1 1/1\n")), ParseError);
}
