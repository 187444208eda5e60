// Command-line front end.
//
// Exit status: 0 success, 1 domain-level negative (invalid track, non-generic
// measure, no periodicity), 2 usage or parse error.

#include "CLI11.hpp"
#include "json.hpp"

#include "lamkit/flat_surface.hpp"
#include "lamkit/fsf_format.hpp"
#include "lamkit/measures.hpp"
#include "lamkit/sl2z.hpp"
#include "lamkit/splitting.hpp"
#include "lamkit/ssl_format.hpp"
#include "lamkit/ttk_format.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

using namespace lamkit;
using nlohmann::ordered_json;

namespace {

/// Domain-level negative outcome; carries the message shown to the user.
struct DomainFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Globals {
  bool exact = false;
  bool float_mode = false;
  std::uint64_t seed = 1;
  std::string out;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot read '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void emit(const Globals& g, const std::string& text) {
  if (g.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(g.out, std::ios::binary);
  if (!f) throw std::invalid_argument("cannot write '" + g.out + "'");
  f << text;
}

std::string fmt(double x) { return ScalarTraits<double>::format(x); }

bool has_golden_token(const std::string& text) {
  for (const auto& line : [&] {
         std::vector<std::string> v;
         std::istringstream is(text);
         std::string l;
         while (std::getline(is, l))
           if (!detail::skip_line(l)) v.push_back(l);
         return v;
       }())
    if (line.find('@') != std::string::npos) return true;
  return false;
}

std::vector<double> parse_vector(const std::string& s, std::size_t n, const char* what) {
  std::vector<double> v;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.find(':') != std::string::npos)
      v.push_back(ScalarTraits<GoldenField>::parse(tok).to_double());
    else
      v.push_back(ScalarTraits<double>::parse(tok));
  }
  if (v.size() != n) throw std::invalid_argument(std::string(what) + " needs " + std::to_string(n) + " comma-separated numbers");
  return v;
}

// --- train tracks -----------------------------------------------------------

TrainTrack load_track(const std::string& path) { return parse_ttk(read_file(path)); }

int cmd_validate(const Globals& g, const std::string& path) {
  const auto t = load_track(path);
  const auto rep = validate_track(t);
  std::string out;
  if (rep.ok()) {
    out = "valid: " + std::to_string(t.switch_count()) + " switches, " + std::to_string(t.branch_count()) +
          " branches\n";
  } else {
    out = "invalid:\n";
    for (const auto& v : rep.violations) out += "  " + v + "\n";
  }
  emit(g, out);
  return rep.ok() ? 0 : 1;
}

std::vector<std::string> weight_strings(const std::vector<Rational>& w) {
  std::vector<std::string> out;
  for (const auto& x : w) out.push_back(format_rational(x));
  return out;
}

int cmd_cones(const Globals& g, const std::string& path) {
  const auto t = load_track(path);
  const auto rep = validate_track(t);
  if (!rep.ok()) throw DomainFailure("invalid track: " + rep.violations.front());
  ordered_json j;
  j["genus"] = t.surface().genus;
  j["punctures"] = t.surface().punctures;
  j["cone_dimension"] = cone_dimension(t);
  j["expected_dimension"] = 6 * t.surface().genus - 6 + 2 * t.surface().punctures;
  auto rec = is_recurrent(t);
  auto trec = is_transversely_recurrent(t);
  j["recurrent"] = rec.decision;
  if (rec.witness) j["recurrent_witness"] = weight_strings(rec.witness->weights);
  j["transversely_recurrent"] = trec.decision;
  if (trec.witness) j["tangential_witness"] = weight_strings(trec.witness->weights);
  j["large_branches"] = t.large_branches();
  emit(g, j.dump(2) + "\n");
  return 0;
}

int cmd_vertex_cycles(const Globals& g, const std::string& path) {
  const auto t = load_track(path);
  const auto rep = validate_track(t);
  if (!rep.ok()) throw DomainFailure("invalid track: " + rep.violations.front());
  std::string out;
  try {
    for (const auto& v : vertex_cycles(t)) out += serialize_weights(v);
  } catch (const EmptyConeError& e) {
    throw DomainFailure(e.what());
  }
  emit(g, out);
  return 0;
}

int cmd_split(const Globals& g, const std::string& path, int branch, const std::string& dir) {
  const auto t = load_track(path);
  const auto rep = validate_track(t);
  if (!rep.ok()) throw DomainFailure("invalid track: " + rep.violations.front());
  if (dir != "R" && dir != "L") throw std::invalid_argument("direction must be R or L");
  if (branch < 0 || branch >= t.branch_count()) throw std::invalid_argument("branch out of range");
  try {
    auto rec = split(t, branch, dir == "R" ? SplitDirection::Right : SplitDirection::Left);
    emit(g, serialize_ttk(rec.child));
  } catch (const NotSplittable& e) {
    throw DomainFailure(e.what());
  }
  return 0;
}

template <class Scalar>
int drive_impl(const Globals& g, const TrainTrack& t, const std::string& weights_text, int n,
               const std::string& resume) {
  std::istringstream wi(weights_text);
  const auto mu = read_weights<Scalar>(wi, t);
  const auto rep = validate_track(t);
  if (!rep.ok()) throw DomainFailure("invalid track: " + rep.violations.front());
  SplittingSequence<Scalar> seq;
  if (!resume.empty()) {
    check_measure(t, mu);
    seq = replay_log(t, mu, parse_log<Scalar>(read_file(resume)));
  } else {
    try {
      seq = drive_sequence(t, mu, 0);
    } catch (const NonGenericMeasure& e) {
      throw DomainFailure(std::string("non-generic measure: ") + e.what());
    }
  }
  std::string failure;
  while (static_cast<int>(seq.steps.size()) - 1 < n) {
    try {
      extend_sequence(seq, 1);
    } catch (const NonGenericMeasure& e) {
      failure = std::string("non-generic measure: ") + e.what();
      break;
    }
  }
  emit(g, serialize_sequence(seq));
  if (!failure.empty()) throw DomainFailure(failure);
  return 0;
}

int cmd_drive(const Globals& g, const std::string& track, const std::string& weights, int n,
              const std::string& resume) {
  if (n < 0) throw std::invalid_argument("step count must be nonnegative");
  const auto t = load_track(track);
  const auto text = read_file(weights);
  if (g.float_mode) throw std::invalid_argument("drive runs in exact arithmetic only");
  if (has_golden_token(text)) return drive_impl<GoldenField>(g, t, text, n, resume);
  return drive_impl<Rational>(g, t, text, n, resume);
}

template <class Scalar>
int periodicity_impl(const Globals& g, const TrainTrack& t, const std::string& text, int n) {
  std::istringstream wi(text);
  const auto mu = read_weights<Scalar>(wi, t);
  const auto rep = validate_track(t);
  if (!rep.ok()) throw DomainFailure("invalid track: " + rep.violations.front());
  SplittingSequence<Scalar> seq;
  ordered_json j;
  try {
    seq = drive_sequence(t, mu, 0);
    while (static_cast<int>(seq.steps.size()) - 1 < n) {
      extend_sequence(seq, 1);
      if (detect_periodicity(seq)) break;
    }
  } catch (const NonGenericMeasure& e) {
    j["stopped"] = std::string("non-generic measure at step ") + std::to_string(e.step());
  }
  if (seq.steps.empty()) throw DomainFailure(j["stopped"].get<std::string>());
  j["steps"] = static_cast<int>(seq.steps.size()) - 1;
  auto p = detect_periodicity(seq);
  j["found"] = p.has_value();
  if (p) {
    j["i"] = p->i;
    j["j"] = p->j;
    j["switch_map"] = p->iso.switch_map;
    j["branch_map"] = p->iso.branch_map;
    j["flipped"] = p->iso.flipped;
    j["verified"] = verify_periodicity(seq, *p);
    std::vector<std::string> words;
    for (int k = p->i + 1; k <= p->j; ++k) words.push_back(seq.steps[static_cast<std::size_t>(k)].word());
    j["words"] = words;
    Scalar ratio(1);
    for (int k = p->i + 1; k <= p->j; ++k) ratio = ratio * seq.steps[static_cast<std::size_t>(k)].ratio;
    j["period_expansion"] = format_scalar(ratio);
  }
  emit(g, j.dump(2) + "\n");
  return p ? 0 : 1;
}

int cmd_periodicity(const Globals& g, const std::string& track, const std::string& weights, int n) {
  if (n < 1) throw std::invalid_argument("step count must be positive");
  const auto t = load_track(track);
  const auto text = read_file(weights);
  if (has_golden_token(text)) return periodicity_impl<GoldenField>(g, t, text, n);
  return periodicity_impl<Rational>(g, t, text, n);
}

// --- flat surfaces ------------------------------------------------------------

Mat2<double> state_matrix(const std::string& matrix, double geodesic, double horocycle) {
  Mat2<double> m = Mat2<double>::identity();
  if (!matrix.empty()) {
    auto v = parse_vector(matrix, 4, "--matrix");
    m = {v[0], v[1], v[2], v[3]};
    if (!unimodular(m)) throw std::invalid_argument("--matrix must have determinant one");
  }
  return horocycle_flow(horocycle) * geodesic_flow(geodesic) * m;
}

template <class T>
std::string connections_csv(const std::vector<SaddleConnection<T>>& conns) {
  std::string out = "x,y,length,start,end,horizontal\n";
  for (const auto& c : conns)
    out += format_scalar(c.holonomy.x) + "," + format_scalar(c.holonomy.y) + "," + fmt(c.length) + "," +
           std::to_string(c.start_point) + "," + std::to_string(c.end_point) + "," + (c.horizontal ? "1" : "0") +
           "\n";
  return out;
}

int cmd_saddle(const Globals& g, const std::string& path, double L, const std::string& matrix, double geo,
               double horo) {
  if (!(L > 0)) throw std::invalid_argument("length bound must be positive");
  const auto text = read_file(path);
  const bool flowed = !matrix.empty() || geo != 0 || horo != 0;
  if (fsf_is_rational(text) && !g.float_mode && !flowed) {
    FlowState<Rational> st(parse_fsf<Rational>(text));
    // The bound is read as an exact decimal.
    const Rational bound = parse_rational(std::to_string(static_cast<long long>(std::llround(L * 1e6)))) / 1000000;
    emit(g, connections_csv(saddle_connections(st, bound)));
    return 0;
  }
  if (g.exact) throw std::invalid_argument("exact mode needs a rational surface and no flow");
  auto st = apply_matrix(FlowState<double>(parse_fsf<double>(text)), state_matrix(matrix, geo, horo));
  emit(g, connections_csv(saddle_connections(st, L)));
  return 0;
}

int cmd_k_epsilon(const Globals& g, const std::string& path, double eps, const std::string& matrix, double geo,
                  double horo) {
  if (!(eps > 0)) throw std::invalid_argument("epsilon must be positive");
  auto st = apply_matrix(FlowState<double>(parse_fsf<double>(read_file(path))), state_matrix(matrix, geo, horo));
  const auto conns = saddle_connections(st, eps);
  const auto r = short_graph(static_cast<int>(st.base->points().size()), conns, eps);
  ordered_json j;
  j["epsilon"] = eps;
  j["short_connections"] = conns.size();
  j["in_K"] = r.acyclic;
  j["connected"] = r.connected;
  if (!r.acyclic) {
    ordered_json c = ordered_json::array();
    for (std::size_t k = 0; k < r.circuit.size(); ++k) {
      const auto& s = conns[static_cast<std::size_t>(r.circuit[k])];
      c.push_back({{"from", r.circuit_points[k]}, {"x", fmt(s.holonomy.x)}, {"y", fmt(s.holonomy.y)}, {"length", fmt(s.length)}});
    }
    j["circuit"] = c;
    j["certificate_verified"] = verify_circuit(conns, r, eps);
  }
  emit(g, j.dump(2) + "\n");
  return 0;
}

int cmd_horocycle(const Globals& g, const std::string& path, double delta, double T, double dt,
                  const std::string& summary) {
  if (!(delta > 0) || !(T > 0) || !(dt > 0)) throw std::invalid_argument("delta, T and dt must be positive");
  FlowState<double> st(parse_fsf<double>(read_file(path)));
  const auto rep = horocycle_average(st, delta, T, dt);
  std::string csv = "t,systole_lower_bound,in_K\n";
  for (const auto& s : rep.series) csv += fmt(s.t) + "," + fmt(s.systole_bound) + "," + (s.in_k ? "1" : "0") + "\n";
  emit(g, csv);
  ordered_json j;
  j["delta"] = delta;
  j["T"] = T;
  j["dt"] = dt;
  j["samples"] = rep.series.size();
  j["connections"] = rep.base_connections;
  j["fraction"] = rep.fraction;
  const std::string text = j.dump(2) + "\n";
  if (!summary.empty()) {
    std::ofstream f(summary, std::ios::binary);
    if (!f) throw std::invalid_argument("cannot write '" + summary + "'");
    f << text;
  }
  // Keep stdout clean when it carries the CSV.
  (g.out.empty() ? std::cerr : std::cout) << text;
  return 0;
}

int cmd_prepare(const Globals& g, const std::string& path, const std::string& vertical) {
  const auto v = parse_vector(vertical, 2, "--vertical");
  const auto s = normalize_with_vertical(parse_fsf<double>(read_file(path)), {v[0], v[1]});
  emit(g, serialize_fsf(s));
  return 0;
}

// --- SL(2,Z) --------------------------------------------------------------------

struct SeedArgs {
  std::string seed = "1,0";
  double R = 10;
  int depth = 10;
  double explore = 0;
};

std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(tok);
  if (out.size() != 2) throw std::invalid_argument("--point needs two comma-separated coordinates");
  return out;
}

template <class Scalar>
Scalar parse_scalar_token(const std::string& tok) {
  if constexpr (std::is_same_v<Scalar, double>) {
    if (tok.find(':') != std::string::npos) return ScalarTraits<GoldenField>::parse(tok).to_double();
  }
  return ScalarTraits<Scalar>::parse(tok);
}

template <class Scalar>
Scalar scalar_from_double(double x) {
  if constexpr (std::is_same_v<Scalar, double>)
    return x;
  else
    return Scalar(parse_rational(std::to_string(static_cast<long long>(std::llround(x * 1e6)))) / 1000000);
}

template <class Scalar>
int sl2z_impl(const Globals& g, const std::string& what, const SeedArgs& a, const char* mode) {
  const auto tok = split_commas(a.seed);
  const sl2z::Point<Scalar> p{parse_scalar_token<Scalar>(tok[0]), parse_scalar_token<Scalar>(tok[1])};
  if (sign_of(p.x) == 0 && sign_of(p.y) == 0) throw std::invalid_argument("seed must be nonzero");
  if (what == "classify") {
    ordered_json j;
    j["seed"] = a.seed;
    j["mode"] = mode;
    j["class"] = sl2z::seed_class_name(sl2z::classify_seed(p));
    if (!std::is_same_v<Scalar, double>) j["status"] = "exact";
    else j["status"] = "evidence";
    emit(g, j.dump(2) + "\n");
    return 0;
  }
  if (!(a.R > 0) || a.depth < 0) throw std::invalid_argument("R must be positive and depth nonnegative");
  std::optional<Scalar> explore;
  if (a.explore > 0) explore = scalar_from_double<Scalar>(a.explore);
  const auto orbit = sl2z::orbit_ball(p, scalar_from_double<Scalar>(a.R), a.depth, explore);
  if (what == "orbit") {
    std::string csv = "x,y,word\n";
    for (const auto& o : orbit) csv += format_scalar(o.point.x) + "," + format_scalar(o.point.y) + "," + o.word + "\n";
    emit(g, csv);
    return 0;
  }
  ordered_json j;
  j["seed"] = a.seed;
  j["mode"] = mode;
  j["R"] = a.R;
  j["depth"] = a.depth;
  if (a.explore > 0) j["explore_radius"] = a.explore;
  j["counts"] = orbit.size();
  if (orbit.size() >= 2) {
    const auto g2 = sl2z::discreteness_gap2(sl2z::points_of(orbit));
    j["gap"] = std::sqrt(to_double(g2));
    if constexpr (!std::is_same_v<Scalar, double>) j["gap_squared"] = format_scalar(g2);
  } else {
    j["gap"] = nullptr;
  }
  emit(g, j.dump(2) + "\n");
  return 0;
}

int cmd_sl2z(const Globals& g, const std::string& what, const SeedArgs& a) {
  if (g.float_mode) return sl2z_impl<double>(g, what, a, "real");
  if (a.seed.find('@') != std::string::npos) return sl2z_impl<GoldenField>(g, what, a, "golden");
  return sl2z_impl<Rational>(g, what, a, "rational");
}

int cmd_lebesgue(const Globals& g, const std::string& word, std::size_t samples) {
  sl2z::IntMatrix m;
  for (char c : word) m = sl2z::generator(c) * m;
  ordered_json j;
  j["matrix"] = word.empty() ? "I" : word;
  j["samples"] = samples;
  j["seed"] = g.seed;
  j["discrepancy"] = sl2z::lebesgue_invariance_check(m, {}, samples, g.seed);
  emit(g, j.dump(2) + "\n");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"lamkit: train tracks, flat surfaces and the SL(2,Z) model"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  auto* exact = app.add_flag("--exact", g.exact, "Exact arithmetic only");
  app.add_flag("--float", g.float_mode, "Double precision")->excludes(exact);
  app.add_option("--seed", g.seed, "Random seed for randomized runs");
  app.add_option("--out", g.out, "Output file (default: stdout)");

  std::string track, weights, surface, resume, dir, matrix, summary, vertical;
  int n = 0, branch = 0;
  double L = 1, eps = 0.1, geo = 0, horo = 0, delta = 0.05, T = 1000, dt = 0.1;

  auto* validate = app.add_subcommand("validate", "Validate a .ttk track");
  validate->add_option("track", track)->required();
  auto* cones = app.add_subcommand("cones", "Cone dimension and recurrence");
  cones->add_option("track", track)->required();
  auto* vcs = app.add_subcommand("vertex-cycles", "Extreme rays of the transverse cone");
  vcs->add_option("track", track)->required();
  auto* sp = app.add_subcommand("split", "Split a large branch");
  sp->add_option("track", track)->required();
  sp->add_option("branch", branch)->required();
  sp->add_option("direction", dir, "R or L")->required();
  auto* drive = app.add_subcommand("drive", "Drive a full splitting sequence (.ssl)");
  drive->add_option("track", track)->required();
  drive->add_option("weights", weights)->required();
  drive->add_option("steps", n)->required();
  drive->add_option("--resume", resume, "Continue from an existing log");
  auto* per = app.add_subcommand("periodicity", "Drive until the sequence is periodic");
  per->add_option("track", track)->required();
  per->add_option("weights", weights)->required();
  per->add_option("steps", n)->required();

  auto add_flow = [&](CLI::App* c) {
    c->add_option("--matrix", matrix, "a,b,c,d of a determinant-one matrix");
    c->add_option("--geodesic", geo, "Apply diag(e^t, e^-t)");
    c->add_option("--horocycle", horo, "Apply [[1,0],[s,1]] (after the geodesic flow)");
  };
  auto* sc = app.add_subcommand("saddle-connections", "Saddle connections up to a length (CSV)");
  sc->add_option("surface", surface)->required();
  sc->add_option("length", L)->required();
  add_flow(sc);
  auto* ke = app.add_subcommand("k-epsilon", "Circuit test on short saddle connections");
  ke->add_option("surface", surface)->required();
  ke->add_option("epsilon", eps)->required();
  add_flow(ke);
  auto* hz = app.add_subcommand("horocycle-avg", "Horocycle average of the certified systole bound");
  hz->add_option("surface", surface)->required();
  hz->add_option("--delta", delta);
  hz->add_option("--T", T);
  hz->add_option("--dt", dt);
  hz->add_option("--summary", summary, "Write the JSON summary to a file");
  auto* prep = app.add_subcommand("prepare-surface", "Scale to area one and rotate a direction to vertical");
  prep->add_option("surface", surface)->required();
  prep->add_option("--vertical", vertical, "x,y direction made vertical")->required();

  auto* sl = app.add_subcommand("sl2z", "SL(2,Z) orbit model");
  sl->require_subcommand(1);
  sl->fallthrough();
  SeedArgs sa;
  std::string lword;
  std::size_t samples = 1000000;
  auto add_seed = [&](CLI::App* c, bool ball) {
    c->add_option("--point", sa.seed, "Seed x,y (p/q, decimal or p/q:r/s@5)");
    if (!ball) return;
    c->add_option("--R", sa.R, "Norm bound");
    c->add_option("--depth", sa.depth, "Word length bound");
    c->add_option("--explore", sa.explore, "Only follow words whose prefixes stay within this norm");
  };
  auto* orb = sl->add_subcommand("orbit", "Orbit points in a ball (CSV)");
  add_seed(orb, true);
  auto* gap = sl->add_subcommand("gap", "Discreteness gap of the orbit ball (JSON)");
  add_seed(gap, true);
  auto* cls = sl->add_subcommand("classify", "Rational dependence of the seed");
  add_seed(cls, false);
  auto* leb = sl->add_subcommand("lebesgue", "Area invariance check on the unit box");
  leb->add_option("--word", lword, "Matrix as a word in S, T, t");
  leb->add_option("--samples", samples);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*validate) return cmd_validate(g, track);
    if (*cones) return cmd_cones(g, track);
    if (*vcs) return cmd_vertex_cycles(g, track);
    if (*sp) return cmd_split(g, track, branch, dir);
    if (*drive) return cmd_drive(g, track, weights, n, resume);
    if (*per) return cmd_periodicity(g, track, weights, n);
    if (*sc) return cmd_saddle(g, surface, L, matrix, geo, horo);
    if (*ke) return cmd_k_epsilon(g, surface, eps, matrix, geo, horo);
    if (*hz) return cmd_horocycle(g, surface, delta, T, dt, summary);
    if (*prep) return cmd_prepare(g, surface, vertical);
    if (*orb) return cmd_sl2z(g, "orbit", sa);
    if (*gap) return cmd_sl2z(g, "gap", sa);
    if (*cls) return cmd_sl2z(g, "classify", sa);
    if (*leb) return cmd_lebesgue(g, lword, samples);
  } catch (const DomainFailure& e) {
    std::cerr << "lamkit: " << e.what() << "\n";
    return 1;
  } catch (const ParseError& e) {
    std::cerr << "lamkit: parse error: " << e.what() << "\n";
    return 2;
  } catch (const StructuralError& e) {
    std::cerr << "lamkit: malformed track: " << e.what() << "\n";
    return 2;
  } catch (const SurfaceError& e) {
    std::cerr << "lamkit: invalid surface: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "lamkit: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "lamkit: internal error: " << e.what() << "\n";
    return 3;
  }
  return 2;
}
