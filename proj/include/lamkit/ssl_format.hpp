#pragma once

// Splitting-sequence logs (.ssl).
//
//   ssl 1
//   step 1 RL 3/2 w0 w1 ...
//   step 2 R 5/4 w0 w1 ...
//
// One line per full split: index, direction word (one letter per large
// branch of the previous track, in increasing branch order; '-' when empty),
// the expansion ratio and the normalized measure. Step 0 is the starting
// track and measure, which the log does not repeat; later tracks are
// recovered by replaying the words.

#include "lamkit/splitting.hpp"
#include "lamkit/ttk_format.hpp"

#include <istream>
#include <sstream>
#include <string>
#include <vector>

namespace lamkit {

template <class Scalar>
struct LogLine {
  int index = 0;
  std::string word;
  Scalar ratio;
  std::vector<Scalar> weights;
};

template <class Scalar>
std::string serialize_step(int index, const SequenceStep<Scalar>& st) {
  const std::string word = st.word();
  std::string out = "step " + std::to_string(index) + " " + (word.empty() ? "-" : word) + " " +
                    format_scalar(st.ratio);
  for (const auto& w : st.measure.weights) out += " " + format_scalar(w);
  return out + "\n";
}

template <class Scalar>
std::string serialize_sequence(const SplittingSequence<Scalar>& seq) {
  std::string out = "ssl 1\n";
  for (std::size_t i = 1; i < seq.steps.size(); ++i) out += serialize_step(static_cast<int>(i), seq.steps[i]);
  return out;
}

template <class Scalar>
std::vector<LogLine<Scalar>> parse_log(std::istream& in) {
  std::vector<LogLine<Scalar>> out;
  std::string line;
  int lineno = 0;
  bool header = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (detail::skip_line(line)) continue;
    auto tok = detail::split_ws(line);
    if (!header) {
      if (tok.size() != 2 || tok[0] != "ssl") throw ParseError("missing 'ssl' header", lineno);
      if (tok[1] != "1") throw ParseError("unsupported ssl version '" + tok[1] + "'", lineno);
      header = true;
      continue;
    }
    if (tok.size() < 4 || tok[0] != "step") throw ParseError("expected a step line", lineno);
    LogLine<Scalar> rec;
    rec.index = detail::parse_int(tok[1], lineno);
    if (rec.index != static_cast<int>(out.size()) + 1)
      throw ParseError("steps must be numbered consecutively from 1", lineno);
    rec.word = tok[2] == "-" ? "" : tok[2];
    for (char c : rec.word)
      if (c != 'R' && c != 'L') throw ParseError("bad direction word '" + tok[2] + "'", lineno);
    try {
      rec.ratio = ScalarTraits<Scalar>::parse(tok[3]);
      for (std::size_t i = 4; i < tok.size(); ++i) rec.weights.push_back(ScalarTraits<Scalar>::parse(tok[i]));
    } catch (const ParseError& e) {
      throw ParseError(e.what(), lineno);
    }
    out.push_back(std::move(rec));
  }
  if (!header) throw ParseError("empty sequence log");
  return out;
}

template <class Scalar>
std::vector<LogLine<Scalar>> parse_log(const std::string& text) {
  std::istringstream is(text);
  return parse_log<Scalar>(is);
}

/// Rebuilds a sequence from the starting state and its log by replaying the
/// recorded words. Every recorded measure is checked against its track.
template <class Scalar>
SplittingSequence<Scalar> replay_log(const TrainTrack& start, const BranchWeights<Scalar>& mu,
                                     const std::vector<LogLine<Scalar>>& lines) {
  SplittingSequence<Scalar> seq;
  seq.steps.push_back({start, {}, {}, normalized(mu), Scalar(1)});
  TrainTrack cur = start;
  for (const auto& rec : lines) {
    auto large = cur.large_branches();
    if (rec.word.size() != large.size())
      throw ParseError("step " + std::to_string(rec.index) + ": word length differs from large-branch count");
    std::vector<SplitDirection> dirs;
    for (std::size_t i = 0; i < large.size(); ++i) {
      dirs.push_back(rec.word[i] == 'R' ? SplitDirection::Right : SplitDirection::Left);
      cur = split(cur, large[i], dirs.back()).child;
    }
    if (static_cast<int>(rec.weights.size()) != cur.branch_count())
      throw ParseError("step " + std::to_string(rec.index) + ": weight count differs from branch count");
    if (!satisfies_switch_conditions(cur, rec.weights))
      throw ParseError("step " + std::to_string(rec.index) + ": measure fails the switch conditions");
    seq.steps.push_back({cur, std::move(large), std::move(dirs),
                         BranchWeights<Scalar>(cur, MeasureKind::Transverse, rec.weights), rec.ratio});
  }
  return seq;
}

}  // namespace lamkit
