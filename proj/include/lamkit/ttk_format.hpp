#pragma once

// Line-oriented text format for train tracks (.ttk) and branch weights.
//
//   ttk 1
//   surface <genus> <punctures>
//   switch 0
//   switch 1
//   ...
//   branch 0 (0,L) (1,SL)
//   ...
//   puncture-region <switch whose cusp lies in the punctured region>
//
// Blank lines and lines starting with '#' are ignored. Weight vectors are one
// line: `weights transverse|tangential w0 w1 ...` with rationals as p/q.

#include "lamkit/measures.hpp"

#include <istream>
#include <sstream>
#include <string>
#include <vector>

namespace lamkit {

namespace detail {

inline std::vector<std::string> split_ws(const std::string& line) {
  std::istringstream is(line);
  std::vector<std::string> out;
  std::string tok;
  while (is >> tok) out.push_back(tok);
  return out;
}

inline bool skip_line(const std::string& line) {
  auto pos = line.find_first_not_of(" \t\r");
  return pos == std::string::npos || line[pos] == '#';
}

inline int parse_int(const std::string& tok, int line) {
  std::size_t pos = 0;
  int v = 0;
  try {
    v = std::stoi(tok, &pos);
  } catch (const std::exception&) {
    throw ParseError("expected integer, got '" + tok + "'", line);
  }
  if (pos != tok.size()) throw ParseError("expected integer, got '" + tok + "'", line);
  return v;
}

inline Slot parse_slot(const std::string& tok, int line) {
  if (tok == "L") return Slot::Large;
  if (tok == "SL") return Slot::SmallLeft;
  if (tok == "SR") return Slot::SmallRight;
  throw ParseError("unknown slot token '" + tok + "'", line);
}

inline HalfBranch parse_half_branch(const std::string& tok, int line) {
  if (tok.size() < 5 || tok.front() != '(' || tok.back() != ')')
    throw ParseError("malformed half-branch '" + tok + "'", line);
  auto comma = tok.find(',');
  if (comma == std::string::npos) throw ParseError("malformed half-branch '" + tok + "'", line);
  return {parse_int(tok.substr(1, comma - 1), line),
          parse_slot(tok.substr(comma + 1, tok.size() - comma - 2), line)};
}

}  // namespace detail

inline TrainTrack parse_ttk(std::istream& in) {
  std::string line;
  int lineno = 0;
  bool have_header = false;
  bool have_surface = false;
  SurfaceKind surface;
  int switches = 0;
  std::vector<Branch> branches;
  std::vector<int> punctures;
  while (std::getline(in, line)) {
    ++lineno;
    if (detail::skip_line(line)) continue;
    auto tok = detail::split_ws(line);
    if (!have_header) {
      if (tok.size() != 2 || tok[0] != "ttk") throw ParseError("missing 'ttk' header", lineno);
      if (tok[1] != "1") throw ParseError("unsupported ttk version '" + tok[1] + "'", lineno);
      have_header = true;
      continue;
    }
    const std::string& kw = tok[0];
    if (kw == "surface") {
      if (tok.size() != 3 || have_surface) throw ParseError("bad surface line", lineno);
      surface = {detail::parse_int(tok[1], lineno), detail::parse_int(tok[2], lineno)};
      have_surface = true;
    } else if (kw == "switch") {
      if (tok.size() != 2) throw ParseError("bad switch line", lineno);
      if (detail::parse_int(tok[1], lineno) != switches)
        throw ParseError("switches must be numbered consecutively from 0", lineno);
      ++switches;
    } else if (kw == "branch") {
      if (tok.size() != 4) throw ParseError("bad branch line", lineno);
      if (detail::parse_int(tok[1], lineno) != static_cast<int>(branches.size()))
        throw ParseError("branches must be numbered consecutively from 0", lineno);
      branches.push_back(
          {{detail::parse_half_branch(tok[2], lineno), detail::parse_half_branch(tok[3], lineno)}});
    } else if (kw == "puncture-region") {
      if (tok.size() != 2) throw ParseError("bad puncture-region line", lineno);
      punctures.push_back(detail::parse_int(tok[1], lineno));
    } else {
      throw ParseError("unknown keyword '" + kw + "'", lineno);
    }
  }
  if (!have_header) throw ParseError("empty track file");
  if (!have_surface) throw ParseError("missing surface line");
  return TrainTrack(surface, switches, std::move(branches), std::move(punctures));
}

inline TrainTrack parse_ttk(const std::string& text) {
  std::istringstream is(text);
  return parse_ttk(is);
}

inline std::string serialize_ttk(const TrainTrack& track) {
  std::ostringstream os;
  os << "ttk 1\n";
  os << "surface " << track.surface().genus << " " << track.surface().punctures << "\n";
  for (int s = 0; s < track.switch_count(); ++s) os << "switch " << s << "\n";
  for (int b = 0; b < track.branch_count(); ++b) {
    const auto& br = track.branch(b);
    os << "branch " << b;
    for (const auto& e : br.ends) os << " (" << e.switch_id << "," << slot_name(e.slot) << ")";
    os << "\n";
  }
  for (int s : track.puncture_switches()) os << "puncture-region " << s << "\n";
  return os.str();
}

template <class Scalar = Rational>
BranchWeights<Scalar> parse_weights(const std::string& line, const TrainTrack& track, int lineno = 0) {
  auto tok = detail::split_ws(line);
  if (tok.size() < 2 || tok[0] != "weights") throw ParseError("expected 'weights' line", lineno);
  MeasureKind kind;
  if (tok[1] == "transverse")
    kind = MeasureKind::Transverse;
  else if (tok[1] == "tangential")
    kind = MeasureKind::Tangential;
  else
    throw ParseError("unknown measure kind '" + tok[1] + "'", lineno);
  if (static_cast<int>(tok.size()) - 2 != track.branch_count())
    throw ParseError("weight count " + std::to_string(tok.size() - 2) + " differs from branch count " +
                         std::to_string(track.branch_count()),
                     lineno);
  std::vector<Scalar> w;
  for (std::size_t i = 2; i < tok.size(); ++i) {
    try {
      w.push_back(ScalarTraits<Scalar>::parse(tok[i]));
    } catch (const ParseError& e) {
      throw ParseError(e.what(), lineno);
    }
  }
  return BranchWeights<Scalar>(track, kind, std::move(w));
}

/// First non-comment line of a stream, parsed as weights.
template <class Scalar = Rational>
BranchWeights<Scalar> read_weights(std::istream& in, const TrainTrack& track) {
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (detail::skip_line(line)) continue;
    return parse_weights<Scalar>(line, track, lineno);
  }
  throw ParseError("no weights line found");
}

template <class Scalar>
std::string serialize_weights(const BranchWeights<Scalar>& w) {
  std::string out = std::string("weights ") + measure_kind_name(w.kind);
  for (const auto& v : w.weights) out += " " + format_scalar(v);
  return out + "\n";
}

}  // namespace lamkit
