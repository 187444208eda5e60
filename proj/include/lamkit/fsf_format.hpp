#pragma once

// Flat surface files (.fsf).
//
//   fsf 1
//   coords rational            # or: real
//   polygon 0 0/1 0/1 1/1 0/1 ...    # x y pairs, counterclockwise
//   glue 0 0 0 5 translation   # polygon edge polygon edge kind
//
// Rational files hold exact "p/q" coordinates. Real files accept decimals,
// "p/q" and golden-field tokens "p/q:r/s@5"; they are read as doubles.

#include "lamkit/flat_surface.hpp"
#include "lamkit/ttk_format.hpp"

#include <istream>
#include <sstream>
#include <string>
#include <type_traits>
#include <vector>

namespace lamkit {

namespace detail {

template <class T>
T parse_coordinate(const std::string& tok, int line) {
  try {
    if constexpr (std::is_same_v<T, double>) {
      if (tok.find(':') != std::string::npos) return ScalarTraits<GoldenField>::parse(tok).to_double();
    }
    return ScalarTraits<T>::parse(tok);
  } catch (const ParseError& e) {
    throw ParseError(e.what(), line);
  }
}

}  // namespace detail

/// Reads the coordinate mode line of a surface file without building it.
inline bool fsf_is_rational(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (detail::skip_line(line)) continue;
    auto tok = detail::split_ws(line);
    if (tok.size() == 2 && tok[0] == "coords") return tok[1] == "rational";
  }
  return false;
}

template <class T>
FlatSurface<T> parse_fsf(std::istream& in) {
  std::vector<std::vector<Vec2<T>>> polygons;
  std::vector<Gluing> gluings;
  std::string line;
  int lineno = 0;
  bool header = false;
  bool have_coords = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (detail::skip_line(line)) continue;
    auto tok = detail::split_ws(line);
    if (!header) {
      if (tok.size() != 2 || tok[0] != "fsf") throw ParseError("missing 'fsf' header", lineno);
      if (tok[1] != "1") throw ParseError("unsupported fsf version '" + tok[1] + "'", lineno);
      header = true;
      continue;
    }
    if (tok[0] == "coords") {
      if (tok.size() != 2 || (tok[1] != "rational" && tok[1] != "real"))
        throw ParseError("coords must be 'rational' or 'real'", lineno);
      if (ScalarTraits<T>::exact && tok[1] != "rational")
        throw ParseError("real coordinates cannot be read exactly", lineno);
      have_coords = true;
    } else if (tok[0] == "polygon") {
      if (!have_coords) throw ParseError("polygon before coords line", lineno);
      if (tok.size() < 8 || tok.size() % 2 != 0) throw ParseError("polygon needs at least 3 x y pairs", lineno);
      if (detail::parse_int(tok[1], lineno) != static_cast<int>(polygons.size()))
        throw ParseError("polygons must be numbered consecutively from 0", lineno);
      std::vector<Vec2<T>> poly;
      for (std::size_t i = 2; i < tok.size(); i += 2)
        poly.push_back({detail::parse_coordinate<T>(tok[i], lineno), detail::parse_coordinate<T>(tok[i + 1], lineno)});
      polygons.push_back(std::move(poly));
    } else if (tok[0] == "glue") {
      if (tok.size() != 6) throw ParseError("glue needs: polygon edge polygon edge kind", lineno);
      Gluing g;
      g.first = {detail::parse_int(tok[1], lineno), detail::parse_int(tok[2], lineno)};
      g.second = {detail::parse_int(tok[3], lineno), detail::parse_int(tok[4], lineno)};
      if (tok[5] == "translation")
        g.kind = GlueKind::Translation;
      else if (tok[5] == "half-translation")
        g.kind = GlueKind::HalfTranslation;
      else
        throw ParseError("unknown gluing kind '" + tok[5] + "'", lineno);
      gluings.push_back(g);
    } else {
      throw ParseError("unknown keyword '" + tok[0] + "'", lineno);
    }
  }
  if (!header) throw ParseError("empty surface file");
  return FlatSurface<T>(std::move(polygons), std::move(gluings));
}

template <class T>
FlatSurface<T> parse_fsf(const std::string& text) {
  std::istringstream is(text);
  return parse_fsf<T>(is);
}

template <class T>
std::string serialize_fsf(const FlatSurface<T>& s) {
  std::string out = "fsf 1\ncoords ";
  out += ScalarTraits<T>::exact ? "rational\n" : "real\n";
  for (std::size_t p = 0; p < s.polygons().size(); ++p) {
    out += "polygon " + std::to_string(p);
    for (const auto& v : s.polygons()[p]) out += " " + format_scalar(v.x) + " " + format_scalar(v.y);
    out += "\n";
  }
  for (const auto& g : s.gluings())
    out += "glue " + std::to_string(g.first.polygon) + " " + std::to_string(g.first.edge) + " " +
           std::to_string(g.second.polygon) + " " + std::to_string(g.second.edge) + " " +
           glue_kind_name(g.kind) + "\n";
  return out;
}

}  // namespace lamkit
