#pragma once

#include "lamkit/fsf_format.hpp"
#include "lamkit/ttk_format.hpp"

#include <fstream>
#include <sstream>
#include <string>

namespace lamkit::testing {

inline std::string data_path(const std::string& name) { return std::string(LAMKIT_DATA_DIR) + "/" + name; }

inline std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

inline TrainTrack load_track(const std::string& name) { return parse_ttk(read_text(data_path(name))); }

template <class Scalar = Rational>
BranchWeights<Scalar> load_weights(const std::string& name, const TrainTrack& t) {
  std::istringstream in(read_text(data_path(name)));
  return read_weights<Scalar>(in, t);
}

template <class T>
FlatSurface<T> load_surface(const std::string& name) {
  return parse_fsf<T>(read_text(data_path(name)));
}

}  // namespace lamkit::testing
