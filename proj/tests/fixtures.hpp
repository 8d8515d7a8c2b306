#pragma once

#include <string>
#include <vector>

#include "pclor/circuit.hpp"

namespace pclor::testing {

inline std::string fixture_path(const std::string& name) {
  return std::string(PCLOR_FIXTURES) + "/" + name;
}

inline Circuit fixture(const std::string& name) { return load_circuit(fixture_path(name)); }

inline TransitionSystem stuttered(const std::string& name) {
  return add_stuttering(encode(fixture(name)));
}

inline TransitionSystem dff_sec() {
  auto d = fixture("dff.scirc");
  return add_stuttering(encode(build_miter(d, d)));
}

inline const std::vector<std::string>& single_circuit_fixtures() {
  static const std::vector<std::string> names{"stuck0.scirc",  "toggle.scirc",    "dff.scirc",
                                              "inverted_dff.scirc", "recoded_dff.scirc",
                                              "counter2.scirc", "two_stage.scirc", "ring3.scirc"};
  return names;
}

}  // namespace pclor::testing
