#ifndef LVDELAY_FIXTURES_HPP
#define LVDELAY_FIXTURES_HPP

#include <string>
#include <vector>

#include "lvdelay/config.hpp"

namespace lvd {

/// Built-in example systems, shipped as ready-to-run configurations.
struct Fixture {
  std::string name;
  std::string description;
  std::string config;  // JSON document accepted by load_spec
};

const std::vector<Fixture>& fixtures();

/// Throws SpecError for an unknown name.
const Fixture& fixture(const std::string& name);

LoadedSpec fixture_spec(const std::string& name);

}  // namespace lvd

#endif
