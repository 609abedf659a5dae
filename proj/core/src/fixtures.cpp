#include "lvdelay/fixtures.hpp"

namespace lvd {

namespace {

// Shared kernel blocks for the planar examples.
constexpr const char* kDirac2 = R"({
    "K": [[{"kind": "dirac", "tau": 1.0}, {"kind": "dirac", "tau": 1.0}],
          [{"kind": "dirac", "tau": 1.0}, {"kind": "dirac", "tau": 1.0}]],
    "G": [{"kind": "dirac", "tau": 1.0}, {"kind": "dirac", "tau": 1.0}]
  })";

constexpr const char* kGamma2 = R"({
    "K": [[{"kind": "gamma", "m": 1, "gamma": 1.0}, {"kind": "gamma", "m": 1, "gamma": 1.0}],
          [{"kind": "gamma", "m": 1, "gamma": 1.0}, {"kind": "gamma", "m": 1, "gamma": 1.0}]],
    "G": [{"kind": "gamma", "m": 1, "gamma": 1.0}, {"kind": "gamma", "m": 1, "gamma": 1.0}]
  })";

constexpr const char* kHistoryHalf = R"({
    "x": [{"kind": "constant", "value": 0.5}, {"kind": "constant", "value": 0.5}],
    "u": [{"kind": "constant", "value": 0.5}, {"kind": "constant", "value": 0.5}]
  })";

std::string planar(const char* b, const char* mu, const char* a, const char* c,
                   const char* d, const char* e, const char* kernels,
                   const char* history) {
  std::string s = "{\n  \"n\": 2,\n  \"b\": ";
  s += b;
  s += ",\n  \"mu\": ";
  s += mu;
  s += ",\n  \"a\": ";
  s += a;
  s += ",\n  \"c\": ";
  s += c;
  s += ",\n  \"d\": ";
  s += d;
  s += ",\n  \"e\": ";
  s += e;
  s += ",\n  \"kernels\": ";
  s += kernels;
  s += ",\n  \"history\": ";
  s += history;
  s += "\n}\n";
  return s;
}

std::vector<Fixture> make_fixtures() {
  std::vector<Fixture> f;

  f.push_back({"ex2_1",
               "planar mutualism with weak coupling; positive equilibrium, "
               "dominance certificate applies",
               planar("[1.0, 1.0]", "[1.0, 1.0]", "[[0.0, 0.25], [0.25, 0.0]]",
                      "[1.0, 1.0]", "[1.0, 1.0]", "[1.0, 1.0]", kDirac2,
                      kHistoryHalf)});

  f.push_back({"ex2_2",
               "strong cooperation; two saturated equilibria, uniqueness and "
               "attractivity both fail",
               planar("[-2.0, -2.0]", "[1.0, 1.0]", "[[0.0, -4.0], [-4.0, 0.0]]",
                      "[1.0, 1.0]", "[1.0, 1.0]", "[1.0, 1.0]", kDirac2,
                      kHistoryHalf)});

  f.push_back({"ex5_1_uncontrolled",
               "predator-prey with discrete delays; positive equilibrium "
               "(53/80, 1/20)",
               planar("[1.0, -1.25]", "[1.0, 1.0]",
                      "[[0.5, 0.125], [-2.0, 0.5]]", "[0.0, 0.0]", "[1.0, 1.0]",
                      "[1.0, 1.0]", kDirac2, kHistoryHalf)});

  f.push_back({"ex5_1_controlled",
               "predator-prey with a control on the prey (c1 d1/e1 = 0.1) "
               "driving the predators extinct",
               planar("[1.0, -1.25]", "[1.0, 1.0]",
                      "[[0.5, 0.125], [-2.0, 0.5]]", "[0.1, 0.0]", "[1.0, 1.0]",
                      "[1.0, 1.0]", kDirac2, kHistoryHalf)});

  f.push_back({"ex5_2_a1",
               "planar competition (a = 1); species 2 goes extinct with "
               "certified rate 1/3",
               planar("[2.0, 1.0]", "[2.0, 1.0]", "[[1.0, 4.0], [2.0, 2.0]]",
                      "[0.0, 0.0]", "[1.0, 1.0]", "[1.0, 1.0]", kDirac2,
                      kHistoryHalf)});

  f.push_back({"ex5_2_controlled",
               "planar competition (a = 1) with a control on species 1 "
               "(c1 d1/e1 = 0.5) lowering its equilibrium level",
               planar("[2.0, 1.0]", "[2.0, 1.0]", "[[1.0, 4.0], [2.0, 2.0]]",
                      "[0.5, 0.0]", "[1.0, 1.0]", "[1.0, 1.0]", kDirac2,
                      kHistoryHalf)});

  f.push_back({"ex5_3_uncontrolled",
               "exponential-kernel system where species 2 dies out without "
               "controls",
               planar("[1.0, 0.3333333333333333]", "[1.0, 1.0]",
                      "[[0.5, 0.125], [0.5, 0.5]]", "[0.0, 0.0]", "[1.0, 1.0]",
                      "[1.0, 1.0]", kGamma2, kHistoryHalf)});

  f.push_back({"ex5_3_controlled",
               "exponential-kernel system with controls (c_i d_i/e_i = 0.5) "
               "recovering species 2 at a positive level",
               planar("[1.0, 0.3333333333333333]", "[1.0, 1.0]",
                      "[[0.5, 0.125], [0.5, 0.5]]", "[0.5, 0.5]", "[1.0, 1.0]",
                      "[1.0, 1.0]", kGamma2, kHistoryHalf)});

  return f;
}

}  // namespace

const std::vector<Fixture>& fixtures() {
  static const std::vector<Fixture> all = make_fixtures();
  return all;
}

const Fixture& fixture(const std::string& name) {
  for (const Fixture& f : fixtures())
    if (f.name == name) return f;
  throw SpecError("unknown fixture: " + name);
}

LoadedSpec fixture_spec(const std::string& name) {
  return load_spec(fixture(name).config);
}

}  // namespace lvd
