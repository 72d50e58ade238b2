#include "finslerlab/catalog.hpp"

#include <array>
#include <stdexcept>
#include <string>

namespace finslerlab {
namespace {

constexpr std::array<CatalogEntry, 6> kEntries = {{
    {"euclidean2", "flat plane, beta = 0 (Riemannian)"},
    {"flat-const", "flat plane, constant beta = (0.5, 0): parallel, admits"},
    {"flat-nonkilling", "flat plane, beta = (0.4 x1, 0): not a Killing form"},
    {"rotational-killing", "flat plane, beta = 0.3 (x2, -x1): Killing, length not constant"},
    {"polar-riemannian", "Euclidean plane in polar coordinates, beta = 0"},
    {"sphere-hopf", "round 3-sphere (stereographic), beta = 0.3 x lowered Hopf field: Killing, constant length, "
                    "not parallel"},
}};

ManifoldSpec flat(std::string name, std::string b1, std::string b2) {
  ManifoldSpec s;
  s.name = std::move(name);
  s.dimension = 2;
  s.coordinates = {"x1", "x2"};
  s.metric = {{"1", "0"}, {"0", "1"}};
  s.beta = {std::move(b1), std::move(b2)};
  s.domain = {{-2.0, 2.0}, {-2.0, 2.0}};
  return s;
}

}  // namespace

std::span<const CatalogEntry> catalog_entries() { return kEntries; }

ManifoldSpec catalog_spec(std::string_view name) {
  ManifoldSpec s;
  if (name == "euclidean2") {
    s = flat("euclidean2", "0", "0");
  } else if (name == "flat-const") {
    s = flat("flat-const", "0.5", "0");
  } else if (name == "flat-nonkilling") {
    s = flat("flat-nonkilling", "0.4*x1", "0");
  } else if (name == "rotational-killing") {
    s = flat("rotational-killing", "0.3*x2", "-0.3*x1");
  } else if (name == "polar-riemannian") {
    s.name = "polar-riemannian";
    s.dimension = 2;
    s.coordinates = {"x1", "x2"};
    s.metric = {{"1", "0"}, {"0", "x1^2"}};
    s.beta = {"0", "0"};
    s.domain = {{0.5, 2.0}, {-3.0, 3.0}};
  } else if (name == "sphere-hopf") {
    // Stereographic chart of the unit 3-sphere; beta is 0.3 times the Hopf
    // field (-y1, y0, -y3, y2) lowered with the round metric, so ||beta|| = 0.3.
    const std::string denom = "(1 + x1^2 + x2^2 + x3^2)^2";
    const std::string a = "4/" + denom;
    s.name = "sphere-hopf";
    s.dimension = 3;
    s.coordinates = {"x1", "x2", "x3"};
    s.metric = {{a, "0", "0"}, {"0", a, "0"}, {"0", "0", a}};
    s.beta = {"1.2*(x1*x3 - x2)/" + denom, "1.2*(x1 + x2*x3)/" + denom, "0.6*(1 + x3^2 - x1^2 - x2^2)/" + denom};
    s.domain = {{-2.0, 2.0}, {-2.0, 2.0}, {-2.0, 2.0}};
  } else {
    throw std::out_of_range("unknown catalog space '" + std::string(name) + "'");
  }
  for (const auto& e : kEntries) {
    if (e.name == name) s.description = e.description;
  }
  return s;
}

}  // namespace finslerlab
