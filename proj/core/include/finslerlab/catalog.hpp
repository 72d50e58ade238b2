#pragma once

#include <span>
#include <string_view>

#include "finslerlab/manifold_spec.hpp"

namespace finslerlab {

struct CatalogEntry {
  std::string_view name;
  std::string_view description;
};

/// Built-in spaces: euclidean2, flat-const, flat-nonkilling, rotational-killing,
/// polar-riemannian, sphere-hopf.
std::span<const CatalogEntry> catalog_entries();

/// Throws std::out_of_range for unknown names.
ManifoldSpec catalog_spec(std::string_view name);

}  // namespace finslerlab
