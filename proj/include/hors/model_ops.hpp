#pragma once

// Model ops file:
//
//   model tower 2            // optional `base K`: D_0 is the K-chain
//   op s = join              // join | meet | bot | id
//   op o { #0 -> #0 ; #1 -> #2 ; ... }
//   op c { -> #3 }           // nullary
//
// Every signature symbol needs exactly one `op` line; tables must be total
// and monotone.

#include <cstddef>
#include <optional>
#include <string_view>

#include "hors/cpo.hpp"
#include "hors/term.hpp"

namespace hors {

struct TowerSpec {
  std::size_t rank = 2;
  std::size_t base = 2;
};

// Parses `tower:N`.
TowerSpec parse_tower_spec(std::string_view text);

// Builds the tower named in the file (or `tower` when given, which must then
// agree with the file) and attaches one table per symbol of `sig`.
Model load_model(std::string_view ops_text, const Signature& sig,
                 const std::optional<TowerSpec>& tower = std::nullopt);

// The tower alone; `sig` must be empty.
Model load_model(const TowerSpec& tower, const Signature& sig);

}  // namespace hors
