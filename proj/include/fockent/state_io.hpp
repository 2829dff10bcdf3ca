// Copyright 2026 The fockent Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "fockent/fock.hpp"

namespace fockent {

struct LoadedState {
  PureState state;
  /// Set when the amplitudes had to be renormalized by more than 1e-6.
  std::optional<std::string> warning;
};

/// Parses the state-file schema:
///   {"modes": [{"id", "site": "A"|"B", "kind": "field"|"register", "capacity"}],
///    "terms": [{"occ": [...], "amp": [re, im]}]}
/// Throws ParseError on malformed documents.
LoadedState parse_state(const nlohmann::json& doc);
LoadedState parse_state_text(const std::string& text);
/// Throws IoError when the file cannot be read.
LoadedState load_state_file(const std::string& path);

nlohmann::json state_to_json(const PureState& state);

/// {"modes": [...], "basis": [[occ...]...], "re": [[...]], "im": [[...]]}
nlohmann::json density_to_json(const DensityOperator& rho);
/// Inverse of density_to_json; the result is validated.
DensityOperator density_from_json(const nlohmann::json& doc);

}  // namespace fockent
