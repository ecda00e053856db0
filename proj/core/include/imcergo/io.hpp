#pragma once

// JSON model and gamble documents.
//
// Model:   {"states":["a","b"],
//           "rows":{"a":{"type":"vertices","pmfs":[[0,1]]},
//                   "b":{"type":"intervals","lower":[1,0],"upper":[1,0]}}}
// Gamble:  {"f":{"a":0,"b":1}}  or positional  {"f":[0,1]}

#include "imcergo/model.hpp"

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace imcergo {

struct LoadedModel {
    TransitionModel model;
    /// One entry per bound tightened by reachability normalization.
    std::vector<std::string> warnings;
};

/// Parses and validates a model document. Malformed JSON and schema
/// problems raise Error(SchemaViolation); row problems raise the row's code.
LoadedModel load_model(std::string_view document);
LoadedModel load_model_file(const std::filesystem::path& path);

Gamble load_gamble(std::string_view document, const StateSpace& states);
Gamble load_gamble_file(const std::filesystem::path& path, const StateSpace& states);

/// Inline form `a=0,b=1`; every state must be assigned exactly once.
Gamble parse_inline_gamble(std::string_view text, const StateSpace& states);

std::string read_text_file(const std::filesystem::path& path);

} // namespace imcergo
