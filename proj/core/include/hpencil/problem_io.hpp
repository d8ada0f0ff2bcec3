#pragma once

#include <string>

#include "hpencil/pencil.hpp"

namespace hpencil::pencil {

/// Problem-file schema (JSON object):
///   {
///     "domain": [a, b],
///     "D": "expr", "V": "expr", "W0": "expr",
///     "poles": [ { "alpha": number, "W": "expr" }, ... ],
///     "bc_left":  { "b0": number, "b1": number },
///     "bc_right": { "b0": number, "b1": number }
///   }
/// Unknown keys are rejected. Throws ValidationError / ParseError.
PencilProblem problem_from_json(const std::string& json_text);
PencilProblem load_problem_file(const std::string& path);

/// Inverse of problem_from_json. All coefficient fields must be
/// expression-backed (sampled and piecewise fields have no text form).
std::string problem_to_json(const PencilProblem& p);

}  // namespace hpencil::pencil
