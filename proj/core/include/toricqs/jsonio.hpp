#pragma once

#include <string>

#include "toricqs/basespace.hpp"
#include "toricqs/funcspace.hpp"
#include "toricqs/measure.hpp"

namespace toricqs {

/// JSON interchange for spaces, functions, points, and sigma measures.
///
/// Spaces:   {"kind":"simplex","n":2,"scale":1.0}
///           {"kind":"tree","edges":[{"u":"a","v":"b","len":1.0,"density":1.0}]}
///           {"kind":"product","factors":[...]}
/// Functions:{"kind":"monomial","exps":[2,1],"coef":1.0}
///           {"kind":"bump","center":[0.33,0.33],"r":0.1}
///           {"kind":"radial","profile":{...}}    {"kind":"sum","terms":[...]}
///           plus const/product/scale/shift/plateau/box/edge_profile/lift/affine.
/// Sigma:    {"kind":"dirac","point":[0.5],"mass":1.0}
/// Points:   array of numbers (simplex), {"vertex":"a"} or
///           {"edge":["a","b"],"offset":0.3} (tree), array of factor points
///           (product).
///
/// Parse errors carry "line L, column C" for malformed JSON and name the
/// violated predicate for structurally invalid input.

BaseSpace parse_space(const std::string& json_text);
SmoothFunction parse_function(const std::string& json_text);
/// Tree-aware parsing: resolves edge names in edge_profile nodes.
SmoothFunction parse_function_for_space(const std::string& json_text, const BaseSpace& space);
BasePoint parse_point(const std::string& json_text, const BaseSpace& space);
QuasiStateMeasure parse_sigma(const std::string& json_text, const BaseSpace& space);

std::string space_to_json(const BaseSpace& space);
std::string function_to_json(const SmoothFunction& f, const BaseSpace* space = nullptr);
std::string point_to_json(const BasePoint& p, const BaseSpace& space);

/// Reads a whole file; validation_error on missing/unreadable files.
std::string read_file(const std::string& path);

}  // namespace toricqs
