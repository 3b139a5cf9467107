#pragma once

// JSON files for algebras, recognizers and categories.
//
//   algebra:    {"h":{"size","add","zero"},"v":{"size","mul","one"},"act","ins"?}
//   recognizer: algebra fields plus "alphabet", "letters" {label: v}, "accept" [h]
//   category:   {"objects":{"size","add","zero"},
//                "halfarrows":{"size","add","zero","end"},
//                "arrows":[{"start","end"}], "identity":[u per object],
//                "comp":[[u,v,uv]], "act":[[c,u,cu]], "ins":[[u,c,u+c]]}

#include <stdexcept>
#include <string>

#include "json.hpp"
#include "forest/algebra.hpp"
#include "forest/category.hpp"

namespace forest {

using Json = nlohmann::ordered_json;

/// Malformed input: missing fields, wrong shapes, unreadable files.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

Json read_json_file(const std::string& path);

AlgebraTables tables_from_json(const Json& j);
Json to_json(const FiniteForestAlgebra& a);

/// Validates the algebra; throws AlgebraError on a law violation.
Recognizer recognizer_from_json(const Json& j);
Json to_json(const Recognizer& r);

RawCategory category_from_json(const Json& j);
Json to_json(const ForestCategory& c);

}  // namespace forest
