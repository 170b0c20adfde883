#pragma once

// JSON file formats: frames (plain and enriched), models, and algebra dumps.
//
// Frame file:   {"signature": {"box": 1}, "worlds": ["u","v"],
//                "relations": {"box": [["u","v"]]},
//                "n": 2, "r": {"1": [], "2": ["u","v"]}}
// "n" and "r" together mark an enriched frame; "r" keys must be exactly the
// divisors of n, as decimal strings.
//
// Model file:   frame fields plus "n" and
//               "valuation": {"u": {"p": "1/2", "q": 1}}
// values are "num/den" strings with den dividing n, or the integers 0 / 1.
//
// Algebra dump: {"n": 2, "coordinates": [{"label": "u", "grain": 2}],
//                "carrier": [[0],[1],[2]],
//                "operators": {"box": {"arity": 1, "table": [0,1,2]}}}
// carrier entries are numerators over n in carrier order; operator tables
// map mixed-radix argument tuples (first argument most significant) to
// carrier positions.

#include <string>

#include "json.hpp"
#include "lmv/algebra.hpp"
#include "lmv/frames.hpp"
#include "lmv/semantics.hpp"

namespace lmv {

nlohmann::json frame_to_json(const LFrame& f);
nlohmann::json frame_to_json(const LnFrame& f);
LFrame lframe_from_json(const nlohmann::json& j);
LnFrame ln_frame_from_json(const nlohmann::json& j);
bool json_is_ln_frame(const nlohmann::json& j);

nlohmann::json model_to_json(const Model& m);
Model model_from_json(const nlohmann::json& j);

nlohmann::json algebra_to_json(const FiniteMMVAlgebra& a);
FiniteMMVAlgebra algebra_from_json(const nlohmann::json& j);

nlohmann::json load_json_file(const std::string& path);

}  // namespace lmv
