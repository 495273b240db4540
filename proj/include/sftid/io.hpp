#ifndef SFTID_IO_HPP
#define SFTID_IO_HPP

// JSON and CSV forms of grammars, potentials, identification results and
// experiment configs/reports.
//
//   grammar    {"theta": 2, "matrix": [[1,1],[1,0]]}
//   potential  {"theta": 2, "range": 2, "entries": [{"word": "11", "value": 2.5}]}
//   result     {"n": 4, "scores": [...], "ml_set": [1], "min_entropy_set": [1]}
//
// Parse failures throw InvalidArgument naming the line (for syntax errors)
// or the offending field path (for schema errors).

#include "sftid/experiments.hpp"
#include "sftid/gibbs.hpp"
#include "sftid/identification.hpp"
#include "sftid/symbolic.hpp"

#include <json.hpp>

#include <string>
#include <string_view>
#include <vector>

namespace sftid::io {

using Json = nlohmann::ordered_json;

/// Parses JSON text; syntax errors report line and column.
Json parse_json(std::string_view text, std::string_view source = "input");

Json to_json(const Grammar& g);
Grammar grammar_from_json(const Json& j, const std::string& path = "grammar");

Json to_json(const std::vector<Grammar>& gs);
/// Accepts an array of grammar objects or {"grammars": [...]}.
std::vector<Grammar> grammars_from_json(const Json& j, const std::string& path = "grammars");

/// Entries are the nonzero table values in ascending word order.
Json to_json(const Potential& phi);
Potential potential_from_json(const Json& j, const std::string& path = "potential");

/// Accepts "0110", [0,1,1,0] or {"word": ...}.
Word word_from_json(const Json& j, const std::string& path = "word");
/// Digit string when theta <= 10, integer array otherwise.
Json word_to_json(std::span<const Symbol> w, int theta);

Json to_json(const IdentificationOutcome& outcome);
/// {"pressure": ..., "entropy": ..., "lambda": ...}
Json chain_summary(const GibbsChain& chain);

Json to_json(const ExperimentConfig& cfg);
/// Unset fields take default_config(experiment) values; unknown fields are
/// rejected.
ExperimentConfig config_from_json(const Json& j);

Json to_json(const ExperimentReport& report);
/// Header "n,frequency,mean_score_gap", one row per checkpoint.
std::string curve_csv(const ExperimentReport& report);

/// Finite values as numbers, -inf as the string "-inf", NaN as null.
Json number(double x);

} // namespace sftid::io

#endif
