#pragma once

#include <string>
#include <string_view>

#include "json.hpp"

#include "facloc/analysis.hpp"
#include "facloc/axioms.hpp"
#include "facloc/lp.hpp"
#include "facloc/mechanism.hpp"
#include "facloc/numeric.hpp"
#include "facloc/outcome.hpp"
#include "facloc/profile.hpp"

namespace facloc {

using nlohmann::json;

/// "(0,0,1/3)", "0, 0, 1/3" or "[0,0,1/3]".
Profile parse_profile_inline(std::string_view text, Domain domain);

/// {"domain": "unit_interval" | "real_line", "locations": ["0", "1/3"]}.
/// Locations may also be JSON integers. Errors name the offending field.
Profile profile_from_json(const json& j);
json to_json(const Profile& x);

/// An existing file is read as profile JSON; anything else is parsed inline.
Profile load_profile(const std::string& path_or_inline, Domain domain);

/// {"atoms": [{"x": "0", "p": "2/3"}, ...]}.
json to_json(const OutcomeDistribution& d);
OutcomeDistribution outcome_from_json(const json& j);

json to_json(const Witness& w);
json to_json(const AxiomVerdict& v);
json to_json(const Manipulation& m);
json to_json(const ConstraintSystem& s);
json to_json(const FarkasCertificate& c);
json to_json(const RankWeightsResult& r);
json to_json(const Prop1Result& r);
json to_json(const NumericEstimate& e);

/// One-line human summary of a witness, e.g. "profile (0,0,1) agent 3: 1 > 2/3".
std::string describe(const AxiomVerdict& v);

}  // namespace facloc
