#pragma once

#include <string>

#include <json.hpp>

#include "ite/cartwright.hpp"
#include "ite/inverse.hpp"
#include "ite/profile.hpp"
#include "ite/zero_finder.hpp"

namespace ite {

using json = nlohmann::ordered_json;

/// Parses JSON text; ParseError carries line and column.
json parse_json(const std::string& text, const std::string& source = "<input>");
json read_json_file(const std::string& path);
std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);
/// Pretty JSON with a trailing newline. Doubles use the shortest text that
/// round-trips exactly.
std::string dump(const json& j);

json to_json(const RefractionProfile& profile);
RefractionProfile profile_from_json(const json& j);
/// Inline JSON when the argument starts with '{', otherwise a file path.
RefractionProfile load_profile(const std::string& path_or_json);

json to_json(const BoxRegion& box);
BoxRegion box_from_json(const json& j, const std::string& where = "region");

json to_json(const Wedge& wedge);
Wedge wedge_from_json(const json& j, const std::string& where = "wedge");

json to_json(const ZeroFinderOptions& options);
json to_json(const SolverOptions& options);

json to_json(const ZeroSet& zs);
ZeroSet zero_set_from_json(const json& j);

json to_json(const Spectrum& s);
Spectrum spectrum_from_json(const json& j);

json to_json(const DensityEstimate& d);
/// Header "r,N(r)" followed by one row per grid radius.
std::string density_counts_csv(const DensityEstimate& d);

json to_json(const UniquenessVerdict& v);
json to_json(const ValidationReport& r);

}  // namespace ite
