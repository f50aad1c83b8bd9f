#include "ite/io.hpp"

#include <fstream>
#include <sstream>

#include "ite/errors.hpp"

namespace ite {

namespace {

template <class T>
T field(const json& j, const char* key, const std::string& where) {
  if (!j.is_object()) throw ParseError(where + ": expected a JSON object");
  auto it = j.find(key);
  if (it == j.end()) throw ParseError(where + ": missing field '" + key + "'");
  if constexpr (std::is_floating_point_v<T>) {
    if (!it->is_number()) throw ParseError(where + "." + key + ": expected a number");
  } else if constexpr (std::is_integral_v<T>) {
    if (!it->is_number_integer()) throw ParseError(where + "." + key + ": expected an integer");
  } else if constexpr (std::is_same_v<T, std::string>) {
    if (!it->is_string()) throw ParseError(where + "." + key + ": expected a string");
  }
  try {
    return it->template get<T>();
  } catch (const json::exception& e) {
    throw ParseError(where + "." + key + ": " + e.what());
  }
}

const json& array_field(const json& j, const char* key, const std::string& where) {
  if (!j.is_object()) throw ParseError(where + ": expected a JSON object");
  auto it = j.find(key);
  if (it == j.end()) throw ParseError(where + ": missing field '" + key + "'");
  if (!it->is_array()) throw ParseError(where + "." + key + ": expected an array");
  return *it;
}

const json& object_field(const json& j, const char* key, const std::string& where) {
  if (!j.is_object()) throw ParseError(where + ": expected a JSON object");
  auto it = j.find(key);
  if (it == j.end()) throw ParseError(where + ": missing field '" + key + "'");
  if (!it->is_object()) throw ParseError(where + "." + key + ": expected an object");
  return *it;
}

}  // namespace

json parse_json(const std::string& text, const std::string& source) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    // Translate the byte offset into line and column.
    std::size_t line = 1, col = 1;
    const std::size_t end = std::min<std::size_t>(e.byte > 0 ? e.byte - 1 : 0, text.size());
    for (std::size_t i = 0; i < end; ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ParseError(source + ":" + std::to_string(line) + ":" + std::to_string(col) +
                     ": malformed JSON (" + e.what() + ")");
  }
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json read_json_file(const std::string& path) { return parse_json(read_text_file(path), path); }

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw UsageError("cannot write '" + path + "'");
  out << content;
  if (!out) throw UsageError("write to '" + path + "' failed");
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

json to_json(const RefractionProfile& profile) {
  switch (profile.kind()) {
    case RefractionProfile::Kind::Constant:
      return {{"kind", "constant"}, {"value", profile.parameter()}};
    case RefractionProfile::Kind::SmoothBump:
      return {{"kind", "smooth_bump"}, {"c", profile.parameter()}};
    case RefractionProfile::Kind::Polynomial:
      break;
  }
  return {{"kind", "poly"}, {"coeffs", profile.coefficients()}};
}

RefractionProfile profile_from_json(const json& j) {
  const std::string kind = field<std::string>(j, "kind", "profile");
  if (kind == "constant") return RefractionProfile::constant(field<double>(j, "value", "profile"));
  if (kind == "smooth_bump") return RefractionProfile::smooth_bump(field<double>(j, "c", "profile"));
  if (kind == "poly") {
    const json& arr = array_field(j, "coeffs", "profile");
    std::vector<double> c;
    for (std::size_t i = 0; i < arr.size(); ++i) {
      if (!arr[i].is_number()) {
        throw ParseError("profile.coeffs[" + std::to_string(i) + "]: expected a number");
      }
      c.push_back(arr[i].get<double>());
    }
    if (c.empty()) throw ParseError("profile.coeffs: at least one coefficient required");
    return RefractionProfile::polynomial(std::move(c));
  }
  throw ParseError("profile.kind: unknown kind '" + kind + "'");
}

RefractionProfile load_profile(const std::string& path_or_json) {
  const auto first = path_or_json.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && path_or_json[first] == '{') {
    return profile_from_json(parse_json(path_or_json, "--profile"));
  }
  return profile_from_json(read_json_file(path_or_json));
}

json to_json(const BoxRegion& b) {
  return {{"re_min", b.re_min}, {"re_max", b.re_max}, {"im_min", b.im_min}, {"im_max", b.im_max}};
}

BoxRegion box_from_json(const json& j, const std::string& where) {
  return BoxRegion::make(field<double>(j, "re_min", where), field<double>(j, "re_max", where),
                         field<double>(j, "im_min", where), field<double>(j, "im_max", where));
}

json to_json(const Wedge& w) {
  return {{"theta_min", w.theta_min}, {"theta_max", w.theta_max}, {"label", to_string(w.label)}};
}

Wedge wedge_from_json(const json& j, const std::string& where) {
  Wedge::Label label = Wedge::Label::Custom;
  if (j.is_object() && j.contains("label")) {
    label = wedge_label_from_string(field<std::string>(j, "label", where));
  }
  return Wedge::make(field<double>(j, "theta_min", where), field<double>(j, "theta_max", where),
                     label);
}

json to_json(const SolverOptions& o) {
  return {{"rtol", o.rtol}, {"atol", o.atol}, {"k_max", o.k_max}, {"max_steps", o.max_steps}};
}

json to_json(const ZeroFinderOptions& o) {
  return {{"samples0", o.samples0},
          {"tol", o.tol},
          {"min_box", o.min_box},
          {"newton_box", o.newton_box},
          {"origin_box", o.origin_box},
          {"degenerate_floor", o.degenerate_floor},
          {"degenerate_samples", o.degenerate_samples},
          {"max_dilations", o.max_dilations},
          {"dilation", o.dilation},
          {"winding",
           {{"max_depth", o.winding.max_depth},
            {"rel_floor", o.winding.rel_floor},
            {"lattice_spacing", o.winding.lattice_spacing}}},
          {"solver", to_json(o.solver)},
          {"symmetry_completion", o.symmetry_completion}};
}

json to_json(const ZeroSet& zs) {
  json zeros = json::array();
  for (const Zero& z : zs.zeros) {
    zeros.push_back(
        {{"re", z.k.real()}, {"im", z.k.imag()}, {"mult", z.multiplicity}, {"residual", z.residual},
         {"confirm_radius", z.confirm_radius}});
  }
  json unresolved = json::array();
  for (const UnresolvedBox& u : zs.unresolved) {
    unresolved.push_back({{"box", to_json(u.box)}, {"winding", u.winding}});
  }
  return {{"profile_hash", zs.profile_id},
          {"region", to_json(zs.region)},
          {"total_winding", zs.total_winding},
          {"zeros", zeros},
          {"diagnostics",
           {{"evaluations", zs.evaluations},
            {"dilations", zs.dilations},
            {"completed_by_symmetry", zs.completed_by_symmetry},
            {"unresolved", unresolved}}}};
}

ZeroSet zero_set_from_json(const json& j) {
  ZeroSet zs;
  zs.profile_id = field<std::string>(j, "profile_hash", "zero_set");
  zs.region = box_from_json(object_field(j, "region", "zero_set"), "zero_set.region");
  zs.total_winding = field<int>(j, "total_winding", "zero_set");
  const json& arr = array_field(j, "zeros", "zero_set");
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const std::string where = "zero_set.zeros[" + std::to_string(i) + "]";
    Zero z;
    z.k = cplx(field<double>(arr[i], "re", where), field<double>(arr[i], "im", where));
    z.multiplicity = field<int>(arr[i], "mult", where);
    if (arr[i].contains("residual")) z.residual = field<double>(arr[i], "residual", where);
    if (arr[i].contains("confirm_radius")) {
      z.confirm_radius = field<double>(arr[i], "confirm_radius", where);
    }
    zs.zeros.push_back(z);
  }
  if (j.contains("diagnostics")) {
    const json& d = object_field(j, "diagnostics", "zero_set");
    const std::string where = "zero_set.diagnostics";
    zs.evaluations = field<long>(d, "evaluations", where);
    zs.dilations = field<int>(d, "dilations", where);
    zs.completed_by_symmetry = field<int>(d, "completed_by_symmetry", where);
    const json& un = array_field(d, "unresolved", where);
    for (std::size_t i = 0; i < un.size(); ++i) {
      const std::string w = where + ".unresolved[" + std::to_string(i) + "]";
      zs.unresolved.push_back({box_from_json(object_field(un[i], "box", w), w + ".box"),
                               field<int>(un[i], "winding", w)});
    }
  }
  return zs;
}

json to_json(const Spectrum& s) {
  json ev = json::array();
  for (const cplx& k : s.eigenvalues) ev.push_back({{"re", k.real()}, {"im", k.imag()}});
  return {{"wedge", to_json(s.wedge)}, {"r_max", s.r_max}, {"eigenvalues", ev}};
}

Spectrum spectrum_from_json(const json& j) {
  const Wedge w = wedge_from_json(object_field(j, "wedge", "spectrum"), "spectrum.wedge");
  const double r_max = field<double>(j, "r_max", "spectrum");
  const json& arr = array_field(j, "eigenvalues", "spectrum");
  std::vector<cplx> ev;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const std::string where = "spectrum.eigenvalues[" + std::to_string(i) + "]";
    ev.emplace_back(field<double>(arr[i], "re", where), field<double>(arr[i], "im", where));
  }
  return Spectrum::make(std::move(ev), w, r_max);
}

json to_json(const DensityEstimate& d) {
  return {{"delta_hat", d.delta_hat},
          {"fit_window", {d.fit_window.first, d.fit_window.second}},
          {"intercept", d.intercept},
          {"residual", d.residual},
          {"max_deviation", d.max_deviation},
          {"fit_error", d.fit_error},
          {"zeros_in_window", d.zeros_in_window}};
}

std::string density_counts_csv(const DensityEstimate& d) {
  std::string out = "r,N(r)\n";
  for (const auto& [r, n] : d.counts) {
    out += json(r).dump() + "," + std::to_string(n) + "\n";
  }
  return out;
}

json to_json(const UniquenessVerdict& v) {
  json j = {{"conclusion", to_string(v.conclusion)},
            {"same_B", v.same_b},
            {"B1_hat", v.b1_hat ? json(*v.b1_hat) : json(nullptr)},
            {"B2_hat", v.b2_hat ? json(*v.b2_hat) : json(nullptr)},
            {"B_tolerance", v.b_tolerance},
            {"matched_pairs", v.matched_pairs},
            {"max_pair_distance", v.max_pair_distance},
            {"unmatched", v.unmatched},
            {"far_unmatched", v.far_unmatched},
            {"witness", v.witness}};
  return j;
}

json to_json(const ValidationReport& r) {
  return {{"valid", r.valid},
          {"positive", r.positive},
          {"min_n", r.min_n},
          {"min_n_at", r.min_n_at},
          {"jump_n", r.jump_n},
          {"jump_dn", r.jump_dn},
          {"jump_d2n", r.jump_d2n},
          {"smoothness_warning", r.smoothness_warning}};
}

}  // namespace ite
