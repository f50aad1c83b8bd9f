#include "ite/cli.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "ite/cartwright.hpp"
#include "ite/errors.hpp"
#include "ite/inverse.hpp"
#include "ite/io.hpp"
#include "ite/profile.hpp"
#include "ite/zero_finder.hpp"

namespace ite::cli {

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  return out;
}

double parse_number(const std::string& raw, const std::string& what) {
  std::string s;
  for (char c : raw) {
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  }
  try {
    // Accepts plain numbers and the forms [-][a*]pi[/b].
    const auto p = s.find("pi");
    if (p == std::string::npos) {
      std::size_t used = 0;
      const double v = std::stod(s, &used);
      if (used != s.size()) throw std::invalid_argument(s);
      return v;
    }
    double coef = 1.0;
    std::string head = s.substr(0, p);
    if (head == "-") {
      coef = -1.0;
    } else if (!head.empty()) {
      if (head.back() != '*') throw std::invalid_argument(s);
      coef = std::stod(head.substr(0, head.size() - 1));
    }
    std::string tail = s.substr(p + 2);
    double den = 1.0;
    if (!tail.empty()) {
      if (tail[0] != '/') throw std::invalid_argument(s);
      std::size_t used = 0;
      den = std::stod(tail.substr(1), &used);
      if (used + 1 != tail.size()) throw std::invalid_argument(s);
    }
    return coef * kPi / den;
  } catch (const std::invalid_argument&) {
  } catch (const std::out_of_range&) {
  }
  throw UsageError(what + ": cannot parse '" + raw + "' as a number");
}

std::vector<double> parse_list(const std::string& s, const std::string& what,
                               std::size_t expected = 0) {
  std::vector<double> out;
  for (const std::string& tok : split(s, ',')) out.push_back(parse_number(tok, what));
  if (expected && out.size() != expected) {
    throw UsageError(what + ": expected " + std::to_string(expected) + " comma-separated values");
  }
  return out;
}

BoxRegion parse_box(const std::string& s) {
  const auto v = parse_list(s, "--box", 4);
  return BoxRegion::make(v[0], v[1], v[2], v[3]);
}

std::pair<double, double> parse_window(const std::string& s) {
  const auto v = parse_list(s, "--window", 2);
  if (!(v[0] >= 0.0 && v[1] > v[0])) throw UsageError("--window requires 0 <= r_lo < r_hi");
  return {v[0], v[1]};
}

Wedge parse_wedge(const std::string& s, double eps) {
  if (s == "sigma1") return Wedge::sigma1(eps);
  if (s == "sigma2") return Wedge::sigma2(eps);
  if (s == "off_axis_upper") return Wedge::off_axis_upper(eps);
  if (s == "off_axis_lower") return Wedge::off_axis_lower(eps);
  const auto v = parse_list(s, "--wedge", 2);
  return Wedge::make(v[0], v[1]);
}

// Box covering the wedge sector 1 <= |k| <= r with a margin that never moves
// a side across the axes.
BoxRegion auto_region(const Wedge& w, double r) {
  const BoxRegion b = w.sector_bounds(kDefaultInnerRadius, r);
  const double m = 0.25;
  auto lower = [&](double x) { return x > 0.0 ? std::max(x - m, 0.5 * x) : x - m; };
  auto upper = [&](double x) { return x < 0.0 ? std::min(x + m, 0.5 * x) : x + m; };
  return BoxRegion::make(lower(b.re_min), upper(b.re_max), lower(b.im_min), upper(b.im_max));
}

void emit(const std::string& text, const std::string& output, std::ostream& out) {
  if (output.empty()) {
    out << text;
  } else {
    write_text_file(output, text);
  }
}

int exit_code(const Error& e) {
  return e.error_class() == ErrorClass::Validation ? kExitValidation : kExitNumerical;
}

void diagnose(std::ostream& err, const std::string& kind, const std::string& message, int code) {
  json d = {{"error", kind}, {"message", message}, {"exit_code", code}};
  err << d.dump() << "\n";
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Interior transmission eigenvalues of a radially stratified ball", "ite_cli"};
  app.require_subcommand(1);

  std::string profile_arg, box_arg, wedge_arg = "sigma1", window_arg = "50,200";
  std::string spectrum_arg, against_arg, zeros_arg, output, format = "json";
  std::string theta_arg = "pi/6,pi/3,pi/2", mode_arg = "dirichlet", as_spectrum;
  double eps = 0.1, tol = 1e-10, rtol = 1e-11, pair_tol = kDefaultPairTol, r_max = 200.0;
  double k_max = 30.0;
  int radii = 32;
  bool no_symmetry = false;

  auto add_common = [&](CLI::App* c) {
    c->add_option("--output,-o", output, "Artifact path (default stdout)");
  };
  auto add_solver = [&](CLI::App* c) {
    c->add_option("--rtol", rtol, "Integrator relative tolerance")->check(CLI::PositiveNumber);
  };
  auto add_finder = [&](CLI::App* c) {
    add_solver(c);
    c->add_option("--tol", tol, "Zero refinement tolerance")->check(CLI::PositiveNumber);
    c->add_flag("--no-symmetry", no_symmetry, "Skip symmetry completion");
  };

  CLI::App* eigs = app.add_subcommand("eigs", "Zeros of D in a box");
  eigs->add_option("--profile", profile_arg, "Profile JSON file or inline JSON")->required();
  eigs->add_option("--box", box_arg, "re_min,re_max,im_min,im_max")->required();
  eigs->add_option("--as-spectrum", as_spectrum,
                   "Emit the zeros inside this wedge (sigma1, ..., or tmin,tmax) as a spectrum");
  eigs->add_option("--eps", eps, "Half-angle of the named wedges");
  eigs->add_option("--r-max", r_max, "Spectrum radius for --as-spectrum");
  add_finder(eigs);
  add_common(eigs);

  CLI::App* density = app.add_subcommand("density", "Wedge zero density");
  auto* dprof = density->add_option("--profile", profile_arg, "Profile JSON file or inline JSON");
  auto* dzeros = density->add_option("--zeros", zeros_arg, "Precomputed zero set JSON");
  dprof->excludes(dzeros);
  density->add_option("--box", box_arg, "Search box (default covers the wedge sector)");
  density->add_option("--wedge", wedge_arg, "sigma1|sigma2|off_axis_upper|off_axis_lower|tmin,tmax");
  density->add_option("--eps", eps, "Half-angle of the named wedges");
  density->add_option("--window", window_arg, "r_lo,r_hi");
  density->add_option("--format", format, "json|csv")->check(CLI::IsMember({"json", "csv"}));
  add_finder(density);
  add_common(density);

  CLI::App* indicator = app.add_subcommand("indicator", "Indicator function and diagram width");
  indicator->add_option("--profile", profile_arg, "Profile JSON file or inline JSON")->required();
  indicator->add_option("--theta", theta_arg, "Comma-separated angles (pi/6 style allowed)");
  indicator->add_option("--r-max", r_max, "Largest radius")->check(CLI::PositiveNumber);
  indicator->add_option("--samples", radii, "Radii per ray")->check(CLI::Range(4, 100000));
  add_solver(indicator);
  add_common(indicator);

  CLI::App* invert = app.add_subcommand("invert-b", "Recover B from a spectrum");
  invert->add_option("--spectrum", spectrum_arg, "Spectrum JSON")->required();
  invert->add_option("--window", window_arg, "r_lo,r_hi");
  add_common(invert);

  CLI::App* compare = app.add_subcommand("compare", "Compare two spectra");
  compare->add_option("--spectrum", spectrum_arg, "First spectrum JSON")->required();
  compare->add_option("--against", against_arg, "Second spectrum JSON")->required();
  compare->add_option("--pair-tol", pair_tol, "Relative pairing tolerance")
      ->check(CLI::PositiveNumber);
  auto* cwin = compare->add_option("--window", window_arg, "r_lo,r_hi for the B fits");
  add_common(compare);

  CLI::App* sl = app.add_subcommand("sl-eigs", "Sturm-Liouville eigenvalues of the Liouville potential");
  sl->add_option("--profile", profile_arg, "Profile JSON file or inline JSON")->required();
  sl->add_option("--mode", mode_arg, "dirichlet|dirichlet_neumann")
      ->check(CLI::IsMember({"dirichlet", "dirichlet_neumann"}));
  sl->add_option("--k-max", k_max, "Largest k")->check(CLI::PositiveNumber);
  add_solver(sl);
  add_common(sl);

  CLI::App* val = app.add_subcommand("validate", "Check a profile");
  val->add_option("--profile", profile_arg, "Profile JSON file or inline JSON")->required();
  add_common(val);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    diagnose(err, "UsageError", e.what(), kExitValidation);
    return kExitValidation;
  }

  try {
    ZeroFinderOptions opts;
    opts.tol = tol;
    opts.solver.rtol = rtol;
    opts.symmetry_completion = !no_symmetry;

    if (*eigs) {
      const RefractionProfile profile = load_profile(profile_arg);
      const ZeroSet zs = find_zeros(profile, parse_box(box_arg), opts);
      json artifact;
      if (!as_spectrum.empty()) {
        const Spectrum s = Spectrum::from_zero_set(zs, parse_wedge(as_spectrum, eps), r_max);
        artifact = to_json(s);
        artifact["profile_hash"] = zs.profile_id;
      } else {
        artifact = to_json(zs);
        artifact["conservation"] = {{"multiplicity_sum", zs.multiplicity_sum()},
                                    {"total_winding", zs.total_winding},
                                    {"ok", zs.multiplicity_sum() == zs.total_winding}};
      }
      artifact["profile"] = to_json(profile);
      artifact["tolerances"] = to_json(opts);
      emit(dump(artifact), output, out);
    } else if (*density) {
      const Wedge wedge = parse_wedge(wedge_arg, eps);
      const auto window = parse_window(window_arg);
      ZeroSet zs;
      json provenance;
      std::optional<double> b;
      if (!zeros_arg.empty()) {
        zs = zero_set_from_json(read_json_file(zeros_arg));
        provenance = {{"zeros", zeros_arg}};
      } else if (!profile_arg.empty()) {
        const RefractionProfile profile = load_profile(profile_arg);
        const BoxRegion box = box_arg.empty() ? auto_region(wedge, window.second) : parse_box(box_arg);
        zs = find_zeros(profile, box, opts);
        b = compute_liouville(profile).optical_radius();
        provenance = {{"profile", to_json(profile)}};
      } else {
        throw UsageError("density needs --profile or --zeros");
      }
      const DensityEstimate est = wedge_density(zs, wedge, window);
      if (format == "csv") {
        emit(density_counts_csv(est), output, out);
      } else {
        json artifact = {{"profile_hash", zs.profile_id},
                         {"wedge", to_json(wedge)},
                         {"region", to_json(zs.region)},
                         {"estimate", to_json(est)}};
        if (b) {
          const double predicted = (1.0 + *b) / kPi;
          artifact["B"] = *b;
          artifact["predicted_delta"] = predicted;
          artifact["relative_deviation"] = std::abs(est.delta_hat - predicted) / predicted;
        }
        artifact["source"] = provenance;
        artifact["tolerances"] = to_json(opts);
        emit(dump(artifact), output, out);
      }
    } else if (*indicator) {
      const RefractionProfile profile = load_profile(profile_arg);
      const double b = compute_liouville(profile).optical_radius();
      const std::vector<double> rs = default_indicator_radii(r_max, radii);
      json table = json::array();
      for (double theta : parse_list(theta_arg, "--theta")) {
        const IndicatorEstimate e = indicator_estimate(profile, theta, rs, opts.solver);
        const double predicted = (1.0 + b) * std::abs(std::sin(theta));
        table.push_back({{"theta", theta},
                         {"h_hat", e.h_hat},
                         {"predicted", predicted},
                         {"relative_deviation", std::abs(e.h_hat - predicted) / predicted},
                         {"fit_error", e.fit_error}});
      }
      const IndicatorWidth w = indicator_width(profile, rs, opts);
      json artifact = {{"profile_hash", profile.content_hash()},
                       {"profile", to_json(profile)},
                       {"B", b},
                       {"estimator", "least-squares slope of ln|D| over the upper half of the radii"},
                       {"indicator", table},
                       {"width",
                        {{"h_upper", w.h_upper},
                         {"h_lower", w.h_lower},
                         {"width", w.width},
                         {"predicted", w.predicted},
                         {"relative_deviation", std::abs(w.width - w.predicted) / w.predicted}}},
                       {"tolerances",
                        {{"r_min", rs.front()},
                         {"r_max", rs.back()},
                         {"samples", radii},
                         {"solver", to_json(opts.solver)}}}};
      emit(dump(artifact), output, out);
    } else if (*invert) {
      const json sj = read_json_file(spectrum_arg);
      const Spectrum s = spectrum_from_json(sj);
      const auto window = parse_window(window_arg);
      const BRecovery r = recover_B(s, window);
      json artifact = {{"B_hat", r.b_hat},
                       {"fit_error", r.fit_error},
                       {"density", to_json(r.density)},
                       {"profile_hash", sj.contains("profile_hash") ? sj["profile_hash"] : json(nullptr)},
                       {"tolerances", {{"window", {window.first, window.second}}}}};
      emit(dump(artifact), output, out);
    } else if (*compare) {
      const json j1 = read_json_file(spectrum_arg);
      const json j2 = read_json_file(against_arg);
      const Spectrum s1 = spectrum_from_json(j1);
      const Spectrum s2 = spectrum_from_json(j2);
      std::optional<std::pair<double, double>> window;
      if (cwin->count() > 0) window = parse_window(window_arg);
      const UniquenessVerdict v = compare_spectra(s1, s2, pair_tol, window);
      json artifact = to_json(v);
      artifact["profile_hashes"] = {j1.contains("profile_hash") ? j1["profile_hash"] : json(nullptr),
                                    j2.contains("profile_hash") ? j2["profile_hash"] : json(nullptr)};
      artifact["tolerances"] = {{"pair_tol", pair_tol}};
      emit(dump(artifact), output, out);
    } else if (*sl) {
      const RefractionProfile profile = load_profile(profile_arg);
      const LiouvilleMap map = compute_liouville(profile);
      const BoundaryMode mode =
          mode_arg == "dirichlet" ? BoundaryMode::Dirichlet : BoundaryMode::DirichletNeumann;
      const std::vector<double> ev =
          sl_eigenvalues(make_potential(profile, map), map.optical_radius(), mode, k_max, opts.solver);
      const PotentialNorms norms = q_norms(profile, map);
      json artifact = {{"profile_hash", profile.content_hash()},
                       {"profile", to_json(profile)},
                       {"B", map.optical_radius()},
                       {"q_norms", {{"sup", norms.sup}, {"l1", norms.l1}}},
                       {"mode", to_string(mode)},
                       {"k_max", k_max},
                       {"eigenvalues", ev},
                       {"tolerances", to_json(opts.solver)}};
      emit(dump(artifact), output, out);
    } else if (*val) {
      const RefractionProfile profile = load_profile(profile_arg);
      json artifact = to_json(validate(profile));
      artifact["profile_hash"] = profile.content_hash();
      artifact["profile"] = to_json(profile);
      artifact["tolerances"] = {{"smoothness_threshold", 1e-12}};
      emit(dump(artifact), output, out);
    }
  } catch (const Error& e) {
    const int code = exit_code(e);
    diagnose(err, e.kind(), e.what(), code);
    return code;
  } catch (const std::exception& e) {
    diagnose(err, "InternalError", e.what(), kExitNumerical);
    return kExitNumerical;
  }
  return kExitOk;
}

}  // namespace ite::cli
