#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <numbers>
#include <sstream>

#include "ite/cli.hpp"
#include "ite/io.hpp"

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = ite::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

}  // namespace

TEST_CASE("eigs writes a zero set whose count equals the winding") {
  const auto r = run({"eigs", "--profile", R"({"kind":"constant","value":4})", "--box", "0.1,12,-3,3"});
  REQUIRE(r.code == 0);
  const auto j = ite::parse_json(r.out);
  CHECK(j["conservation"]["ok"].get<bool>());
  CHECK(j["zeros"].size() > 0);
  CHECK(j["profile_hash"].get<std::string>().size() == 16);
  CHECK(j.contains("tolerances"));
  const auto zs = ite::zero_set_from_json(j);
  CHECK(zs.multiplicity_sum() == zs.total_winding);
}

TEST_CASE("artifacts are identical across worker counts") {
  const std::vector<std::string> args{"eigs", "--profile", R"({"kind":"smooth_bump","c":3})",
                                      "--box", "0.2,10,-2,2"};
  setenv("ITE_THREADS", "1", 1);
  const auto a = run(args);
  setenv("ITE_THREADS", "4", 1);
  const auto b = run(args);
  unsetenv("ITE_THREADS");
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
}

TEST_CASE("validation failures exit with 2") {
  const auto bad = run({"validate", "--profile", R"({"kind":"poly","coeffs":[1,0,-2.2]})"});
  CHECK(bad.code == 2);
  CHECK(ite::parse_json(bad.err)["error"] == "InvalidProfile");
  CHECK(run({"validate", "--profile", R"({"kind":"constant","value":4)"}).code == 2);
  CHECK(run({"eigs", "--profile", R"({"kind":"constant","value":4})"}).code == 2);
  CHECK(run({"eigs", "--profile", R"({"kind":"constant","value":4})", "--box", "1,0,0,1"}).code == 2);
  CHECK(run({"frobnicate"}).code == 2);
  const auto ok = run({"validate", "--profile", R"({"kind":"constant","value":4})"});
  CHECK(ok.code == 0);
  CHECK(ite::parse_json(ok.out)["smoothness_warning"].get<bool>());
}

TEST_CASE("numerical failures exit with 3") {
  const auto r = run({"eigs", "--profile", R"({"kind":"constant","value":1})", "--box", "0.5,5,-1,1"});
  CHECK(r.code == 3);
  CHECK(ite::parse_json(r.err)["error"] == "DegenerateProfile");
}

TEST_CASE("invert-b on a synthetic spectrum file") {
  std::vector<ite::cplx> ks;
  for (int j = 1; j * std::numbers::pi / 3.0 <= 210.0; ++j) ks.emplace_back(j * std::numbers::pi / 3.0, 0.0);
  const auto s = ite::Spectrum::make(ks, ite::Wedge::sigma1(), 210.0);
  const std::string path = "test_cli_spectrum.json";
  ite::write_text_file(path, ite::dump(ite::to_json(s)));
  const auto r = run({"invert-b", "--spectrum", path, "--window", "50,200"});
  const auto cmp = run({"compare", "--spectrum", path, "--against", path});
  std::remove(path.c_str());
  REQUIRE(r.code == 0);
  const auto j = ite::parse_json(r.out);
  CHECK(std::abs(j["B_hat"].get<double>() - 2.0) <= j["fit_error"].get<double>());
  REQUIRE(cmp.code == 0);
  CHECK(ite::parse_json(cmp.out)["conclusion"] == "ConsistentWithEqual");
}

TEST_CASE("density CSV and sl-eigs") {
  const auto d = run({"density", "--profile", R"({"kind":"constant","value":4})", "--window", "10,40",
                      "--format", "csv"});
  REQUIRE(d.code == 0);
  CHECK(d.out.rfind("r,N(r)\n10.0,", 0) == 0);
  const auto sl = run({"sl-eigs", "--profile", R"({"kind":"constant","value":1})", "--k-max", "10"});
  REQUIRE(sl.code == 0);
  const auto j = ite::parse_json(sl.out);
  CHECK(j["eigenvalues"][0].get<double>() == doctest::Approx(4.4934).epsilon(1e-4));
}

TEST_CASE("output file option") {
  const std::string path = "test_cli_out.json";
  const auto r = run({"validate", "--profile", R"({"kind":"smooth_bump","c":3})", "--output", path});
  CHECK(r.code == 0);
  CHECK(r.out.empty());
  CHECK(ite::read_json_file(path)["valid"].get<bool>());
  std::remove(path.c_str());
}
