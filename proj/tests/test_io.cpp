#include <doctest.h>

#include <cstdio>
#include <numbers>
#include <string>

#include "ite/errors.hpp"
#include "ite/io.hpp"

using ite::BoxRegion;
using ite::cplx;
using ite::RefractionProfile;

TEST_CASE("profile JSON forms") {
  CHECK(ite::load_profile(R"({"kind":"constant","value":4.0})").canonical() ==
        RefractionProfile::constant(4.0).canonical());
  CHECK(ite::load_profile(R"({"kind":"smooth_bump","c":3})").canonical() ==
        RefractionProfile::smooth_bump(3.0).canonical());
  CHECK(ite::load_profile(R"({"kind":"poly","coeffs":[2,0,-0.5]})").canonical() ==
        RefractionProfile::polynomial({2.0, 0.0, -0.5}).canonical());
  for (const auto& p : {RefractionProfile::constant(4.41), RefractionProfile::smooth_bump(0.1 + 0.2),
                        RefractionProfile::polynomial({1.0 / 3.0, 0.1, 1e-300})}) {
    CHECK(ite::profile_from_json(ite::parse_json(ite::to_json(p).dump())).canonical() == p.canonical());
  }
  CHECK_THROWS_AS(ite::load_profile(R"({"kind":"spline"})"), ite::ParseError);
  CHECK_THROWS_AS(ite::load_profile(R"({"kind":"constant"})"), ite::ParseError);
  CHECK_THROWS_AS(ite::load_profile(R"({"kind":"poly","coeffs":[1,"x"]})"), ite::ParseError);
  CHECK_THROWS_AS(ite::load_profile("/nonexistent/profile.json"), ite::ParseError);
}

TEST_CASE("malformed JSON reports line and column") {
  try {
    ite::parse_json("{\n  \"kind\": \"constant\",\n  \"value\": 4.0,,\n}", "p.json");
    FAIL("no exception");
  } catch (const ite::ParseError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("p.json:3:") != std::string::npos);
  }
  try {
    ite::zero_set_from_json(ite::parse_json(R"({"profile_hash":"x","region":{"re_min":0,"re_max":1,"im_min":0,"im_max":1},"total_winding":1,"zeros":[{"re":1,"im":"a","mult":1}]})"));
    FAIL("no exception");
  } catch (const ite::ParseError& e) {
    CHECK(std::string(e.what()).find("zeros[0].im") != std::string::npos);
  }
}

TEST_CASE("zero set round trip is exact") {
  ite::ZeroSet zs;
  zs.region = BoxRegion::make(0.1, 30.0, -3.0, 3.0);
  zs.total_winding = 3;
  zs.profile_id = RefractionProfile::constant(4.0).content_hash();
  zs.zeros = {{cplx(std::numbers::pi, 0.0), 1, 1.234e-13},
              {cplx(4.547834183114701, -0.650981804470086), 1, 3e-12},
              {cplx(4.547834183114701, 0.650981804470086), 1, 0.1 + 0.2}};
  zs.evaluations = 1234;
  zs.dilations = 1;
  zs.completed_by_symmetry = 2;
  zs.unresolved.push_back({BoxRegion::make(1.0, 1.000001, 0.0, 1e-6), 2});
  const std::string text = ite::dump(ite::to_json(zs));
  const ite::ZeroSet back = ite::zero_set_from_json(ite::parse_json(text));
  REQUIRE(back.zeros.size() == zs.zeros.size());
  for (std::size_t i = 0; i < zs.zeros.size(); ++i) {
    CHECK(back.zeros[i].k == zs.zeros[i].k);
    CHECK(back.zeros[i].multiplicity == zs.zeros[i].multiplicity);
    CHECK(back.zeros[i].residual == zs.zeros[i].residual);
  }
  CHECK(back.region.re_max == zs.region.re_max);
  CHECK(back.profile_id == zs.profile_id);
  CHECK(back.unresolved.size() == 1);
  CHECK(ite::dump(ite::to_json(back)) == text);
}

TEST_CASE("spectrum round trip and file IO") {
  const auto s = ite::Spectrum::make({cplx(1.0 / 3.0, 0.0), cplx(2.0, 0.05)}, ite::Wedge::sigma1(), 5.0);
  const std::string path = "test_io_spectrum.json";
  ite::write_text_file(path, ite::dump(ite::to_json(s)));
  const auto back = ite::spectrum_from_json(ite::read_json_file(path));
  std::remove(path.c_str());
  CHECK(back.eigenvalues == s.eigenvalues);
  CHECK(back.r_max == s.r_max);
  CHECK(back.wedge.theta_min == s.wedge.theta_min);
  CHECK(back.wedge.label == ite::Wedge::Label::Sigma1);
}

TEST_CASE("density counts export as CSV") {
  ite::DensityEstimate d;
  d.counts = {{1.0, 0}, {1.5, 2}, {2.0, 3}};
  const std::string csv = ite::density_counts_csv(d);
  CHECK(csv == "r,N(r)\n1.0,0\n1.5,2\n2.0,3\n");
}
