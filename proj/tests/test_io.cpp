#include <doctest.h>

#include "chshkit/error.hpp"
#include "chshkit/factory.hpp"
#include "chshkit/io.hpp"
#include "support/random_states.hpp"

using namespace chshkit;

namespace {

Errc error_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected chshkit::Error");
  return Errc::EmptyData;
}

}  // namespace

TEST_SUITE("io") {
  TEST_CASE("parse_state kinds") {
    CHECK(max_abs_diff(parse_state(R"({"kind":"werner","gamma":0.9})").matrix(),
                       werner(WernerParameter(0.9)).matrix()) == 0.0);
    CHECK(max_abs_diff(parse_state(R"({"kind":"named","name":"singlet"})").matrix(), singlet().matrix()) == 0.0);

    const auto pauli = parse_state(R"({"kind":"pauli","A":[0,0,0],"P":[0,0,0],
                                       "D":[[-1,0,0],[0,-1,0],[0,0,-1]]})");
    CHECK(max_abs_diff(pauli.matrix(), singlet().matrix()) < 1e-15);

    const auto mixed = parse_state(R"({"kind":"matrix",
        "re":[[0.25,0,0,0],[0,0.25,0,0],[0,0,0.25,0],[0,0,0,0.25]],
        "im":[[0,0,0,0],[0,0,0,0],[0,0,0,0],[0,0,0,0]]})");
    CHECK(max_abs_diff(mixed.matrix(), unpolarized().matrix()) == 0.0);
  }

  TEST_CASE("property: matrix documents round-trip random states") {
    test::Rng rng(701);
    for (int n = 0; n < 50; ++n) {
      const auto rho = test::random_state(rng);
      nlohmann::json re = nlohmann::json::array(), im = nlohmann::json::array();
      for (std::size_t i = 0; i < 4; ++i) {
        nlohmann::json rr = nlohmann::json::array(), ir = nlohmann::json::array();
        for (std::size_t j = 0; j < 4; ++j) {
          rr.push_back(rho.matrix()(i, j).real());
          ir.push_back(rho.matrix()(i, j).imag());
        }
        re.push_back(rr);
        im.push_back(ir);
      }
      const nlohmann::json doc = {{"kind", "matrix"}, {"re", re}, {"im", im}};
      CHECK(max_abs_diff(parse_state(doc.dump()).matrix(), rho.matrix()) == 0.0);
    }
  }

  TEST_CASE("parse_state errors") {
    CHECK(error_of([] { parse_state("{not json"); }) == Errc::ParseError);
    CHECK(error_of([] { parse_state("[1,2]"); }) == Errc::ParseError);
    CHECK(error_of([] { parse_state(R"({"gamma":0.5})"); }) == Errc::ParseError);
    CHECK(error_of([] { parse_state(R"({"kind":"cat"})"); }) == Errc::ParseError);
    CHECK(error_of([] { parse_state(R"({"kind":"named","name":"psi"})"); }) == Errc::ParseError);
    CHECK(error_of([] { parse_state(R"({"kind":"werner","gamma":"high"})"); }) == Errc::ParseError);
    CHECK(error_of([] { parse_state(R"({"kind":"pauli","A":[0,0],"P":[0,0,0],"D":[[0,0,0],[0,0,0],[0,0,0]]})"); }) ==
          Errc::ParseError);
    CHECK(error_of([] { parse_state(R"({"kind":"werner","gamma":1.5})"); }) == Errc::GammaOutOfRange);
    CHECK(error_of([] {
            parse_state(R"({"kind":"matrix","re":[[1,0,0,0],[0,0,0,0],[0,0,0,0],[0,0,0,1]],
                            "im":[[0,0,0,0],[0,0,0,0],[0,0,0,0],[0,0,0,0]]})");
          }) == Errc::TraceNotOne);
    CHECK(error_of([] {
            parse_state(R"({"kind":"matrix","re":[[0.25,1,0,0],[0,0.25,0,0],[0,0,0.25,0],[0,0,0,0.25]],
                            "im":[[0,0,0,0],[0,0,0,0],[0,0,0,0],[0,0,0,0]]})");
          }) == Errc::NotHermitian);
    CHECK(error_of([] { read_file("/nonexistent/state.json"); }) == Errc::ParseError);
  }

  TEST_CASE("parse_data with and without header") {
    const auto with = parse_data("# comment\nphi1,phi1p,phi2,phi2p,r_exp,dr_exp\n50,0,25,75,0.67,2.30\n\n90 0 45 135 2.23 2.48\n");
    REQUIRE(with.size() == 2);
    CHECK(with[0].settings.phi2p == 75.0);
    CHECK(with[0].r_exp == 0.67);
    CHECK(with[1].settings.phi1 == 90.0);
    CHECK(with[1].dr_exp == 2.48);
    const auto without = parse_data("50, 0, 25, 75, 0.67, 2.30\n");
    REQUIRE(without.size() == 1);
    CHECK(without[0].dr_exp == 2.30);
    CHECK(parse_data("# only comments\n").empty());

    CHECK(error_of([] { parse_data("1,2,3,4,5\n"); }) == Errc::ParseError);
    CHECK(error_of([] { parse_data("1,2,3,4,5,x\n"); }) == Errc::ParseError);
    CHECK(error_of([] { parse_data("a,b,c,d,e,f\n1,2,3,4,5,6\n"); }) == Errc::ParseError);
    CHECK(error_of([] { parse_data("1,2,3,4,5,nan\n"); }) == Errc::ParseError);
  }

  TEST_CASE("parse_counts and header detection") {
    const std::string text = "phi1,phi2,n_pp,n_pm,n_mp,n_mm\n90,45,10,40,40,10\n";
    CHECK(detect_table_kind(text) == TableKind::Counts);
    CHECK(detect_table_kind("50,0,25,75,0.67,2.30\n") == TableKind::Data);
    CHECK(detect_table_kind(std::string(kDataHeader) + "\n50,0,25,75,0.67,2.30\n") == TableKind::Data);
    const auto c = parse_counts(text);
    REQUIRE(c.size() == 1);
    CHECK(c[0].n_pm == 40);
    CHECK(c[0].total() == 100);
    CHECK(error_of([] { parse_counts("90,45,10,-4,40,10\n"); }) == Errc::ParseError);
    CHECK(error_of([] { parse_counts("90,45,10,4.5,40,10\n"); }) == Errc::ParseError);
  }

  TEST_CASE("parse_settings") {
    const auto pairs = parse_settings("phi1,phi2\n10,20\n");
    REQUIRE(pairs.size() == 1);
    CHECK(pairs[0].phi1 == 10.0);
    const auto quad = parse_settings("90,0,45,135\n");
    REQUIRE(quad.size() == 4);
    CHECK(quad[1].phi1 == 90.0);
    CHECK(quad[1].phi2 == 135.0);
    CHECK(quad[2].phi1 == 0.0);
    CHECK(quad[2].phi2 == 45.0);
    CHECK(error_of([] { parse_settings("1,2,3\n"); }) == Errc::ParseError);
  }

  TEST_CASE("format_exact") {
    CHECK(format_exact(0.1) == "0.1");
    CHECK(format_exact(90.0) == "90");
    CHECK(format_exact(-1.5) == "-1.5");
  }

  TEST_CASE("property: counts files round-trip") {
    test::Rng rng(702);
    std::uniform_real_distribution<double> ang(-360.0, 360.0);
    std::uniform_int_distribution<std::uint64_t> cnt(0, 1'000'000'000ULL);
    for (int n = 0; n < 100; ++n) {
      std::vector<CountTable> t;
      for (int i = 0; i < 4; ++i) t.push_back({ang(rng), ang(rng), cnt(rng), cnt(rng), cnt(rng), cnt(rng)});
      const auto text = format_counts(t, {"manifest: {}"});
      CHECK(detect_table_kind(text) == TableKind::Counts);
      const auto back = parse_counts(text);
      REQUIRE(back.size() == t.size());
      for (std::size_t i = 0; i < t.size(); ++i) {
        CHECK(back[i].phi1 == t[i].phi1);
        CHECK(back[i].phi2 == t[i].phi2);
        CHECK(back[i].n_pp == t[i].n_pp);
        CHECK(back[i].n_pm == t[i].n_pm);
        CHECK(back[i].n_mp == t[i].n_mp);
        CHECK(back[i].n_mm == t[i].n_mm);
      }
    }
  }

  TEST_CASE("to_json reports") {
    const auto j = to_json(horodecki_max(unpolarized()));
    CHECK(j["optimal"].is_null());
    CHECK(j["violates"] == false);
    const auto s = to_json(horodecki_max(singlet()));
    CHECK(s["optimal"]["b_prime"].size() == 3);
    const auto f = to_json(fit_gamma(std::vector<ChshDatum>{{{90, 0, 45, 135}, 2.0, 0.5}}));
    CHECK(f["residuals"].size() == 1);
    CHECK(f.begin().key() == "gamma_hat");
  }
}
