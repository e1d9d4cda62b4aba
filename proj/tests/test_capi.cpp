#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <permstab.h>

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <memory>
#include <string>

using nlohmann::json;

namespace {

constexpr const char* kToySmall =
    R"({"explicit":{"d":[5,19,23,29,31],"r":[1,6,7,8,9],"tail_certified":true}})";
constexpr const char* kToyWords =
    R"({"explicit":{"d":[5,7,13,37],"r":[1,2,4,11],"tail_certified":true}})";
constexpr const char* kToyChain =
    R"({"explicit":{"d":[5,7,17,19,23,29,31,37,41,43,47],
                    "r":[1,2,5,6,7,8,9,11,12,13,14],"tail_certified":true}})";
constexpr const char* kToyFlat =
    R"({"explicit":{"d":[23,29,31,37,41],"r":[7,8,9,10,11],"tail_certified":true}})";
constexpr const char* kUncertified =
    R"({"explicit":{"d":[5],"r":[1],"tail_certified":false}})";

struct SpecHandle {
  ps_spec* p;
  explicit SpecHandle(const char* text) : p(ps_spec_from_json(text)) {}
  ~SpecHandle() { ps_spec_free(p); }
  SpecHandle(const SpecHandle&) = delete;
  SpecHandle& operator=(const SpecHandle&) = delete;
};

// Takes ownership of an API string and parses it.
json eat(char* s) {
  REQUIRE(s != nullptr);
  json j = json::parse(s);
  ps_string_free(s);
  return j;
}

std::string eat_text(char* s) {
  REQUIRE(s != nullptr);
  std::string out(s);
  ps_string_free(s);
  return out;
}

} // namespace

TEST_CASE("library metadata and error channel") {
  CHECK(ps_version() != nullptr);
  CHECK(ps_last_error() != nullptr);
  ps_string_free(nullptr); // must be a no-op
  ps_spec_free(nullptr);
}

TEST_CASE("spec lifecycle") {
  SpecHandle s(kToySmall);
  REQUIRE(s.p != nullptr);
  CHECK(ps_last_status() == PS_OK);

  json round = eat(ps_spec_to_json(s.p));
  CHECK(round.at("explicit").at("d") == json::array({5, 19, 23, 29, 31}));
  CHECK(round.at("explicit").at("tail_certified") == true);

  CHECK(ps_spec_from_json("{ not json") == nullptr);
  CHECK(ps_last_status() == PS_EPARSE);
  CHECK(std::string(ps_last_error()).size() > 0);
  CHECK(ps_spec_from_json(R"({"unrelated":1})") == nullptr);
  CHECK(ps_last_status() == PS_EPARSE);
  CHECK(ps_spec_from_json(nullptr) == nullptr);
  CHECK(ps_last_status() == PS_EINVAL);

  const char* path = "test_capi_spec.json";
  {
    std::ofstream out(path);
    out << kToySmall;
  }
  ps_spec* from_file = ps_spec_from_file(path);
  REQUIRE(from_file != nullptr);
  json terms = eat(ps_spec_terms(from_file, 2));
  CHECK(terms.at("d") == json::array({5, 19}));
  ps_spec_free(from_file);
  std::remove(path);

  CHECK(ps_spec_from_file("missing_file_for_sure.json") == nullptr);
  CHECK(ps_last_status() == PS_EINVAL);
}

TEST_CASE("ensure and threshold") {
  SpecHandle s(kToySmall);
  CHECK(ps_spec_ensure(s.p, 5) == PS_OK);
  CHECK(ps_spec_ensure(s.p, 6) == PS_EHORIZON);

  CHECK(ps_threshold(s.p, 1) == 2);
  CHECK(ps_threshold(s.p, 2) == 2);
  CHECK(ps_threshold(s.p, 3) == 3);
  CHECK(ps_threshold(s.p, 5) == 0);
  CHECK(ps_last_status() == PS_EHORIZON);
}

TEST_CASE("sequence generation and verification") {
  char* generated = ps_seq_generate(R"({"F":"one","C":79})", 3);
  json spec_json = eat(generated);
  CHECK(spec_json.contains("generated"));

  SpecHandle g(spec_json.dump().c_str());
  REQUIRE(g.p != nullptr);
  json terms = eat(ps_spec_terms(g.p, 3));
  CHECK(terms.at("d") == json::array({79, 317, 719}));
  CHECK(terms.at("r") == json::array({10, 37, 82}));

  json report = eat(ps_seq_verify(g.p, 3, R"({"F":"one","C":79})"));
  CHECK(report.at("standing_ok") == true);
  CHECK(report.at("theorem_ok") == true);
  for (const auto& row : report.at("entries")) CHECK(row.at("pass") == true);

  SpecHandle toy(kToySmall);
  json toy_report = eat(ps_seq_verify(toy.p, 5, nullptr));
  CHECK(toy_report.at("standing_ok") == true);
  CHECK(toy_report.at("theorem_ok") == false);

  CHECK(ps_seq_generate(R"({"F":"nonsense"})", 3) == nullptr);
  CHECK(ps_last_status() == PS_EINVAL);
}

TEST_CASE("evaluation") {
  SpecHandle s(kToySmall);
  json out = eat(ps_eval(s.p, "ab", 2));
  CHECK(out.at("word") == "ab");
  REQUIRE(out.at("coords").size() == 2);
  CHECK(out.at("coords")[0].at("n") == 1);
  CHECK(out.at("coords")[0].at("degree") == 5);
  CHECK(out.at("coords")[0].at("image") == "(1 3 2 4 5)");
  CHECK(out.at("tau").at("shift") == 1);
  CHECK(out.at("tau").at("lamps").at("1") == 1);

  CHECK(ps_eval(s.p, "xyz", 1) == nullptr);
  CHECK(ps_last_status() == PS_EPARSE);
  CHECK(ps_eval(nullptr, "a", 1) == nullptr);
  CHECK(ps_last_status() == PS_EINVAL);
}

TEST_CASE("word problem") {
  SpecHandle words(kToyWords);
  json trivial = eat(ps_wp(words.p, "bbb"));
  CHECK(trivial.at("trivial") == true);
  CHECK_FALSE(trivial.contains("witness"));

  json nontrivial = eat(ps_wp(words.p, "ab"));
  CHECK(nontrivial.at("trivial") == false);
  CHECK(nontrivial.at("witness").at("kind") == "coordinate");
  CHECK(nontrivial.at("witness").at("n") == 1);

  // the first witnessing coordinate is preferred even when tau is nontrivial
  json comm = eat(ps_wp(words.p, "aBAb"));
  CHECK(comm.at("trivial") == false);
  CHECK(comm.at("witness").at("kind") == "coordinate");
  CHECK(comm.at("witness").at("n") == 1);

  // trivial at the only materialized coordinate: tau is the only witness left
  SpecHandle shallow(kUncertified);
  json tau_witness = eat(ps_wp(shallow.p, "aaaaa"));
  CHECK(tau_witness.at("trivial") == false);
  CHECK(tau_witness.at("witness").at("kind") == "tau");

  // triviality cannot be certified on this horizon
  SpecHandle small(kToySmall);
  CHECK(ps_wp(small.p, "abbbA") == nullptr);
  CHECK(ps_last_status() == PS_EHORIZON);
}

TEST_CASE("tau and balls") {
  json tau = eat(ps_tau("abAB"));
  CHECK(tau.at("shift") == 0);
  CHECK(tau.at("lamps").at("0") == 2);
  CHECK(tau.at("lamps").at("1") == 1);
  CHECK(tau.contains("text"));

  json count_only = eat(ps_ball(4, 0));
  CHECK(count_only.at("count") == "161");
  CHECK_FALSE(count_only.contains("words"));

  json with_words = eat(ps_ball(1, 1));
  CHECK(with_words.at("words") == json::array({"", "a", "A", "b", "B"}));

  json big = eat(ps_ball(13, 0)); // count is fine without the listing
  CHECK(big.at("count") == "3188645");
  CHECK(ps_ball(13, 1) == nullptr);
  CHECK(ps_last_status() == PS_EUNSUPPORTED);
}

TEST_CASE("sample-and-substitute") {
  json v = eat(ps_sas("(1 2 3)\n(4 5 6)", "abAB", "1/4", "9/10", 7));
  CHECK(v.at("pass") == true);
  CHECK(v.at("witness").is_null());
  CHECK(v.at("samples_per_relation") == 10);
  CHECK(v.at("total_queries") == 10);
  CHECK(v.at("weighted_cost") == 40);

  // decimal confidence parses exactly: 1/(1 - 0.99) = 100
  json d = eat(ps_sas("(1 2 3)\n(4 5 6)", "abAB", "1/2", "0.99", 7));
  CHECK(d.at("samples_per_relation") == 10); // ceil(ln(100)/(1/2))

  json fail_v = eat(ps_sas("(1 2 3 4 5 6)\n()", "a", "1/3", "9/10", 3));
  CHECK(fail_v.at("pass") == false);
  CHECK(fail_v.at("witness").at("relation") == 1); // 1-based in the interface
  CHECK(fail_v.at("witness").at("point").get<int>() >= 1);
  CHECK(fail_v.at("witness").at("point").get<int>() <= 6);

  CHECK(ps_sas(nullptr, "a", "1/2", "1/2", 1) == nullptr);
  CHECK(ps_last_status() == PS_EINVAL);
  CHECK(ps_sas("(1 2)\n()", "a", "0", "1/2", 1) == nullptr);
  CHECK(ps_last_status() == PS_EINVAL);
}

TEST_CASE("defects, padding, cost") {
  json g = eat(ps_defect("(1 2 3)\n(1 2)", "abAB", 0));
  CHECK(g.at("local") == "1/1");
  CHECK(g.at("global") == "2/3");
  CHECK(g.contains("minimizer"));

  CHECK(eat_text(ps_defect_local("(1 2 3)\n(1 2)", "abAB")) == "1/1");

  CHECK(ps_defect("(1 2 3 4 5 6 7)\n()", "abAB", 0) == nullptr);
  CHECK(ps_last_status() == PS_ECAP);

  json pad = eat(ps_pad("(1 2 3 4 5 6)\n()", "a", "1/2"));
  CHECK(pad.at("q") == 1);
  CHECK(pad.at("r") == 7);
  CHECK(pad.at("violation") == "6/13");
  CHECK(pad.at("degree") == 13);

  CHECK(eat_text(ps_stability_cost("abAB\nabAB\nb", "1/4")) == "20/1");
  CHECK(eat_text(ps_stability_cost("", "1/2")) == "0/1");
  CHECK(ps_stability_cost("abAB", "0") == nullptr);
  CHECK(ps_last_status() == PS_EINVAL);
}

TEST_CASE("Folner ratios, quotients, densities") {
  SpecHandle s(kToySmall);
  CHECK(eat_text(ps_folner(s.p, 1, 2, 'a', 0)) == "1/5");
  CHECK(eat_text(ps_folner(s.p, 1, 2, 'b', 0)) == "0/1");

  json q11 = eat(ps_quotient(s.p, 1, 1, 0));
  CHECK(q11.at("bijective") == false);
  CHECK(q11.at("folner_size") == 4860);
  CHECK(q11.at("image_size") == 81);
  CHECK(q11.at("quotient_order") == "81");

  json q22 = eat(ps_quotient(s.p, 2, 2, 0));
  CHECK(q22.at("bijective") == true);
  CHECK(q22.at("folner_size") == 72900);

  SpecHandle flat(kToyFlat);
  json dens = eat(ps_density(flat.p, "b_-1 b_0 b_1", 1, 3, 0));
  CHECK(dens.at("density") == "5/7");
  CHECK(dens.at("hits") == 10935);
  CHECK(dens.at("folner_size") == 15309);
}

TEST_CASE("cosofic approximants") {
  SpecHandle s(kToySmall);
  json out = eat(ps_cosofic(s.p, R"(["b_0"])", R"(["b_2","b_0"])", 2, 1, 0));
  CHECK(out.at("densities") == json::array({"1/60", "0/1"}));
  CHECK(out.at("k_image_size") == 3);
  CHECK(out.at("folner_size") == "4860");

  json shifted = eat(ps_cosofic(s.p, R"(["b_0"])", R"([{"word":"aaa"}])", 1, 1, 0));
  CHECK(shifted.at("densities") == json::array({"1/1"}));

  CHECK(ps_cosofic(s.p, R"(["b_0"])", R"([{"word":"b"}])", 1, 1, 0) == nullptr);
  CHECK(ps_last_status() == PS_EINVAL);
  CHECK(ps_cosofic(s.p, R"(["b_2"])", R"(["b_0"])", 2, 1, 0) == nullptr);
  CHECK(ps_last_status() == PS_EINVAL);
  CHECK(ps_cosofic(s.p, R"(["b_0"])", "not json", 2, 1, 0) == nullptr);
  CHECK(ps_last_status() == PS_EPARSE);
}

TEST_CASE("lef certificates") {
  SpecHandle chain(kToyChain);
  json cert = eat(ps_lef(chain.p, 1, 0));
  CHECK(cert.at("l") == 1);
  CHECK(cert.at("ball_size") == 5);
  CHECK(cert.at("substituted_coords") == json::array({3, 4, 5}));
  CHECK(cert.at("projection_injective") == true);

  CHECK(ps_lef(chain.p, 0, 0) == nullptr);
  CHECK(ps_last_status() == PS_EINVAL);
}
