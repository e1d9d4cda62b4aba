#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "permstab/error.hpp"
#include "permstab/perm.hpp"
#include "permstab/word.hpp"

#include <set>
#include <string>
#include <vector>

using namespace permstab;

namespace {

template <class F>
errc code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return errc::ok;
}

} // namespace

TEST_CASE("words reduce eagerly") {
  CHECK(parse_word("").empty());
  CHECK(parse_word("aA").empty());
  CHECK(parse_word("aBbA").empty());
  CHECK(parse_word("abBA").to_string() == "");
  CHECK(parse_word("aBAb").length() == 4);
  CHECK(parse_word("aabB").to_string() == "aa");
  CHECK(FreeWord().to_string() == "");
}

TEST_CASE("generators and string forms") {
  CHECK(FreeWord::generator(0).to_string() == "a");
  CHECK(FreeWord::generator(1).to_string() == "b");
  CHECK(FreeWord::generator(0, -1).to_string() == "A");
  CHECK(FreeWord::generator(1, -1).to_string() == "B");
  CHECK(parse_word("aBAb").to_string() == "aBAb");
  FreeWord w = parse_word("abbAB");
  CHECK(parse_word(w.to_string()) == w);
}

TEST_CASE("group operations on words") {
  FreeWord a = FreeWord::generator(0), b = FreeWord::generator(1);
  CHECK((a * b).to_string() == "ab");
  CHECK((a * b).inverse().to_string() == "BA");
  CHECK((a * a.inverse()).empty());
  CHECK(a.power(3).to_string() == "aaa");
  CHECK(a.power(-2).to_string() == "AA");
  CHECK(a.power(0).empty());
  CHECK(commutator(a, b).to_string() == "abAB");
  CHECK(conjugate(a.power(2), b).to_string() == "aabAA");
  CHECK((parse_word("ab") * parse_word("BA")).empty());
}

TEST_CASE("parse rejects words outside the two-letter alphabet") {
  CHECK(code_of([] { parse_word("axb"); }) == errc::parse_error);
  CHECK(code_of([] { parse_word("ab1"); }) == errc::parse_error);
  CHECK(parse_word("a b") == parse_word("ab")); // whitespace is ignored anywhere
}

TEST_CASE("balls enumerate reduced words in length-lex order") {
  auto b0 = ball(0);
  REQUIRE(b0.size() == 1);
  CHECK(b0[0].empty());

  auto b1 = ball(1);
  REQUIRE(b1.size() == 5);
  CHECK(b1[0].to_string() == "");
  CHECK(b1[1].to_string() == "a");
  CHECK(b1[2].to_string() == "A");
  CHECK(b1[3].to_string() == "b");
  CHECK(b1[4].to_string() == "B");

  CHECK(ball(2).size() == 17);
  auto b4 = ball(4);
  CHECK(b4.size() == 161);
  CHECK(ball_count(4) == BigInt(161));
  for (unsigned r = 0; r <= 5; ++r)
    CHECK(BigInt(ball(r).size()) == ball_count(r));

  std::set<std::string> seen;
  size_t last_len = 0;
  for (const auto& w : b4) {
    CHECK(w.length() <= 4);
    CHECK(w.length() >= last_len); // level order
    last_len = w.length();
    CHECK(parse_word(w.to_string()) == w); // already reduced
    CHECK(seen.insert(w.to_string()).second);
  }
}

TEST_CASE("evaluation respects composition order") {
  auto mul = [](const Permutation& s, const Permutation& t) { return s * t; };
  auto inv = [](const Permutation& s) { return s.inverse(); };
  Permutation id3(3);
  std::vector<Permutation> images{parse_permutation("(1 2 3)", 3), parse_permutation("(1 2)", 3)};
  CHECK(commutator(FreeWord::generator(0), FreeWord::generator(1)).evaluate(id3, images, mul,
                                                                            inv) ==
        parse_permutation("(1 3 2)", 3));

  Permutation id6(6);
  std::vector<Permutation> commuting{parse_permutation("(1 2 3)", 6),
                                     parse_permutation("(4 5 6)", 6)};
  CHECK(parse_word("abAB").evaluate(id6, commuting, mul, inv).is_identity());
  CHECK(parse_word("ab").evaluate(id6, commuting, mul, inv) ==
        parse_permutation("(1 2 3)(4 5 6)", 6));
}

TEST_CASE("relation sets dedupe and keep exact norms") {
  RelationSet e = RelationSet::parse("abAB\nabAB\nb\n");
  CHECK(e.size() == 2);
  CHECK(e.norm() == 5);
  RelationSet with_comments = RelationSet::parse("# relators\nabAB  # commutator\n\n  \nb\n");
  CHECK(with_comments.size() == 2);
  CHECK(with_comments.norm() == 5);
  CHECK(RelationSet().size() == 0);
  CHECK(RelationSet().norm() == 0);
  RelationSet dedup(std::vector<FreeWord>{parse_word("ab"), parse_word("abAa")});
  CHECK(dedup.size() == 1);
}
