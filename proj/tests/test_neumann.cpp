#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "permstab/error.hpp"
#include "permstab/neumann.hpp"
#include "permstab/perm.hpp"
#include "permstab/sequence_spec.hpp"
#include "permstab/word.hpp"

#include <memory>
#include <set>
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

std::shared_ptr<const SequenceSpec> toy_small() {
  return std::make_shared<const SequenceSpec>(
      SequenceSpec::explicit_spec({5, 19, 23, 29, 31}, {1, 6, 7, 8, 9}, true));
}

std::shared_ptr<const SequenceSpec> toy_words() {
  return std::make_shared<const SequenceSpec>(
      SequenceSpec::explicit_spec({5, 7, 13, 37}, {1, 2, 4, 11}, true));
}

std::shared_ptr<const SequenceSpec> toy_steep() {
  return std::make_shared<const SequenceSpec>(
      SequenceSpec::explicit_spec({5, 7, 37, 307, 311}, {1, 2, 12, 100, 101}, true));
}

std::shared_ptr<const SequenceSpec> toy_flat() {
  return std::make_shared<const SequenceSpec>(
      SequenceSpec::explicit_spec({23, 29, 31, 37, 41}, {7, 8, 9, 10, 11}, true));
}

constexpr uint64_t kCap = 200000;

} // namespace

TEST_CASE("generator images") {
  auto s = toy_small();
  auto [alpha, beta] = generator_images(*s, 1);
  CHECK(alpha == Permutation::cycle(5, 5));
  CHECK(beta == Permutation::three_cycle(1, 2, 3, 5));
  CHECK(alpha.is_even());
  CHECK(beta.is_even());
  auto [a2, b2] = generator_images(*s, 2);
  CHECK(a2 == Permutation::cycle(19, 19));
  CHECK(b2 == Permutation::three_cycle(1, 7, 13, 19));

  CHECK(lamp_generator_image(*s, 1, 0) == beta);
  CHECK(lamp_generator_image(*s, 1, 1) == alpha * beta * alpha.inverse());
  CHECK(lamp_generator_image(*s, 1, -2) ==
        alpha.power(-2) * beta * alpha.power(2));
  CHECK(lamp_generator_image(*s, 2, 1) == Permutation::three_cycle(2, 8, 14, 19));
}

TEST_CASE("coordinates and tau of a defining word") {
  auto spec = toy_small();  // products and comparisons need one shared spec
  NeumannElement g(spec, parse_word("ab"));
  CHECK(g.coordinate(1) == parse_permutation("(1 3 2 4 5)"));
  CHECK(g.coordinate(2) == Permutation::cycle(19, 19) * Permutation::three_cycle(1, 7, 13, 19));
  CHECK(g.tau().shift() == 1);
  REQUIRE(g.tau().lamps().size() == 1);
  CHECK(g.tau().lamps().at(1) == 1);

  NeumannElement h = g * g.inverse();
  CHECK(h.word().empty());
  CHECK(h.coordinate(1).is_identity());
  CHECK(h.tau().is_identity());

  NeumannElement u(spec, parse_word("a"));
  NeumannElement v(spec, parse_word("b"));
  CHECK((u * v).coordinate(2) == u.coordinate(2) * v.coordinate(2));
  CHECK(u.inverse().coordinate(1) == u.coordinate(1).inverse());
}

TEST_CASE("word problem with certified tails") {
  auto spec = toy_words();  // products and comparisons need one shared spec
  CHECK(is_identity(NeumannElement(spec, parse_word("bbb"))));
  CHECK(is_identity(NeumannElement(spec, FreeWord())));
  CHECK_FALSE(is_identity(NeumannElement(spec, parse_word("ab"))));
  CHECK_FALSE(is_identity(NeumannElement(spec, parse_word("a"))));

  // trivial at every materialized coordinate, but too long to certify
  CHECK(code_of([] { is_identity(NeumannElement(toy_small(), parse_word("abbbA"))); }) ==
        errc::horizon_insufficient);

  NeumannElement x(spec, parse_word("ab"));
  NeumannElement y(spec, parse_word("ba"));
  CHECK_FALSE(equals(x, y));
  CHECK(equals(x * x.inverse(), NeumannElement(spec, FreeWord())));
  CHECK(equals(NeumannElement(spec, parse_word("bbbb")),
               NeumannElement(spec, parse_word("b"))));
}

TEST_CASE("kernel support localizes sub-threshold coordinates") {
  FreeWord b0 = parse_word("b");
  FreeWord b1 = parse_word("abA");
  FreeWord b2 = parse_word("aabAA");

  auto supp1 = kernel_support(NeumannElement(toy_steep(), commutator(b1, b0)));
  REQUIRE(supp1.size() == 1);
  CHECK(supp1[0].first == 1);
  CHECK_FALSE(supp1[0].second.is_identity());

  auto supp2 = kernel_support(NeumannElement(toy_steep(), commutator(b2, b0)));
  REQUIRE(supp2.size() == 2);
  CHECK(supp2[0].first == 1);
  CHECK(supp2[1].first == 2);

  CHECK(kernel_support(NeumannElement(toy_steep(), parse_word("bbb"))).empty());
  CHECK(code_of([] { kernel_support(NeumannElement(toy_steep(), parse_word("a"))); }) ==
        errc::invalid_argument);
}

TEST_CASE("lamp words") {
  LampWord w = parse_lamp_word("b_0 b_1^2 b_-1");
  REQUIRE(w.size() == 3);
  CHECK(w[0].position == 0);
  CHECK(w[0].exponent == 1);
  CHECK(w[1].position == 1);
  CHECK(w[1].exponent == 2);
  CHECK(w[2].position == -1);
  CHECK(parse_lamp_word(lamp_word_to_string(w)) == w);

  CHECK(lamp_word_to_free({{0, 1}}) == parse_word("b"));
  CHECK(lamp_word_to_free({{1, 1}}) == parse_word("abA"));
  CHECK(lamp_word_to_free({{-1, 1}}) == parse_word("Aba"));
  CHECK(lamp_word_radius(w) == 1);
  CHECK(lamp_word_radius({}) == 0);
  CHECK(lamp_word_radius({{-3, 2}}) == 3);

  // [b_j, b_0] has free length 4j + 4
  for (int64_t j : {1, 2, 3}) {
    FreeWord c = commutator(lamp_word_to_free({{j, 1}}), parse_word("b"));
    CHECK(c.length() == static_cast<size_t>(4 * j + 4));
  }

  CHECK(lamp_word_tau(w) == evaluate_in_w(lamp_word_to_free(w)));
  CHECK(lamp_word_tau({{0, 3}}).is_identity());
  CHECK(code_of([] { parse_lamp_word("c_1"); }) == errc::parse_error);
  CHECK(code_of([] { parse_lamp_word("b_"); }) == errc::parse_error);
}

TEST_CASE("canonical forms are coherent with words") {
  auto s = toy_small();
  size_t window = 2;
  FreeWord u = parse_word("ab"), v = parse_word("Ba");
  CanonicalForm fu = canonical_of_word(*s, u, window);
  CanonicalForm fv = canonical_of_word(*s, v, window);
  CHECK(fu.coords.size() == window - 1);
  CHECK(fu.coords[0] == parse_permutation("(1 3 2 4 5)"));
  CHECK(fu.tail == evaluate_in_w(u));
  CHECK(canonical_mul(fu, fv) == canonical_of_word(*s, u * v, window));
  CHECK(canonical_inverse(fu) == canonical_of_word(*s, u.inverse(), window));
  CHECK(canonical_alpha_power(*s, 2, window) == canonical_of_word(*s, parse_word("aa"), window));
  CHECK(canonical_identity(*s, window) == canonical_of_word(*s, FreeWord(), window));
  CHECK(canonical_of_lamp_word(*s, parse_lamp_word("b_1"), window) ==
        canonical_of_word(*s, parse_word("abA"), window));
}

TEST_CASE("L_m enumeration") {
  auto s = toy_small();
  LmEnumeration l1 = lm_elements(*s, 1, kCap);
  CHECK(l1.elements.size() == 1620); // Alt(5) x C3^3
  CHECK(l1.m == 1);
  CHECK(l1.window == 2);
  REQUIRE(l1.words.size() == l1.elements.size());
  CHECK(l1.elements[0] == canonical_identity(*s, l1.window));
  for (size_t i = 0; i < l1.elements.size(); i += 97)
    CHECK(canonical_of_lamp_word(*s, l1.words[i], l1.window) == l1.elements[i]);

  std::set<std::string> tails;
  for (const auto& e : l1.elements) tails.insert(e.tail.to_string());
  CHECK(tails.size() == 27); // full C3^3 of tau-images

  LmEnumeration l2 = lm_elements(*s, 2, kCap);
  CHECK(l2.elements.size() == 14580); // Alt(5) x C3^5

  CHECK(code_of([&] { lm_elements(*s, 2, 1000); }) == errc::cap_exceeded);
}

TEST_CASE("Folner sets and exact boundary ratios") {
  auto s = toy_small();
  FolnerSet f = folner_set(*s, 1, 1, kCap);
  CHECK(f.glm.size() == 1620);
  CHECK(f.elements.size() == 4860); // 1620 * (2m+1)

  CHECK(folner_ratio(*s, 1, 2, 'a', kCap) == Rational(1, 5));
  CHECK(folner_ratio(*s, 1, 2, 'A', kCap) == Rational(1, 5));
  CHECK(folner_ratio(*s, 1, 2, 'b', kCap) == Rational(0));
  CHECK(folner_ratio(*s, 1, 2, 'B', kCap) == Rational(0));

  auto flat = toy_flat();
  CHECK(folner_ratio(*flat, 1, 3, 'a', kCap) == Rational(1, 7));
  CHECK(folner_ratio(*flat, 1, 3, 'b', kCap) == Rational(0));

  CHECK(code_of([&] { folner_ratio(*s, 1, 1, 'x', kCap); }) == errc::invalid_argument);
}

TEST_CASE("finite quotients and the bijection report") {
  auto s = toy_small();
  CHECK(pn_order(*s, 1, 1) == BigInt(81));
  CHECK(pn_order(*s, 2, 2) == BigInt(72900));

  NeumannElement g(s, parse_word("ab"));
  FiniteQuotientElement q = finite_quotient(*s, g, 2, 1);
  REQUIRE(q.coords.size() == 1);
  CHECK(q.coords[0] == g.coordinate(1));
  CHECK(q.tail == project_finite(g.tau(), 1));

  // n = 1, m = 1: |F_1| = 4860 covers P_1 (81) but is far from injective
  BijectionReport r11 = finite_quotient_bijection(*s, 1, 1, kCap);
  CHECK_FALSE(r11.bijective);
  CHECK(r11.folner_size == 4860);
  CHECK(r11.image_size == 81);
  CHECK(r11.pn_size == BigInt(81));

  // n = 2, m = 2: the window is wide enough and phi_2 is a bijection
  BijectionReport r22 = finite_quotient_bijection(*s, 2, 2, kCap);
  CHECK(r22.bijective);
  CHECK(r22.folner_size == 72900);
  CHECK(r22.image_size == 72900);
  CHECK(r22.pn_size == BigInt(72900));
}

TEST_CASE("conjugation density") {
  auto flat = toy_flat();
  DensityResult d1 = conjugation_density(*flat, parse_lamp_word("b_-1 b_0 b_1"), 1, 3, kCap);
  CHECK(d1.density == Rational(5, 7));
  CHECK(d1.folner_size == 15309);
  CHECK(d1.hits == 10935);

  DensityResult d2 = conjugation_density(*flat, parse_lamp_word("b_0 b_1"), 1, 3, kCap);
  CHECK(d2.density == Rational(6, 7));
  CHECK(d2.hits == 13122);

  DensityResult d3 = conjugation_density(*flat, parse_lamp_word("b_0"), 1, 3, kCap);
  CHECK(d3.density == Rational(1));

  // the guaranteed lower bound (2(m_n - m) + 1)/(2 m_n + 1) for g in L_m
  CHECK(d1.density >= Rational(5, 7));
  CHECK(d2.density >= Rational(5, 7));
  CHECK(d3.density >= Rational(1));
}

TEST_CASE("alternating conjugator counts") {
  Permutation c123 = parse_permutation("(1 2 3)", 5);
  Permutation c234 = parse_permutation("(2 3 4)", 5);
  CHECK(alt_conjugator_count(c123, c234) == BigInt(3));
  CHECK(alt_conjugator_count(c123, c123) == BigInt(3));
  CHECK(alt_conjugator_count(c123, parse_permutation("(1 2)(3 4)", 5)) == BigInt(0));
  CHECK(alt_conjugator_count(Permutation(4), Permutation(4)) == BigInt(12)); // |Alt(4)|
  // no even conjugator maps (1 2 3) to (1 3 2) inside Alt(3)
  CHECK(alt_conjugator_count(parse_permutation("(1 2 3)"), parse_permutation("(1 3 2)")) ==
        BigInt(0));
  CHECK(alt_conjugator_count(parse_permutation("(1 2 3)"), parse_permutation("(1 2 3)")) ==
        BigInt(3));
}

TEST_CASE("cosofic approximants: factored counting matches direct enumeration") {
  auto s = toy_small();
  std::vector<LampWord> h = {parse_lamp_word("b_0")};

  std::vector<LampWord> tests = {parse_lamp_word(""), parse_lamp_word("b_0"),
                                 parse_lamp_word("b_0^2"), parse_lamp_word("b_1"),
                                 parse_lamp_word("b_2")};
  CosoficResult res = cosofic_approximant(*s, h, tests, 2, 1, kCap);
  CHECK(res.k_image.size() == 3);
  CHECK(res.folner_size == BigInt(4860));
  REQUIRE(res.densities.size() == 5);
  CHECK(res.densities[0] == Rational(0));
  CHECK(res.densities[1] == Rational(0));
  CHECK(res.densities[2] == Rational(0));
  CHECK(res.densities[3] == Rational(0));
  CHECK(res.densities[4] == Rational(1, 60)); // the wide test sees the hidden coordinate

  for (const auto& t : tests)
    CHECK(cosofic_density_direct(*s, h, t, 2, 1, 500000) ==
          res.densities[&t - tests.data()]);

  // pi_1(b_0) = (1 2 3) and pi_1(b_1) = (2 3 4) generate Alt(4), so the image
  // of <b_0, b_1> is a subdirect product of Alt(4) and C3 x C3 glued along a
  // common C3 quotient: 12 * 9 / 3 = 36 elements.
  std::vector<LampWord> h2 = {parse_lamp_word("b_0"), parse_lamp_word("b_1")};
  CosoficResult res2 = cosofic_approximant(*s, h2, {parse_lamp_word("b_0")}, 2, 1, kCap);
  CHECK(res2.k_image.size() == 36);

  // preconditions of the factored method
  CHECK(code_of([&] { cosofic_approximant(*s, {parse_lamp_word("b_2")}, tests, 2, 1, kCap); }) ==
        errc::invalid_argument);
  CHECK(code_of([&] { cosofic_approximant(*s, h, tests, 1, 1, kCap); }) ==
        errc::invalid_argument);
}

TEST_CASE("cosofic densities vanish along increasing n") {
  auto s = toy_small();
  std::vector<LampWord> h = {parse_lamp_word("b_0")};
  LampWord g = parse_lamp_word("b_2");

  Rational p2 = cosofic_approximant(*s, h, {g}, 2, 1, kCap).densities[0];
  Rational p3 = cosofic_approximant(*s, h, {g}, 3, 1, kCap).densities[0];
  Rational p4 = cosofic_approximant(*s, h, {g}, 4, 1, kCap).densities[0];
  CHECK(p2 == Rational(1, 60));
  CHECK(p3 == Rational(1, 116280));
  CHECK(p4 == Rational(1, 411863760));
  // each widening multiplies by (conjugators of a 3-cycle) / |Alt(d)|,
  // i.e. (3 * (d-3)!/2) / (d!/2) at the newly constrained coordinate
  CHECK(p3 == Rational(p2 * Rational(BigInt(3) * factorial(16), factorial(19))));
  CHECK(p4 == Rational(p3 * Rational(BigInt(3) * factorial(20), factorial(23))));
  CHECK(p2 > p3);
  CHECK(p3 > p4);
  CHECK(p4 > Rational(0));

  // an element conjugate into H is invisible at every window
  LampWord in_h = parse_lamp_word("b_1");
  for (size_t n : {2, 3, 4})
    CHECK(cosofic_approximant(*s, h, {in_h}, n, 1, kCap).densities[0] == Rational(0));
}

TEST_CASE("cosofic densities for shifted test words") {
  auto s = toy_small();
  std::vector<LampWord> h = {parse_lamp_word("b_0")};
  CHECK(cosofic_density_shifted(*s, h, parse_word("aaa"), 1, 1, kCap) == Rational(1));
  CHECK(cosofic_density_shifted(*s, h, parse_word("aaa"), 2, 1, 400000) == Rational(0));
  CHECK(cosofic_density_shifted(*s, h, parse_word("a"), 1, 1, kCap) == Rational(0));
  CHECK(code_of([&] { cosofic_density_shifted(*s, h, parse_word("b"), 1, 1, kCap); }) ==
        errc::invalid_argument);
}
