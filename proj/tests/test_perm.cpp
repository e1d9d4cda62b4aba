#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "permstab/closure.hpp"
#include "permstab/error.hpp"
#include "permstab/perm.hpp"
#include "permstab/perm_group.hpp"
#include "permstab/rational.hpp"

#include <algorithm>
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

std::vector<Permutation> all_of_sym(uint32_t n) {
  std::vector<uint32_t> img(n);
  for (uint32_t i = 0; i < n; ++i) img[i] = i;
  std::vector<Permutation> out;
  do {
    out.emplace_back(img);
  } while (std::next_permutation(img.begin(), img.end()));
  return out;
}

} // namespace

TEST_CASE("identity basics") {
  Permutation e(5);
  CHECK(e.degree() == 5);
  CHECK(e.is_identity());
  CHECK(e.support_size() == 0);
  CHECK(e.is_even());
  CHECK(e.to_cycle_string() == "()");
}

TEST_CASE("constructors and parsing agree") {
  CHECK(Permutation::cycle(3, 3) == parse_permutation("2 3 1"));
  CHECK(Permutation::cycle(3, 3) == parse_permutation("(1 2 3)"));
  CHECK(Permutation::three_cycle(1, 2, 3, 5) == parse_permutation("(1 2 3)", 5));
  CHECK(parse_permutation("(1 2 3)", 5).degree() == 5);
  CHECK(parse_permutation("(1 2)(3 4)").degree() == 4);
  CHECK(Permutation::cycle(4, 4).to_cycle_string() == "(1 2 3 4)");
  Permutation p = parse_permutation("(1 3)(2 5 4)", 6);
  CHECK(parse_permutation(p.to_cycle_string(), p.degree()) == p);
}

TEST_CASE("composition applies the right factor first") {
  Permutation s = parse_permutation("(1 2)", 3);
  Permutation t = parse_permutation("(2 3)", 3);
  CHECK(s * t == parse_permutation("(1 2 3)", 3));
  CHECK(t * s == parse_permutation("(1 3 2)", 3));
  // (s*t)(w) = s(t(w)) point by point, 0-based apply
  for (uint32_t w = 0; w < 3; ++w) CHECK((s * t).apply(w) == s.apply(t.apply(w)));
}

TEST_CASE("inverse and power") {
  Permutation p = Permutation::cycle(5, 5);
  CHECK((p * p.inverse()).is_identity());
  CHECK((p.inverse() * p).is_identity());
  CHECK(p.power(5).is_identity());
  CHECK(p.power(0).is_identity());
  CHECK(p.power(-2) == p.power(3));
  CHECK(p.power(7) == p * p);
}

TEST_CASE("parity and support") {
  CHECK_FALSE(parse_permutation("(1 2)", 4).is_even());
  CHECK(parse_permutation("(1 2 3)", 4).is_even());
  CHECK_FALSE(Permutation::cycle(4, 4).is_even());
  CHECK(parse_permutation("(1 2)(3 4)").is_even());
  CHECK(parse_permutation("(1 2 3)(4 5)", 6).support_size() == 5);
}

TEST_CASE("normalized Hamming distance is exact") {
  Permutation id(6);
  CHECK(hamming_distance(parse_permutation("(1 2)", 6), id) == Rational(1, 3));
  CHECK(hamming_distance(Permutation::cycle(6, 6), id) == Rational(1));
  CHECK(hamming_distance(id, id) == Rational(0));
}

TEST_CASE("metric axioms hold exhaustively on Sym(3)") {
  auto sym = all_of_sym(3);
  REQUIRE(sym.size() == 6);
  for (const auto& s : sym)
    for (const auto& t : sym) {
      Rational d = hamming_distance(s, t);
      CHECK(d == hamming_distance(t, s));
      CHECK((d == 0) == (s == t));
      for (const auto& u : sym) {
        CHECK(hamming_distance(s, u) <= Rational(d + hamming_distance(t, u)));
        CHECK(hamming_distance(s * u, t * u) == d);
        CHECK(hamming_distance(u * s, u * t) == d);
      }
    }
}

TEST_CASE("argument validation") {
  CHECK(code_of([] { parse_permutation("not a permutation"); }) == errc::parse_error);
  CHECK(code_of([] { parse_permutation("2 2 1"); }) == errc::invalid_argument);
  CHECK(code_of([] { parse_permutation("(1 2", 3); }) == errc::parse_error);
  CHECK(parse_permutation("(1 2 3)", 2).degree() == 3); // hint only ever raises the degree
  CHECK(code_of([] { Permutation::cycle(0, 5); }) == errc::invalid_argument);
  CHECK(code_of([] { Permutation::cycle(6, 5); }) == errc::invalid_argument);
  CHECK(code_of([] { Permutation::three_cycle(0, 1, 2, 5); }) == errc::invalid_argument);
  CHECK(code_of([] { Permutation::three_cycle(1, 1, 2, 5); }) == errc::invalid_argument);
  CHECK(code_of([] {
          Permutation a(3), b(4);
          a* b;
        }) == errc::degree_mismatch);
  CHECK(code_of([] { hamming_distance(Permutation(3), Permutation(4)); }) ==
        errc::degree_mismatch);
}

TEST_CASE("Schreier-Sims orders") {
  PermGroup alt5({Permutation::cycle(5, 5), parse_permutation("(1 2 3)", 5)});
  CHECK(alt5.order() == BigInt(60));
  PermGroup sym4({Permutation::cycle(4, 4), parse_permutation("(1 2)", 4)});
  CHECK(sym4.order() == BigInt(24));
  PermGroup c7({Permutation::cycle(7, 7)});
  CHECK(c7.order() == BigInt(7));
  PermGroup trivial({Permutation(4)});
  CHECK(trivial.order() == BigInt(1));
}

TEST_CASE("membership in Alt(5)") {
  PermGroup alt5({Permutation::cycle(5, 5), parse_permutation("(1 2 3)", 5)});
  CHECK(alt5.contains(parse_permutation("(1 2)(3 4)", 5)));
  CHECK(alt5.contains(Permutation(5)));
  CHECK_FALSE(alt5.contains(parse_permutation("(1 2)", 5)));
  CHECK_FALSE(alt5.contains(Permutation::cycle(4, 5)));
}

TEST_CASE("closure enumeration with witness words") {
  std::vector<Permutation> gens{parse_permutation("(1 2)", 3), parse_permutation("(1 2 3)", 3)};
  auto mul = [](const Permutation& a, const Permutation& b) { return a * b; };
  auto cl = closure_enumerate(Permutation(3), gens, mul, 100, PermutationHash());
  CHECK(cl.elements.size() == 6);
  CHECK(cl.elements[0].is_identity());
  for (size_t i = 0; i < cl.elements.size(); ++i) {
    Permutation acc(3);
    for (size_t gi : cl.word_for(i)) acc = acc * gens[gi];
    CHECK(acc == cl.elements[i]);
  }
  CHECK(code_of([&] { closure_enumerate(Permutation(3), gens, mul, 3, PermutationHash()); }) ==
        errc::cap_exceeded);
}

TEST_CASE("regular representation is a fixed-point-free homomorphism") {
  auto mul = [](const Permutation& a, const Permutation& b) { return a * b; };
  auto cl = closure_enumerate(Permutation(3),
                              std::vector<Permutation>{parse_permutation("(1 2)", 3),
                                                       parse_permutation("(1 2 3)", 3)},
                              mul, 100, PermutationHash());
  auto reg = regular_representation(cl.elements, mul, PermutationHash());
  REQUIRE(reg.size() == 6);
  std::unordered_map<Permutation, size_t, PermutationHash> index;
  for (size_t i = 0; i < cl.elements.size(); ++i) index.emplace(cl.elements[i], i);
  Permutation id(static_cast<uint32_t>(reg.size()));
  for (size_t i = 0; i < reg.size(); ++i) {
    for (size_t j = 0; j < reg.size(); ++j) {
      size_t k = index.at(cl.elements[i] * cl.elements[j]);
      CHECK(reg[i] * reg[j] == reg[k]);
    }
    if (i != 0) CHECK(hamming_distance(reg[i], id) == Rational(1));
  }
  CHECK(reg[0] == id);

  std::vector<Permutation> not_closed{Permutation(3), parse_permutation("(1 2)", 3),
                                      parse_permutation("(1 2 3)", 3)};
  CHECK(code_of([&] { regular_representation(not_closed, mul, PermutationHash()); }) ==
        errc::invalid_argument);
  std::vector<Permutation> dup{Permutation(3), Permutation(3)};
  CHECK(code_of([&] { regular_representation(dup, mul, PermutationHash()); }) ==
        errc::invalid_argument);
}
