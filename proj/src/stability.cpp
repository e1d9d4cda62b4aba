#include "permstab/stability.hpp"

#include "permstab/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

namespace permstab {

namespace {

Permutation pmul(const Permutation& s, const Permutation& t) { return s * t; }
Permutation pinv(const Permutation& s) { return s.inverse(); }

uint64_t moved_between(const Permutation& s, const Permutation& t) {
  uint64_t count = 0;
  for (uint32_t i = 0; i < s.degree(); ++i)
    if (s.apply(i) != t.apply(i)) ++count;
  return count;
}

void check_delta_interval(const Rational& delta, bool closed_top) {
  if (delta <= 0 || (closed_top ? delta > 1 : delta >= 1))
    fail(errc::invalid_argument, closed_top ? "delta must lie in (0, 1]" : "delta must lie in (0, 1)");
}

} // namespace

PermTuple make_perm_tuple(Permutation x, Permutation y) {
  if (x.degree() != y.degree())
    fail(errc::degree_mismatch, "tuple entries act on different domains: " +
                                    std::to_string(x.degree()) + " and " +
                                    std::to_string(y.degree()));
  return {std::move(x), std::move(y)};
}

PermTuple parse_perm_tuple(const std::string& text) {
  std::istringstream iss(text);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(iss, line)) {
    size_t a = line.find_first_not_of(" \t\r");
    if (a == std::string::npos || line[a] == '#') continue;
    lines.push_back(line);
  }
  if (lines.size() != 2)
    fail(errc::parse_error, "expected exactly two permutation lines (x then y), got " +
                                std::to_string(lines.size()));
  // Degrees are unified to the larger of the two; a line that needs a degree
  // hint (the bare identity "()") takes it from the other line, and genuine
  // syntax errors resurface in the second, hinted parse.
  uint32_t d = 0;
  for (const auto& l : lines) {
    try {
      d = std::max(d, parse_permutation(l).degree());
    } catch (const Error& e) {
      if (e.code() != errc::parse_error) throw;
    }
  }
  if (d == 0)
    fail(errc::parse_error, "cannot infer the tuple degree from '" + lines[0] + "'");
  return make_perm_tuple(parse_permutation(lines[0], d), parse_permutation(lines[1], d));
}

Permutation evaluate_tuple(const PermTuple& rho, const FreeWord& w) {
  return w.evaluate(Permutation(rho.x.degree()), std::vector<Permutation>{rho.x, rho.y}, pmul,
                    pinv);
}

uint32_t apply_word(const PermTuple& rho, const FreeWord& w, uint32_t point) {
  Permutation xi = rho.x.inverse();
  Permutation yi = rho.y.inverse();
  const auto& letters = w.letters();
  uint32_t p = point;
  for (auto it = letters.rbegin(); it != letters.rend(); ++it) {
    switch (*it) {
      case 1: p = rho.x.apply(p); break;
      case -1: p = xi.apply(p); break;
      case 2: p = rho.y.apply(p); break;
      case -2: p = yi.apply(p); break;
      default: fail(errc::invalid_argument, "word uses a generator outside {x, y}");
    }
  }
  return p;
}

bool is_almost_solution(const PermTuple& rho, const Rational& delta, const RelationSet& E) {
  check_delta_interval(delta, /*closed_top=*/true);
  Permutation id(rho.x.degree());
  for (const auto& r : E.relations())
    if (hamming_distance(evaluate_tuple(rho, r), id) >= delta) return false;
  return true;
}

TestVerdict sample_and_substitute(const PermTuple& rho, const RelationSet& E,
                                  const Rational& delta, const Rational& confidence,
                                  uint64_t seed) {
  check_delta_interval(delta, /*closed_top=*/true);
  if (confidence <= 0 || confidence >= 1)
    fail(errc::invalid_argument, "confidence must lie in (0, 1)");
  uint32_t n_points = rho.x.degree();
  if (n_points == 0) fail(errc::invalid_argument, "the point set is empty");

  TestVerdict verdict{true, std::nullopt, 0, seed, 0, 0};
  if (E.size() == 0) return verdict;

  double ratio = static_cast<double>(E.size()) /
                 static_cast<double>(Rational(1) - confidence);
  double raw = std::log(ratio) / static_cast<double>(delta);
  uint64_t samples = raw <= 1.0 ? 1 : static_cast<uint64_t>(std::ceil(raw));
  verdict.samples_per_relation = samples;

  std::mt19937_64 rng(seed);
  uint64_t bound = n_points;
  uint64_t limit = std::numeric_limits<uint64_t>::max() / bound * bound;
  auto draw = [&]() {
    uint64_t v;
    do {
      v = rng();
    } while (v >= limit);
    return static_cast<uint32_t>(v % bound);
  };

  for (size_t ri = 0; ri < E.size(); ++ri) {
    const FreeWord& r = E.relations()[ri];
    for (uint64_t s = 0; s < samples; ++s) {
      uint32_t start = draw();
      uint32_t p = apply_word(rho, r, start);
      verdict.total_queries += 1;
      verdict.weighted_cost += r.length();
      if (p != start) {
        verdict.pass = false;
        verdict.witness = {ri, start};
        return verdict;
      }
    }
  }
  return verdict;
}

Rational local_defect(const PermTuple& rho, const RelationSet& R) {
  Permutation id(rho.x.degree());
  Rational sum = 0;
  for (const auto& r : R.relations()) sum += hamming_distance(evaluate_tuple(rho, r), id);
  return sum;
}

GlobalDefect global_defect(const PermTuple& rho, const RelationSet& R, uint32_t cap_degree) {
  uint32_t n = rho.x.degree();
  if (n > cap_degree)
    fail(errc::cap_exceeded, "degree " + std::to_string(n) + " exceeds the brute-force cap " +
                                 std::to_string(cap_degree));
  if (n == 0) fail(errc::invalid_argument, "the point set is empty");
  std::vector<Permutation> sym;
  std::vector<uint32_t> images(n);
  for (uint32_t i = 0; i < n; ++i) images[i] = i;
  do {
    sym.emplace_back(images);
  } while (std::next_permutation(images.begin(), images.end()));

  bool found = false;
  uint64_t best = 0;
  size_t best_x = 0, best_y = 0;
  for (size_t ix = 0; ix < sym.size(); ++ix) {
    for (size_t iy = 0; iy < sym.size(); ++iy) {
      PermTuple phi{sym[ix], sym[iy]};
      bool solves = true;
      for (const auto& r : R.relations()) {
        if (!evaluate_tuple(phi, r).is_identity()) {
          solves = false;
          break;
        }
      }
      if (!solves) continue;
      uint64_t cost = moved_between(rho.x, phi.x) + moved_between(rho.y, phi.y);
      if (!found || cost < best) { // lex order of enumeration breaks ties
        found = true;
        best = cost;
        best_x = ix;
        best_y = iy;
      }
    }
  }
  if (!found) fail(errc::internal, "no solution pair exists"); // identity pair always solves
  return {Rational(best, n), {sym[best_x], sym[best_y]}};
}

PadResult pad_block_solution(const PermTuple& psi, const FreeWord& w1, const Rational& delta) {
  check_delta_interval(delta, /*closed_top=*/false);
  uint32_t n = psi.x.degree();
  if (n == 0) fail(errc::invalid_argument, "the point set is empty");
  Permutation image = evaluate_tuple(psi, w1);
  if (hamming_distance(image, Permutation(n)) != 1)
    fail(errc::invalid_argument,
         "w1 must move every point of the block: d(psi(w1), id) must be exactly 1");

  uint64_t pad = 0;
  Rational violation;
  for (uint64_t r = 1;; ++r) {
    Rational v(n, static_cast<uint64_t>(n) + r);
    if (v <= delta / 2)
      fail(errc::internal, "no pad size hits the open interval (delta/2, delta)");
    if (v < delta) {
      pad = r;
      violation = v;
      break;
    }
  }

  auto extend = [&](const Permutation& p) {
    std::vector<uint32_t> img(n + pad);
    for (uint32_t i = 0; i < n; ++i) img[i] = p.apply(i);
    for (uint64_t i = n; i < n + pad; ++i) img[i] = static_cast<uint32_t>(i);
    return Permutation(std::move(img));
  };
  return {{extend(psi.x), extend(psi.y)}, 1, pad, violation};
}

Rational stability_cost(const RelationSet& E, const Rational& delta) {
  check_delta_interval(delta, /*closed_top=*/true);
  return Rational(E.norm()) / delta;
}

SoficReport sofic_check(const SoficTable& table, const std::map<std::string, Permutation>& phi,
                        const Rational& epsilon) {
  if (table.labels.empty()) fail(errc::invalid_argument, "empty label set");
  std::map<std::string, const Permutation*> images;
  uint32_t degree = 0;
  for (const auto& label : table.labels) {
    auto it = phi.find(label);
    if (it == phi.end())
      fail(errc::invalid_argument, "no image supplied for label '" + label + "'");
    if (!images.emplace(label, &it->second).second)
      fail(errc::invalid_argument, "duplicate label '" + label + "'");
    if (degree == 0) degree = it->second.degree();
    if (it->second.degree() != degree)
      fail(errc::degree_mismatch, "images act on different domains");
  }
  for (const auto& entry : table.products)
    for (const auto& label : {entry.g, entry.h, entry.gh})
      if (!images.count(label))
        fail(errc::invalid_argument, "product entry references unknown label '" + label + "'");

  SoficReport report{true, {}};
  auto violate = [&](std::string condition, std::string detail, Rational value) {
    report.pass = false;
    report.violations.push_back({std::move(condition), std::move(detail), std::move(value)});
  };

  Permutation id(degree);
  for (const auto& entry : table.products) {
    Rational d = hamming_distance(*images.at(entry.gh), *images.at(entry.g) * *images.at(entry.h));
    if (!(d < epsilon))
      violate("product", entry.g + " * " + entry.h + " = " + entry.gh, d);
  }
  for (const auto& label : table.labels) {
    if (label == "e") continue;
    Rational d = hamming_distance(*images.at(label), id);
    if (!(d > Rational(1) - epsilon)) violate("separation", label, d);
  }
  if (images.count("e") && !(*images.at("e") == id)) violate("identity", "e", Rational(0));
  return report;
}

} // namespace permstab
