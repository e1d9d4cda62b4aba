#include "permstab/lef.hpp"

#include "permstab/error.hpp"
#include "permstab/neumann.hpp"

#include <map>
#include <memory>
#include <utility>

namespace permstab {

namespace {

Permutation pmul(const Permutation& s, const Permutation& t) { return s * t; }
Permutation pinv(const Permutation& s) { return s.inverse(); }

Permutation evaluate_at(const FreeWord& w, const Permutation& a, const Permutation& b) {
  return w.evaluate(Permutation(a.degree()), std::vector<Permutation>{a, b}, pmul, pinv);
}

} // namespace

ProjectionTable projection_embedding(const SequenceSpec& spec, unsigned l, uint64_t cap) {
  size_t coords = 4 * static_cast<size_t>(l) + 1;
  if (ball_count(l) > cap)
    fail(errc::cap_exceeded, "ball of radius " + std::to_string(l) + " exceeds cap " +
                                 std::to_string(cap));
  ProjectionTable table{l, {}};
  std::vector<std::pair<Permutation, Permutation>> gens;
  gens.reserve(coords);
  for (size_t n = 1; n <= coords; ++n) gens.push_back(generator_images(spec, n));

  // Distinct ball words may name the same group element (b has order 3, so
  // already "bb" and "B" coincide); injectivity is a claim about elements,
  // and a shared tuple is an error only when the word problem separates the
  // two words.  The non-owning alias lets us run it against a borrowed spec.
  std::shared_ptr<const SequenceSpec> alias(std::shared_ptr<const SequenceSpec>{}, &spec);
  std::map<std::vector<Permutation>, size_t> seen;
  for (const FreeWord& w : ball(l)) {
    ProjectionEntry entry{w, {}};
    entry.coords.reserve(coords);
    for (size_t n = 1; n <= coords; ++n)
      entry.coords.push_back(evaluate_at(w, gens[n - 1].first, gens[n - 1].second));
    auto [it, fresh] = seen.emplace(entry.coords, table.entries.size());
    if (!fresh) {
      const FreeWord& prior = table.entries[it->second].word;
      if (!equals(NeumannElement(alias, prior), NeumannElement(alias, w)))
        fail(errc::invalid_argument,
             "projection is not injective on the ball: the distinct elements '" +
                 prior.to_string() + "' and '" + w.to_string() +
                 "' share all coordinates up to 4l+1; the hypothesis r(n) >= n and "
                 "d(n) - 2 r(n) >= n fails inside the window");
    }
    table.entries.push_back(std::move(entry));
  }
  return table;
}

SubstitutionTable substitute_embedding(const SequenceSpec& spec, unsigned l) {
  if (l < 1)
    fail(errc::invalid_argument, "l must be >= 1: the 3-cycle pattern degenerates at l = 0");
  size_t coord = 4 * static_cast<size_t>(l) + 1;
  uint64_t need = 4 * static_cast<uint64_t>(l) + 1;
  uint64_t d = spec.d(coord), r = spec.r(coord);
  if (r < need || d - 2 * r < need)
    fail(errc::invalid_argument,
         "coordinate " + std::to_string(coord) + " must satisfy r >= " + std::to_string(need) +
             " and d - 2r >= " + std::to_string(need) + " (got r = " + std::to_string(r) +
             ", d - 2r = " + std::to_string(d - 2 * r) + ")");

  uint32_t deg = 12 * l + 3;
  Permutation abar = Permutation::cycle(deg, deg);
  Permutation bbar = Permutation::three_cycle(1, 4 * l + 2, 8 * l + 3, deg);
  auto [alpha, beta] = generator_images(spec, coord);

  SubstitutionTable table{l, coord, {}};
  std::map<Permutation, size_t> by_key;
  std::map<Permutation, size_t> by_image;
  for (const FreeWord& w : ball(l)) {
    Permutation key = evaluate_at(w, alpha, beta);
    Permutation image = evaluate_at(w, abar, bbar);
    auto [kit, fresh] = by_key.emplace(key, table.entries.size());
    if (!fresh) {
      if (!(table.entries[kit->second].image == image))
        fail(errc::invalid_argument,
             "substitution is not well defined: words '" +
                 table.entries[kit->second].representative.to_string() + "' and '" +
                 w.to_string() + "' agree at coordinate " + std::to_string(coord) +
                 " but get different images");
      continue;
    }
    auto [iit, image_fresh] = by_image.emplace(image, table.entries.size());
    if (!image_fresh)
      fail(errc::invalid_argument,
           "substitution is not injective: words '" +
               table.entries[iit->second].representative.to_string() + "' and '" +
               w.to_string() + "' differ at coordinate " + std::to_string(coord) +
               " but share an image");
    table.entries.push_back({std::move(key), std::move(image), w});
  }
  return table;
}

LefCertificate lef_certificate(const SequenceSpec& spec, unsigned l, uint64_t cap) {
  if (l < 1)
    fail(errc::invalid_argument, "l must be >= 1: the 3-cycle pattern degenerates at l = 0");
  size_t coords = 4 * static_cast<size_t>(l) + 1;
  uint64_t need = 4 * static_cast<uint64_t>(l) + 1;

  LefCertificate cert{l,    0,    true, true, true,
                      true, {},   1,    1,    projection_embedding(spec, l, cap),
                      substitute_embedding(spec, l)};
  cert.ball_size = cert.projection.entries.size();

  // Partial homomorphism over the stated ball: whenever a product of two
  // ball words stays in the ball, the tuples multiply accordingly.
  std::map<FreeWord, size_t, bool (*)(const FreeWord&, const FreeWord&)> index(
      +[](const FreeWord& a, const FreeWord& b) { return a.letters() < b.letters(); });
  for (size_t i = 0; i < cert.projection.entries.size(); ++i)
    index.emplace(cert.projection.entries[i].word, i);
  for (const auto& u : cert.projection.entries) {
    for (const auto& v : cert.projection.entries) {
      FreeWord uv = u.word * v.word;
      auto it = index.find(uv);
      if (it == index.end()) continue;
      const auto& target = cert.projection.entries[it->second].coords;
      for (size_t n = 0; n < coords; ++n) {
        if (!(u.coords[n] * v.coords[n] == target[n]))
          fail(errc::internal, "projection table violates the partial product rule");
      }
    }
  }

  for (size_t n = 1; n <= coords; ++n) {
    uint64_t d = spec.d(n), r = spec.r(n);
    bool substitutable = r >= need && d - 2 * r >= need;
    if (substitutable) cert.substituted_coords.push_back(n);
    uint64_t fdeg = substitutable ? 12 * static_cast<uint64_t>(l) + 3 : d;
    if (fdeg > 100000)
      fail(errc::unsupported, "degree d(" + std::to_string(n) + ") too large for an order computation");
    cert.constructed_order *= factorial(static_cast<unsigned>(fdeg)) / 2;
  }

  BigInt base = factorial(15 * l);
  cert.reference_bound = 1;
  for (size_t i = 0; i < coords; ++i) cert.reference_bound *= base;
  return cert;
}

nlohmann::json to_json(const LefCertificate& cert) {
  nlohmann::json j;
  j["l"] = cert.l;
  j["ball_size"] = cert.ball_size;
  j["projection_injective"] = cert.projection_injective;
  j["partial_homomorphism"] = cert.partial_homomorphism;
  j["substitution_well_defined"] = cert.substitution_well_defined;
  j["substitution_injective"] = cert.substitution_injective;
  j["substituted_coords"] = cert.substituted_coords;
  j["constructed_order"] = to_string(cert.constructed_order);
  j["reference_bound"] = to_string(cert.reference_bound);
  nlohmann::json proj = nlohmann::json::array();
  for (const auto& e : cert.projection.entries) {
    nlohmann::json row;
    row["word"] = e.word.to_string();
    nlohmann::json cs = nlohmann::json::array();
    for (const auto& p : e.coords) cs.push_back(p.to_cycle_string());
    row["coords"] = cs;
    proj.push_back(row);
  }
  j["projection"] = proj;
  nlohmann::json subs = nlohmann::json::array();
  for (const auto& e : cert.substitution.entries) {
    nlohmann::json row;
    row["key"] = e.key.to_cycle_string();
    row["image"] = e.image.to_cycle_string();
    row["word"] = e.representative.to_string();
    subs.push_back(row);
  }
  j["substitution"] = nlohmann::json::object(
      {{"coordinate", cert.substitution.coordinate}, {"entries", subs}});
  return j;
}

} // namespace permstab
