#include "permstab/sequence_spec.hpp"

#include "permstab/error.hpp"

#include <algorithm>
#include <fstream>

namespace permstab {

namespace {

uint64_t checked_mul(uint64_t a, uint64_t b, const char* what) {
  unsigned __int128 p = static_cast<unsigned __int128>(a) * b;
  if (p > UINT64_MAX) fail(errc::overflow, std::string(what) + " overflows 64 bits");
  return static_cast<uint64_t>(p);
}

uint64_t checked_add(uint64_t a, uint64_t b, const char* what) {
  if (a > UINT64_MAX - b) fail(errc::overflow, std::string(what) + " overflows 64 bits");
  return a + b;
}

uint64_t mulmod(uint64_t a, uint64_t b, uint64_t m) {
  return static_cast<uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

uint64_t powmod(uint64_t base, uint64_t exp, uint64_t m) {
  uint64_t result = 1 % m;
  base %= m;
  while (exp > 0) {
    if (exp & 1) result = mulmod(result, base, m);
    base = mulmod(base, base, m);
    exp >>= 1;
  }
  return result;
}

} // namespace

uint64_t q_of(uint64_t n) { return checked_mul(9, checked_mul(n, n, "q(n)"), "q(n)"); }

uint64_t p_of(uint64_t n) {
  uint64_t inner = checked_add(q_of(n), checked_mul(17, n, "p(n)"), "p(n)");
  return checked_add(checked_mul(4, inner, "p(n)"), 4, "p(n)");
}

bool is_prime_u64(uint64_t n) {
  if (n < 2) return false;
  for (uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    if (n % p == 0) return n == p;
  }
  uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  // This witness set decides primality for all n < 3.3 * 10^24, hence for
  // every 64-bit integer.
  for (uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    uint64_t x = powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int i = 1; i < s; ++i) {
      x = mulmod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

GrowthTarget GrowthTarget::builtin(const std::string& name, uint64_t C) {
  static const char* known[] = {"one", "linear", "poly2", "poly3", "exp2", "tower"};
  if (std::find_if(std::begin(known), std::end(known),
                   [&](const char* k) { return name == k; }) == std::end(known))
    fail(errc::invalid_argument, "unknown growth function '" + name + "'");
  GrowthTarget t;
  t.name_ = name;
  t.c_ = C;
  return t;
}

GrowthTarget GrowthTarget::table(std::vector<std::pair<uint64_t, uint64_t>> points,
                                 uint64_t C) {
  if (points.empty()) fail(errc::invalid_argument, "growth table must be nonempty");
  for (size_t i = 1; i < points.size(); ++i) {
    if (points[i].first <= points[i - 1].first)
      fail(errc::invalid_argument, "growth table sample points must be strictly increasing");
    if (points[i].second < points[i - 1].second)
      fail(errc::invalid_argument, "growth table values must be nondecreasing");
  }
  GrowthTarget t;
  t.name_ = "table";
  t.table_ = std::move(points);
  t.c_ = C;
  return t;
}

GrowthTarget GrowthTarget::from_json(const nlohmann::json& j) {
  uint64_t C = j.value("C", uint64_t(79));
  if (!j.contains("F")) fail(errc::parse_error, "growth target needs an \"F\" field");
  const auto& f = j.at("F");
  if (f.is_string()) return builtin(f.get<std::string>(), C);
  if (f.is_object() && f.contains("table")) {
    std::vector<std::pair<uint64_t, uint64_t>> pts;
    for (const auto& row : f.at("table"))
      pts.emplace_back(row.at(0).get<uint64_t>(), row.at(1).get<uint64_t>());
    return table(std::move(pts), C);
  }
  fail(errc::parse_error, "\"F\" must be a built-in name or {\"table\": [[m, value], ...]}");
}

nlohmann::json GrowthTarget::to_json() const {
  nlohmann::json j;
  if (name_ == "table") {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& [x, v] : table_) rows.push_back({x, v});
    j["F"] = {{"table", rows}};
  } else {
    j["F"] = name_;
  }
  j["C"] = c_;
  return j;
}

uint64_t GrowthTarget::operator()(uint64_t m) const {
  if (name_ == "one") return 1;
  if (name_ == "linear") return m;
  if (name_ == "poly2") return checked_mul(m, m, "F(m) = m^2");
  if (name_ == "poly3") return checked_mul(checked_mul(m, m, "F(m) = m^3"), m, "F(m) = m^3");
  if (name_ == "exp2") {
    if (m >= 64) fail(errc::overflow, "F(m) = 2^m overflows 64 bits at m = " + std::to_string(m));
    return uint64_t(1) << m;
  }
  if (name_ == "tower") {
    uint64_t v = 1;
    for (uint64_t i = 0; i < m; ++i) {
      if (v >= 64)
        fail(errc::overflow, "F(m) = tower(m) overflows 64 bits at m = " + std::to_string(m));
      v = uint64_t(1) << v;
    }
    return v;
  }
  // table
  auto it = std::upper_bound(table_.begin(), table_.end(), m,
                             [](uint64_t x, const auto& row) { return x < row.first; });
  if (it == table_.begin())
    fail(errc::invalid_argument,
         "F not defined at " + std::to_string(m) + " (below first table sample)");
  return std::prev(it)->second;
}

SequenceSpec SequenceSpec::explicit_spec(std::vector<uint64_t> d, std::vector<uint64_t> r,
                                         bool tail_certified) {
  if (d.empty() || d.size() != r.size())
    fail(errc::invalid_argument, "d and r must be nonempty sequences of equal length");
  SequenceSpec s;
  s.d_ = std::move(d);
  s.r_ = std::move(r);
  s.tail_certified_ = tail_certified;
  for (size_t n = 1; n <= s.d_.size(); ++n) s.validate_index(n);
  return s;
}

SequenceSpec SequenceSpec::generated(GrowthTarget target, size_t pregenerate) {
  SequenceSpec s;
  s.target_ = std::move(target);
  s.ensure(std::max<size_t>(pregenerate, 1));
  return s;
}

void SequenceSpec::validate_index(size_t n) const {
  uint64_t dn = d_[n - 1], rn = r_[n - 1];
  auto at = " at index " + std::to_string(n);
  if (dn < 5 || dn % 2 == 0 || !is_prime_u64(dn))
    fail(errc::invalid_argument, "d must be an odd prime >= 5" + at);
  if (n >= 2 && dn < d_[n - 2])
    fail(errc::invalid_argument, "d must be nondecreasing" + at);
  if (rn < 1) fail(errc::invalid_argument, "r must be >= 1" + at);
  if (n >= 2 && rn <= r_[n - 2])
    fail(errc::invalid_argument, "r must be strictly increasing" + at);
  if (3 * rn > dn) fail(errc::invalid_argument, "3 r(n) <= d(n) violated" + at);
}

uint64_t SequenceSpec::d(size_t n) const {
  if (n == 0) fail(errc::invalid_argument, "indices are 1-based");
  ensure(n);
  return d_[n - 1];
}

uint64_t SequenceSpec::r(size_t n) const {
  if (n == 0) fail(errc::invalid_argument, "indices are 1-based");
  ensure(n);
  return r_[n - 1];
}

void SequenceSpec::ensure(size_t n) const {
  if (n <= d_.size()) return;
  if (!target_)
    fail(errc::horizon_insufficient,
         "index " + std::to_string(n) + " exceeds the explicit table (horizon " +
             std::to_string(d_.size()) + ")");
  if (n > extension_cap_)
    fail(errc::horizon_insufficient,
         "index " + std::to_string(n) + " exceeds the extension cap " +
             std::to_string(extension_cap_));
  while (d_.size() < n) generate_next();
}

void SequenceSpec::generate_next() const {
  size_t n = d_.size() + 1;
  const GrowthTarget& t = *target_;
  uint64_t lower = 5;
  if (n >= 2) lower = std::max(lower, checked_add(d_[n - 2], 1, "d lower bound"));
  lower = std::max(lower, checked_mul(t.C(), checked_mul(n, n, "C n^2"), "C n^2"));
  uint64_t fval;
  try {
    fval = t(p_of(n + 1));
  } catch (const Error& e) {
    if (e.code() == errc::overflow)
      fail(errc::overflow,
           std::string(e.what()) + " (while generating index " + std::to_string(n) + ")");
    throw;
  }
  lower = std::max(lower, fval);

  uint64_t dn = lower + (lower % 2 == 0 ? 1 : 0);
  while (!is_prime_u64(dn)) dn = checked_add(dn, 2, "prime search");

  uint64_t qn = q_of(n);
  uint64_t rn = 0;
  for (uint64_t cand = qn + 1; cand < checked_add(qn, checked_mul(17, n, "interval"), "interval");
       ++cand) {
    if (3 * cand >= dn) break; // interval sits below d/3 or we are done
    bool ok = true;
    for (size_t m = 1; m + 1 <= n && ok; ++m) {
      uint64_t dm = d_[m - 1], rm = r_[m - 1];
      uint64_t c = cand % dm;
      if (c == rm % dm || c == (dm - rm % dm) % dm || c == (2 * rm) % dm ||
          c == (dm - (2 * rm) % dm) % dm)
        ok = false;
      // the symmetric direction: r(m) against +-cand, +-2cand mod d(n)
      uint64_t rmod = rm % dn;
      if (rmod == cand % dn || rmod == (dn - cand % dn) % dn || rmod == (2 * cand) % dn ||
          rmod == (dn - (2 * cand) % dn) % dn)
        ok = false;
    }
    if (ok) {
      rn = cand;
      break;
    }
  }
  if (rn == 0)
    fail(errc::invalid_argument,
         "no admissible r(n) at index " + std::to_string(n) +
             " (the constant C is too small, or the interval search is exhausted)");

  d_.push_back(dn);
  r_.push_back(rn);
  validate_index(n);
}

void SequenceSpec::certify_tail(uint64_t need) const {
  if (!target_) {
    if (!tail_certified_)
      fail(errc::horizon_insufficient,
           "explicit spec carries no tail certificate; cannot certify indices beyond the horizon");
    size_t H = d_.size();
    uint64_t rH = r_[H - 1], gapH = d_[H - 1] - 2 * r_[H - 1];
    if (rH + 1 < need || gapH < need)
      fail(errc::horizon_insufficient,
           "tail certificate too weak: need r, d-2r >= " + std::to_string(need) +
               " beyond index " + std::to_string(H) + " but the certificate only gives r >= " +
               std::to_string(rH + 1) + ", d-2r >= " + std::to_string(gapH));
    return;
  }
  // Generated mode: by construction r(n) >= 9n^2 + 1 and
  // d(n) - 2r(n) >= (C-18)n^2 - 34n + 2; both are increasing in n once C >= 30.
  uint64_t C = target_->C();
  if (C < 30)
    fail(errc::horizon_insufficient,
         "analytic tail certification requires C >= 30 (C = " + std::to_string(C) + ")");
  size_t n0 = 1;
  auto tail_ok = [&](uint64_t n) {
    unsigned __int128 rlow = static_cast<unsigned __int128>(9) * n * n + 1;
    unsigned __int128 gaplow_pos = static_cast<unsigned __int128>(C - 18) * n * n + 2;
    unsigned __int128 gaplow_neg = static_cast<unsigned __int128>(34) * n;
    return rlow >= need && gaplow_pos >= gaplow_neg + need;
  };
  while (!tail_ok(n0)) {
    if (++n0 > extension_cap_)
      fail(errc::horizon_insufficient,
           "analytic tail certification for r, d-2r >= " + std::to_string(need) +
               " needs indices past the extension cap");
  }
  ensure(n0); // indices beyond n0 are certified analytically; up to n0 checked exactly
}

size_t threshold(const SequenceSpec& spec, uint64_t l) {
  uint64_t need = checked_add(checked_mul(2, l, "2l+1"), 1, "2l+1");
  spec.certify_tail(need);
  size_t N = 1;
  for (size_t n = 1; n <= spec.horizon(); ++n) {
    if (spec.r(n) < need || spec.d(n) - 2 * spec.r(n) < need) N = n + 1;
  }
  return N;
}

SequenceSpec generate_sequence(const GrowthTarget& target, size_t N) {
  if (N < 1) fail(errc::invalid_argument, "N must be >= 1");
  return SequenceSpec::generated(target, N);
}

SequenceSpec SequenceSpec::from_json(const nlohmann::json& j) {
  if (j.contains("explicit") == j.contains("generated"))
    fail(errc::parse_error, "spec JSON must contain exactly one of \"explicit\", \"generated\"");
  if (j.contains("explicit")) {
    const auto& e = j.at("explicit");
    if (!e.contains("d") || !e.contains("r"))
      fail(errc::parse_error, "explicit spec needs \"d\" and \"r\" arrays");
    return explicit_spec(e.at("d").get<std::vector<uint64_t>>(),
                         e.at("r").get<std::vector<uint64_t>>(),
                         e.value("tail_certified", false));
  }
  const auto& g = j.at("generated");
  GrowthTarget t = GrowthTarget::from_json(g);
  return generated(std::move(t), g.value("N", size_t(1)));
}

SequenceSpec SequenceSpec::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(errc::invalid_argument, "cannot open spec file '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    fail(errc::parse_error, "bad JSON in '" + path + "': " + e.what());
  }
  return from_json(j);
}

nlohmann::json SequenceSpec::to_json() const {
  nlohmann::json j;
  if (target_) {
    j["generated"] = target_->to_json();
    j["generated"]["N"] = d_.size();
  } else {
    j["explicit"] = {{"d", d_}, {"r", r_}, {"tail_certified", tail_certified_}};
  }
  return j;
}

nlohmann::json SeqReport::to_json() const {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& e : entries) {
    nlohmann::json row = {{"check", e.name}, {"index", e.index}, {"pass", e.pass}};
    if (e.other != 0) row["other"] = e.other;
    if (!e.detail.empty()) row["detail"] = e.detail;
    rows.push_back(row);
  }
  return {{"entries", rows}, {"standing_ok", standing_ok}, {"theorem_ok", theorem_ok}};
}

SeqReport verify_sequence(const SequenceSpec& spec, size_t N, const GrowthTarget* target) {
  if (N < 1) fail(errc::invalid_argument, "N must be >= 1");
  spec.ensure(N);
  SeqReport rep;
  auto add = [&](const std::string& name, size_t idx, size_t other, bool pass, bool standing,
                 const std::string& detail) {
    rep.entries.push_back({name, idx, other, pass, pass ? "" : detail});
    if (!pass) {
      rep.theorem_ok = false;
      if (standing) rep.standing_ok = false;
    }
  };

  for (size_t n = 1; n <= N; ++n) {
    uint64_t dn = spec.d(n), rn = spec.r(n);
    add("d_odd_prime_ge_5", n, 0, dn >= 5 && dn % 2 == 1 && is_prime_u64(dn), true,
        "d(n) = " + std::to_string(dn));
    if (n >= 2) {
      add("d_nondecreasing", n, 0, dn >= spec.d(n - 1), true,
          "d(" + std::to_string(n) + ") < d(" + std::to_string(n - 1) + ")");
      add("r_strictly_increasing", n, 0, rn > spec.r(n - 1), true,
          "r(" + std::to_string(n) + ") <= r(" + std::to_string(n - 1) + ")");
    }
    add("three_r_le_d", n, 0, 3 * rn <= dn, true,
        "3 r(n) = " + std::to_string(3 * rn) + " > d(n) = " + std::to_string(dn));
    uint64_t qn = q_of(n);
    add("interval_a", n, 0, qn < rn && rn < qn + 17 * n, false,
        "r(n) = " + std::to_string(rn) + " outside (" + std::to_string(qn) + ", " +
            std::to_string(qn + 17 * n) + ")");
    add("r_below_d_over_3", n, 0, 3 * rn < dn, false,
        "3 r(n) = " + std::to_string(3 * rn) + " >= d(n) = " + std::to_string(dn));
    if (target) {
      uint64_t lower = n >= 2 ? spec.d(n - 1) + 1 : 1;
      lower = std::max(lower, checked_mul(target->C(), checked_mul(n, n, "C n^2"), "C n^2"));
      bool growth_ok = true;
      std::string why;
      try {
        lower = std::max(lower, (*target)(p_of(n + 1)));
      } catch (const Error& e) {
        growth_ok = false;
        why = e.what();
      }
      if (growth_ok) {
        growth_ok = dn >= lower;
        why = "d(n) = " + std::to_string(dn) + " < required " + std::to_string(lower);
      }
      add("d_growth_bound", n, 0, growth_ok, false, why);
    }
  }
  // Condition (b), both directions: for all ordered pairs l != m, two entries
  // per pair (the +-r(m) family and the +-2r(m) family).
  for (size_t l = 1; l <= N; ++l) {
    for (size_t m = 1; m <= N; ++m) {
      if (l == m) continue;
      uint64_t dm = spec.d(m), rl = spec.r(l) % dm, rm = spec.r(m) % dm;
      uint64_t r2 = (2 * spec.r(m)) % dm;
      add("congruence_r", l, m, rl != rm && rl != (dm - rm) % dm, false,
          "r(l) == +-r(m) mod d(m)");
      add("congruence_2r", l, m, rl != r2 && rl != (dm - r2) % dm, false,
          "r(l) == +-2r(m) mod d(m)");
    }
  }
  return rep;
}

} // namespace permstab
