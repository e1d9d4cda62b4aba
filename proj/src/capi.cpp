#include "permstab.h"

#include "permstab/error.hpp"
#include "permstab/lamplighter.hpp"
#include "permstab/lef.hpp"
#include "permstab/neumann.hpp"
#include "permstab/perm.hpp"
#include "permstab/rational.hpp"
#include "permstab/sequence_spec.hpp"
#include "permstab/stability.hpp"
#include "permstab/suite.hpp"
#include "permstab/word.hpp"

#include <json.hpp>

#include <cstdlib>
#include <cstring>
#include <memory>
#include <new>
#include <optional>
#include <string>
#include <utility>
#include <vector>

using nlohmann::json;
using namespace permstab;

struct ps_spec {
  std::shared_ptr<SequenceSpec> impl;
};

namespace {

constexpr uint64_t kDefaultCap = 200000;

thread_local int g_status = PS_OK;
thread_local std::string g_message = "ok";

void set_status(int status, std::string message) {
  g_status = status;
  g_message = std::move(message);
}

// Runs `fn`, records PS_OK or the mapped error, and returns `fallback` on
// failure. Every exported entry point goes through here so no exception can
// cross the C boundary.
template <typename T, typename F>
T guarded(F&& fn, T fallback) {
  try {
    set_status(PS_OK, "ok");
    return fn();
  } catch (const Error& e) {
    set_status(static_cast<int>(e.code()), e.what());
  } catch (const json::exception& e) {
    set_status(PS_EPARSE, e.what());
  } catch (const std::bad_alloc&) {
    set_status(PS_EINTERNAL, "out of memory");
  } catch (const std::exception& e) {
    set_status(PS_EINTERNAL, e.what());
  }
  return fallback;
}

char* dup_cstr(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) fail(errc::internal, "out of memory");
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void require(const void* p, const char* name) {
  if (p == nullptr) fail(errc::invalid_argument, std::string(name) + " must not be null");
}

uint64_t effective_cap(uint64_t cap) { return cap == 0 ? kDefaultCap : cap; }

std::shared_ptr<const SequenceSpec> spec_of(ps_spec* spec) {
  require(spec, "spec");
  return spec->impl;
}

json lamplighter_json(const LamplighterElement& g) {
  json lamps = json::object();
  for (const auto& [pos, val] : g.lamps()) lamps[std::to_string(pos)] = val;
  return json{{"shift", g.shift()}, {"lamps", lamps}, {"text", g.to_string()}};
}

std::vector<LampWord> parse_lamp_word_array(const char* text, const char* name) {
  require(text, name);
  json arr = json::parse(text);
  if (!arr.is_array()) fail(errc::parse_error, std::string(name) + " must be a JSON array");
  std::vector<LampWord> out;
  for (const auto& item : arr) {
    if (!item.is_string())
      fail(errc::parse_error, std::string(name) + " entries must be lamp-word strings");
    out.push_back(parse_lamp_word(item.get<std::string>()));
  }
  return out;
}

} // namespace

extern "C" {

int ps_last_status(void) { return g_status; }

const char* ps_last_error(void) { return g_message.c_str(); }

void ps_string_free(char* s) { std::free(s); }

const char* ps_version(void) { return "1.0.0"; }

/* ---------------------------------------------------------------- specs -- */

ps_spec* ps_spec_from_json(const char* json_text) {
  return guarded<ps_spec*>(
      [&]() -> ps_spec* {
        require(json_text, "json_text");
        auto impl = std::make_shared<SequenceSpec>(SequenceSpec::from_json(json::parse(json_text)));
        return new ps_spec{std::move(impl)};
      },
      nullptr);
}

ps_spec* ps_spec_from_file(const char* path) {
  return guarded<ps_spec*>(
      [&]() -> ps_spec* {
        require(path, "path");
        auto impl = std::make_shared<SequenceSpec>(SequenceSpec::load_file(path));
        return new ps_spec{std::move(impl)};
      },
      nullptr);
}

void ps_spec_free(ps_spec* spec) { delete spec; }

char* ps_spec_to_json(const ps_spec* spec) {
  return guarded<char*>(
      [&]() -> char* {
        require(spec, "spec");
        return dup_cstr(spec->impl->to_json().dump());
      },
      nullptr);
}

int ps_spec_ensure(ps_spec* spec, uint64_t n) {
  guarded<int>(
      [&]() -> int {
        spec_of(spec)->ensure(static_cast<size_t>(n));
        return 0;
      },
      0);
  return g_status;
}

char* ps_spec_terms(ps_spec* spec, uint64_t upto) {
  return guarded<char*>(
      [&]() -> char* {
        auto s = spec_of(spec);
        s->ensure(static_cast<size_t>(upto));
        json d = json::array();
        json r = json::array();
        for (size_t k = 1; k <= upto; ++k) {
          d.push_back(s->d(k));
          r.push_back(s->r(k));
        }
        return dup_cstr(json{{"d", d}, {"r", r}}.dump());
      },
      nullptr);
}

uint64_t ps_threshold(ps_spec* spec, uint64_t l) {
  return guarded<uint64_t>(
      [&]() -> uint64_t { return static_cast<uint64_t>(threshold(*spec_of(spec), l)); }, 0);
}

/* ----------------------------------------------------- sequence recipes -- */

char* ps_seq_generate(const char* target_json, uint64_t length) {
  return guarded<char*>(
      [&]() -> char* {
        require(target_json, "target_json");
        GrowthTarget target = GrowthTarget::from_json(json::parse(target_json));
        SequenceSpec spec = generate_sequence(target, static_cast<size_t>(length));
        return dup_cstr(spec.to_json().dump());
      },
      nullptr);
}

char* ps_seq_verify(ps_spec* spec, uint64_t upto, const char* target_json) {
  return guarded<char*>(
      [&]() -> char* {
        auto s = spec_of(spec);
        std::optional<GrowthTarget> target;
        if (target_json != nullptr) target = GrowthTarget::from_json(json::parse(target_json));
        if (s->generated_mode()) s->ensure(static_cast<size_t>(upto));
        SeqReport report =
            verify_sequence(*s, static_cast<size_t>(upto), target ? &*target : nullptr);
        return dup_cstr(report.to_json().dump());
      },
      nullptr);
}

/* ------------------------------------------------------- group elements -- */

char* ps_eval(ps_spec* spec, const char* word, uint64_t coords) {
  return guarded<char*>(
      [&]() -> char* {
        auto s = spec_of(spec);
        require(word, "word");
        NeumannElement g(s, parse_word(word));
        json out;
        out["word"] = g.word().to_string();
        json coord_list = json::array();
        for (uint64_t n = 1; n <= coords; ++n) {
          Permutation image = g.coordinate(static_cast<size_t>(n));
          coord_list.push_back(
              {{"n", n}, {"degree", image.degree()}, {"image", image.to_cycle_string()}});
        }
        out["coords"] = coord_list;
        out["tau"] = lamplighter_json(g.tau());
        return dup_cstr(out.dump());
      },
      nullptr);
}

char* ps_wp(ps_spec* spec, const char* word) {
  return guarded<char*>(
      [&]() -> char* {
        auto s = spec_of(spec);
        require(word, "word");
        NeumannElement g(s, parse_word(word));
        json out;
        out["word"] = g.word().to_string();
        bool trivial = is_identity(g); // may raise horizon_insufficient
        out["trivial"] = trivial;
        if (!trivial) {
          size_t bound;
          try {
            bound = threshold(*s, g.word().length());
          } catch (const Error&) {
            bound = s->horizon();
          }
          bool found = false;
          for (size_t n = 1; n <= bound && !found; ++n) {
            Permutation image = g.coordinate(n);
            if (!image.is_identity()) {
              out["witness"] = {
                  {"kind", "coordinate"}, {"n", n}, {"image", image.to_cycle_string()}};
              found = true;
            }
          }
          if (!found) {
            if (!g.tau().is_identity())
              out["witness"] = {{"kind", "tau"}, {"image", g.tau().to_string()}};
            else
              fail(errc::internal, "nontrivial element without a witness");
          }
        }
        return dup_cstr(out.dump());
      },
      nullptr);
}

char* ps_tau(const char* word) {
  return guarded<char*>(
      [&]() -> char* {
        require(word, "word");
        return dup_cstr(lamplighter_json(evaluate_in_w(parse_word(word))).dump());
      },
      nullptr);
}

char* ps_ball(uint32_t radius, int include_words) {
  return guarded<char*>(
      [&]() -> char* {
        json out;
        out["radius"] = radius;
        out["count"] = to_string(ball_count(radius));
        if (include_words != 0) {
          if (radius > 12)
            fail(errc::unsupported, "word listing is supported up to radius 12; "
                                    "larger radii report the count only");
          json words = json::array();
          for (const FreeWord& w : ball(radius)) words.push_back(w.to_string());
          out["words"] = words;
        }
        return dup_cstr(out.dump());
      },
      nullptr);
}

/* ------------------------------------------------------------ stability -- */

char* ps_sas(const char* tuple_text, const char* relations_text, const char* delta,
             const char* confidence, uint64_t seed) {
  return guarded<char*>(
      [&]() -> char* {
        require(tuple_text, "tuple_text");
        require(relations_text, "relations_text");
        require(delta, "delta");
        require(confidence, "confidence");
        PermTuple rho = parse_perm_tuple(tuple_text);
        RelationSet E = RelationSet::parse(relations_text);
        TestVerdict v =
            sample_and_substitute(rho, E, parse_rational(delta), parse_rational(confidence), seed);
        json out;
        out["pass"] = v.pass;
        if (v.witness) {
          out["witness"] = {{"relation", v.witness->first + 1}, {"point", v.witness->second + 1}};
        } else {
          out["witness"] = nullptr;
        }
        out["samples_per_relation"] = v.samples_per_relation;
        out["seed"] = v.seed;
        out["total_queries"] = v.total_queries;
        out["weighted_cost"] = v.weighted_cost;
        return dup_cstr(out.dump());
      },
      nullptr);
}

char* ps_defect(const char* tuple_text, const char* relations_text, uint32_t cap_degree) {
  return guarded<char*>(
      [&]() -> char* {
        require(tuple_text, "tuple_text");
        require(relations_text, "relations_text");
        PermTuple rho = parse_perm_tuple(tuple_text);
        RelationSet R = RelationSet::parse(relations_text);
        GlobalDefect g = global_defect(rho, R, cap_degree == 0 ? 6 : cap_degree);
        json out;
        out["local"] = to_string(local_defect(rho, R));
        out["global"] = to_string(g.defect);
        out["minimizer"] = {{"x", g.minimizer.x.to_cycle_string()},
                            {"y", g.minimizer.y.to_cycle_string()}};
        return dup_cstr(out.dump());
      },
      nullptr);
}

char* ps_defect_local(const char* tuple_text, const char* relations_text) {
  return guarded<char*>(
      [&]() -> char* {
        require(tuple_text, "tuple_text");
        require(relations_text, "relations_text");
        return dup_cstr(to_string(
            local_defect(parse_perm_tuple(tuple_text), RelationSet::parse(relations_text))));
      },
      nullptr);
}

char* ps_pad(const char* tuple_text, const char* word, const char* delta) {
  return guarded<char*>(
      [&]() -> char* {
        require(tuple_text, "tuple_text");
        require(word, "word");
        require(delta, "delta");
        PermTuple psi = parse_perm_tuple(tuple_text);
        PadResult r = pad_block_solution(psi, parse_word(word), parse_rational(delta));
        json out;
        out["q"] = r.q;
        out["r"] = r.r;
        out["violation"] = to_string(r.violation);
        out["degree"] = r.padded.x.degree();
        out["x"] = r.padded.x.to_cycle_string();
        out["y"] = r.padded.y.to_cycle_string();
        return dup_cstr(out.dump());
      },
      nullptr);
}

char* ps_stability_cost(const char* relations_text, const char* delta) {
  return guarded<char*>(
      [&]() -> char* {
        require(relations_text, "relations_text");
        require(delta, "delta");
        return dup_cstr(
            to_string(stability_cost(RelationSet::parse(relations_text), parse_rational(delta))));
      },
      nullptr);
}

/* --------------------------------------------- Folner sets and quotients -- */

char* ps_folner(ps_spec* spec, uint64_t n, int64_t m, char generator, uint64_t cap) {
  return guarded<char*>(
      [&]() -> char* {
        auto s = spec_of(spec);
        Rational ratio =
            folner_ratio(*s, static_cast<size_t>(n), m, generator, effective_cap(cap));
        return dup_cstr(to_string(ratio));
      },
      nullptr);
}

char* ps_quotient(ps_spec* spec, uint64_t n, int64_t m, uint64_t cap) {
  return guarded<char*>(
      [&]() -> char* {
        auto s = spec_of(spec);
        BijectionReport r =
            finite_quotient_bijection(*s, static_cast<size_t>(n), m, effective_cap(cap));
        json out;
        out["bijective"] = r.bijective;
        out["folner_size"] = r.folner_size;
        out["image_size"] = r.image_size;
        out["quotient_order"] = to_string(r.pn_size);
        return dup_cstr(out.dump());
      },
      nullptr);
}

char* ps_density(ps_spec* spec, const char* lamp_word, uint64_t n, int64_t m, uint64_t cap) {
  return guarded<char*>(
      [&]() -> char* {
        auto s = spec_of(spec);
        require(lamp_word, "lamp_word");
        DensityResult r = conjugation_density(*s, parse_lamp_word(lamp_word),
                                              static_cast<size_t>(n), m, effective_cap(cap));
        json out;
        out["density"] = to_string(r.density);
        out["hits"] = r.hits;
        out["folner_size"] = r.folner_size;
        return dup_cstr(out.dump());
      },
      nullptr);
}

char* ps_cosofic(ps_spec* spec, const char* h_gens_json, const char* tests_json, uint64_t n,
                 int64_t m, uint64_t cap) {
  return guarded<char*>(
      [&]() -> char* {
        auto s = spec_of(spec);
        std::vector<LampWord> h_gens = parse_lamp_word_array(h_gens_json, "h_gens_json");
        require(tests_json, "tests_json");
        json tests = json::parse(tests_json);
        if (!tests.is_array()) fail(errc::parse_error, "tests_json must be a JSON array");

        // Lamp-word tests run through the factorized counter in one batch;
        // {"word": ...} tests take the shifted path.
        std::vector<LampWord> lamp_tests;
        std::vector<size_t> lamp_slots;
        std::vector<FreeWord> word_tests;
        std::vector<size_t> word_slots;
        for (size_t i = 0; i < tests.size(); ++i) {
          const json& item = tests[i];
          if (item.is_string()) {
            lamp_tests.push_back(parse_lamp_word(item.get<std::string>()));
            lamp_slots.push_back(i);
          } else if (item.is_object() && item.contains("word")) {
            word_tests.push_back(parse_word(item["word"].get<std::string>()));
            word_slots.push_back(i);
          } else {
            fail(errc::parse_error,
                 "test entries must be lamp-word strings or {\"word\": ...} objects");
          }
        }

        uint64_t budget = effective_cap(cap);
        CosoficResult r = cosofic_approximant(*s, h_gens, lamp_tests, static_cast<size_t>(n), m,
                                              budget);
        std::vector<std::string> densities(tests.size());
        for (size_t k = 0; k < lamp_slots.size(); ++k)
          densities[lamp_slots[k]] = to_string(r.densities[k]);
        for (size_t k = 0; k < word_slots.size(); ++k) {
          Rational p = cosofic_density_shifted(*s, h_gens, word_tests[k], static_cast<size_t>(n),
                                               m, budget);
          densities[word_slots[k]] = to_string(p);
        }

        json out;
        out["folner_size"] = to_string(r.folner_size);
        out["k_image_size"] = r.k_image.size();
        out["densities"] = densities;
        return dup_cstr(out.dump());
      },
      nullptr);
}

/* ------------------------------------------------------------------ LEF -- */

char* ps_lef(ps_spec* spec, uint32_t l, uint64_t cap) {
  return guarded<char*>(
      [&]() -> char* {
        auto s = spec_of(spec);
        LefCertificate cert = lef_certificate(*s, l, effective_cap(cap));
        return dup_cstr(to_json(cert).dump());
      },
      nullptr);
}

/* ---------------------------------------------------------- verification -- */

char* ps_verify_paper(ps_spec* spec, uint64_t cap, uint64_t seed) {
  return guarded<char*>(
      [&]() -> char* {
        auto s = spec_of(spec);
        SuiteOptions opts;
        if (cap != 0) opts.cap = cap;
        if (seed != 0) opts.seed = seed;
        std::vector<SuiteCheck> checks = run_suite(s, opts);
        json list = json::array();
        for (const SuiteCheck& c : checks)
          list.push_back({{"name", c.name}, {"status", c.status}, {"detail", c.detail}});
        json out;
        out["pass"] = suite_passed(checks);
        out["checks"] = list;
        return dup_cstr(out.dump());
      },
      nullptr);
}

} // extern "C"
