// permstab command-line tool. Talks to the library exclusively through the
// C interface in permstab.h; JSON returned by the library is reshaped here
// for human output (nlohmann/json and CLI11 are header-only).

#include <permstab.h>

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

using nlohmann::json;

namespace {

constexpr uint64_t kDefaultSeed = 20260814;

[[noreturn]] void die(const std::string& message) {
  std::cerr << "error: " << message << "\n";
  std::exit(1);
}

[[noreturn]] void die_api() { die(ps_last_error()); }

// Owns a string returned by the library.
struct ApiString {
  explicit ApiString(char* p) : ptr(p) {
    if (ptr == nullptr) die_api();
  }
  ~ApiString() { ps_string_free(ptr); }
  ApiString(const ApiString&) = delete;
  ApiString& operator=(const ApiString&) = delete;
  std::string str() const { return std::string(ptr); }
  json parse() const { return json::parse(ptr); }
  char* ptr;
};

struct SpecHandle {
  explicit SpecHandle(const std::string& path) : ptr(ps_spec_from_file(path.c_str())) {
    if (ptr == nullptr) die_api();
  }
  ~SpecHandle() { ps_spec_free(ptr); }
  SpecHandle(const SpecHandle&) = delete;
  SpecHandle& operator=(const SpecHandle&) = delete;
  ps_spec* ptr;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) die("cannot read '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) die("cannot write '" + path + "'");
  out << contents;
  if (!out.flush()) die("cannot write '" + path + "'");
}

// --F accepts a built-in name or a path to a JSON file holding a step table
// ([[m, value], ...], optionally wrapped as {"table": ...}).
json growth_target_json(const std::string& f, uint64_t c) {
  json target;
  std::ifstream probe(f);
  if (probe) {
    json doc = json::parse(read_file(f));
    if (doc.is_array())
      target["F"] = json{{"table", doc}};
    else if (doc.is_object() && doc.contains("table"))
      target["F"] = doc;
    else
      die("'" + f + "' must hold a step table [[m, value], ...]");
  } else {
    target["F"] = f;
  }
  target["C"] = c;
  return target;
}

std::string yesno(bool b) { return b ? "yes" : "no"; }

// ------------------------------------------------------------ subcommands --

int run_gen_seq(const std::string& f, uint64_t c, uint64_t n, const std::string& out,
                bool as_json) {
  json target = growth_target_json(f, c);
  ApiString spec_text(ps_seq_generate(target.dump().c_str(), n));
  if (!out.empty()) write_file(out, spec_text.str() + "\n");
  if (as_json) {
    std::cout << spec_text.str() << "\n";
    return 0;
  }
  ps_spec* spec = ps_spec_from_json(spec_text.ptr);
  if (spec == nullptr) die_api();
  ApiString terms_text(ps_spec_terms(spec, n));
  ps_spec_free(spec);
  json terms = terms_text.parse();
  std::printf("%4s  %12s  %12s\n", "n", "d(n)", "r(n)");
  for (uint64_t k = 0; k < n; ++k)
    std::printf("%4llu  %12llu  %12llu\n", static_cast<unsigned long long>(k + 1),
                terms["d"][k].get<unsigned long long>(), terms["r"][k].get<unsigned long long>());
  if (!out.empty()) std::cout << "wrote " << out << "\n";
  return 0;
}

int run_verify_seq(const std::string& path, uint64_t n, const std::string& f, uint64_t c,
                   bool c_given, bool as_json) {
  SpecHandle spec(path);

  // Growth-bound checks need a target: taken from --F/--C when given,
  // otherwise from the spec file itself when it is in generated mode.
  std::string target_text;
  if (!f.empty()) {
    target_text = growth_target_json(f, c).dump();
  } else {
    json doc = json::parse(read_file(path));
    if (doc.contains("generated")) {
      json target;
      target["F"] = doc["generated"].value("F", json("one"));
      target["C"] = c_given ? json(c) : doc["generated"].value("C", json(79));
      target_text = target.dump();
    }
  }

  ApiString report_text(
      ps_seq_verify(spec.ptr, n, target_text.empty() ? nullptr : target_text.c_str()));
  json report = report_text.parse();
  if (as_json) {
    std::cout << report.dump() << "\n";
  } else {
    for (const json& entry : report["entries"]) std::cout << entry.dump() << "\n";
    json summary = {{"standing_ok", report["standing_ok"]}, {"theorem_ok", report["theorem_ok"]}};
    std::cout << summary.dump() << "\n";
  }
  return report["theorem_ok"].get<bool>() ? 0 : 1;
}

int run_eval(const std::string& path, const std::string& word, uint64_t coords, bool as_json) {
  SpecHandle spec(path);
  ApiString result(ps_eval(spec.ptr, word.c_str(), coords));
  if (as_json) {
    std::cout << result.str() << "\n";
    return 0;
  }
  json doc = result.parse();
  std::cout << "word: " << doc["word"].get<std::string>() << "\n";
  for (const json& c : doc["coords"])
    std::printf("pi_%llu (degree %llu): %s\n", c["n"].get<unsigned long long>(),
                c["degree"].get<unsigned long long>(), c["image"].get<std::string>().c_str());
  std::cout << "tau: " << doc["tau"]["text"].get<std::string>() << "\n";
  return 0;
}

int run_wp(const std::string& path, const std::string& word, bool as_json) {
  SpecHandle spec(path);
  ApiString result(ps_wp(spec.ptr, word.c_str()));
  if (as_json) {
    std::cout << result.str() << "\n";
    return 0;
  }
  json doc = result.parse();
  if (doc["trivial"].get<bool>()) {
    std::cout << "trivial\n";
  } else {
    std::cout << "nontrivial\n";
    const json& w = doc["witness"];
    if (w["kind"] == "coordinate")
      std::printf("witness: coordinate %llu -> %s\n", w["n"].get<unsigned long long>(),
                  w["image"].get<std::string>().c_str());
    else
      std::cout << "witness: tau -> " << w["image"].get<std::string>() << "\n";
  }
  return 0;
}

int run_tau(const std::string& word, bool as_json) {
  ApiString result(ps_tau(word.c_str()));
  if (as_json) {
    std::cout << result.str() << "\n";
    return 0;
  }
  std::cout << result.parse()["text"].get<std::string>() << "\n";
  return 0;
}

int run_ball(uint32_t radius, bool words, bool as_json) {
  ApiString result(ps_ball(radius, words ? 1 : 0));
  if (as_json) {
    std::cout << result.str() << "\n";
    return 0;
  }
  json doc = result.parse();
  std::cout << "count: " << doc["count"].get<std::string>() << "\n";
  if (words)
    for (const json& w : doc["words"]) {
      std::string s = w.get<std::string>();
      std::cout << (s.empty() ? "e" : s) << "\n";
    }
  return 0;
}

int run_sas(const std::string& perms, const std::string& relations, const std::string& delta,
            const std::string& confidence, uint64_t seed, bool as_json) {
  std::string tuple_text = read_file(perms);
  std::string relations_text = read_file(relations);
  ApiString result(
      ps_sas(tuple_text.c_str(), relations_text.c_str(), delta.c_str(), confidence.c_str(), seed));
  json doc = result.parse();
  bool pass = doc["pass"].get<bool>();
  if (as_json) {
    std::cout << result.str() << "\n";
  } else if (pass) {
    std::cout << "pass\n";
    std::printf("samples_per_relation: %llu\ntotal_queries: %llu\nweighted_cost: %llu\n",
                doc["samples_per_relation"].get<unsigned long long>(),
                doc["total_queries"].get<unsigned long long>(),
                doc["weighted_cost"].get<unsigned long long>());
  } else {
    std::printf("fail: relation %llu moves point %llu\n",
                doc["witness"]["relation"].get<unsigned long long>(),
                doc["witness"]["point"].get<unsigned long long>());
  }
  return pass ? 0 : 1;
}

int run_defect(const std::string& mode, const std::string& perms, const std::string& relations,
               uint32_t cap_degree, bool as_json) {
  std::string tuple_text = read_file(perms);
  std::string relations_text = read_file(relations);
  if (mode == "local") {
    ApiString result(ps_defect_local(tuple_text.c_str(), relations_text.c_str()));
    if (as_json)
      std::cout << json{{"local", result.str()}}.dump() << "\n";
    else
      std::cout << result.str() << "\n";
    return 0;
  }
  ApiString result(ps_defect(tuple_text.c_str(), relations_text.c_str(), cap_degree));
  if (as_json) {
    std::cout << result.str() << "\n";
    return 0;
  }
  json doc = result.parse();
  std::cout << "local: " << doc["local"].get<std::string>() << "\n";
  std::cout << "global: " << doc["global"].get<std::string>() << "\n";
  std::cout << "minimizer x: " << doc["minimizer"]["x"].get<std::string>() << "\n";
  std::cout << "minimizer y: " << doc["minimizer"]["y"].get<std::string>() << "\n";
  return 0;
}

int run_pad(const std::string& perms, const std::string& word, const std::string& delta,
            bool as_json) {
  std::string tuple_text = read_file(perms);
  ApiString result(ps_pad(tuple_text.c_str(), word.c_str(), delta.c_str()));
  if (as_json) {
    std::cout << result.str() << "\n";
    return 0;
  }
  json doc = result.parse();
  std::printf("q: %llu\nr: %llu\ndegree: %llu\nviolation: %s\nx: %s\ny: %s\n",
              doc["q"].get<unsigned long long>(), doc["r"].get<unsigned long long>(),
              doc["degree"].get<unsigned long long>(),
              doc["violation"].get<std::string>().c_str(), doc["x"].get<std::string>().c_str(),
              doc["y"].get<std::string>().c_str());
  return 0;
}

int run_folner(const std::string& path, uint64_t n, int64_t m, const std::string& generator,
               uint64_t cap, bool as_json) {
  if (generator.size() != 1) die("--generator expects one of a, A, b, B");
  SpecHandle spec(path);
  ApiString result(ps_folner(spec.ptr, n, m, generator[0], cap));
  if (as_json)
    std::cout << json{{"ratio", result.str()}}.dump() << "\n";
  else
    std::cout << result.str() << "\n";
  return 0;
}

int run_quotient(const std::string& path, uint64_t n, int64_t m, uint64_t cap, bool as_json) {
  SpecHandle spec(path);
  ApiString result(ps_quotient(spec.ptr, n, m, cap));
  if (as_json) {
    std::cout << result.str() << "\n";
    return 0;
  }
  json doc = result.parse();
  std::cout << "bijective: " << yesno(doc["bijective"].get<bool>()) << "\n";
  std::printf("folner_size: %llu\nimage_size: %llu\n",
              doc["folner_size"].get<unsigned long long>(),
              doc["image_size"].get<unsigned long long>());
  std::cout << "quotient_order: " << doc["quotient_order"].get<std::string>() << "\n";
  return 0;
}

int run_density(const std::string& path, const std::string& element, uint64_t n, int64_t m,
                uint64_t cap, bool as_json) {
  SpecHandle spec(path);
  ApiString result(ps_density(spec.ptr, element.c_str(), n, m, cap));
  if (as_json) {
    std::cout << result.str() << "\n";
    return 0;
  }
  json doc = result.parse();
  std::cout << "density: " << doc["density"].get<std::string>() << "\n";
  std::printf("hits: %llu\nfolner_size: %llu\n", doc["hits"].get<unsigned long long>(),
              doc["folner_size"].get<unsigned long long>());
  return 0;
}

int run_cosofic(const std::string& path, const std::vector<std::string>& h_gens,
                const std::vector<std::string>& tests, const std::vector<std::string>& test_words,
                uint64_t n, int64_t m, uint64_t cap, bool as_json) {
  SpecHandle spec(path);
  json h = json::array();
  for (const std::string& g : h_gens) h.push_back(g);
  json t = json::array();
  std::vector<std::string> labels;
  for (const std::string& g : tests) {
    t.push_back(g);
    labels.push_back(g);
  }
  for (const std::string& w : test_words) {
    t.push_back(json{{"word", w}});
    labels.push_back(w);
  }
  ApiString result(ps_cosofic(spec.ptr, h.dump().c_str(), t.dump().c_str(), n, m, cap));
  json doc = result.parse();
  if (as_json) {
    doc["tests"] = labels;
    std::cout << doc.dump() << "\n";
    return 0;
  }
  std::cout << "folner_size: " << doc["folner_size"].get<std::string>() << "\n";
  std::printf("k_image_size: %llu\n", doc["k_image_size"].get<unsigned long long>());
  for (size_t i = 0; i < labels.size(); ++i)
    std::cout << "p_n(" << labels[i] << ") = " << doc["densities"][i].get<std::string>() << "\n";
  return 0;
}

int run_lef(const std::string& path, uint32_t l, uint64_t cap, const std::string& out,
            bool as_json) {
  SpecHandle spec(path);
  ApiString result(ps_lef(spec.ptr, l, cap));
  if (!out.empty()) write_file(out, result.str() + "\n");
  if (as_json) {
    std::cout << result.str() << "\n";
    return 0;
  }
  json doc = result.parse();
  std::printf("l: %u\nball_size: %llu\n", doc["l"].get<unsigned>(),
              doc["ball_size"].get<unsigned long long>());
  std::cout << "projection_injective: " << yesno(doc["projection_injective"].get<bool>()) << "\n";
  std::cout << "partial_homomorphism: " << yesno(doc["partial_homomorphism"].get<bool>()) << "\n";
  std::cout << "substitution_well_defined: " << yesno(doc["substitution_well_defined"].get<bool>())
            << "\n";
  std::cout << "substitution_injective: " << yesno(doc["substitution_injective"].get<bool>())
            << "\n";
  std::cout << "substituted_coords:";
  for (const json& k : doc["substituted_coords"]) std::cout << " " << k.get<uint64_t>();
  std::cout << "\n";
  std::cout << "constructed_order: " << doc["constructed_order"].get<std::string>() << "\n";
  std::cout << "reference_bound: " << doc["reference_bound"].get<std::string>() << "\n";
  if (!out.empty()) std::cout << "wrote " << out << "\n";
  return 0;
}

int run_verify_paper(const std::string& path, uint64_t cap, uint64_t seed, bool as_json) {
  SpecHandle spec(path);
  ApiString result(ps_verify_paper(spec.ptr, cap, seed));
  json doc = result.parse();
  if (as_json) {
    std::cout << result.str() << "\n";
  } else {
    size_t passed = 0, failed = 0, skipped = 0;
    for (const json& c : doc["checks"]) {
      std::string status = c["status"].get<std::string>();
      std::string detail = c["detail"].get<std::string>();
      if (status == "PASS") ++passed;
      if (status == "FAIL") ++failed;
      if (status == "SKIP") ++skipped;
      std::printf("%-4s  %-38s  %s\n", status.c_str(), c["name"].get<std::string>().c_str(),
                  detail.c_str());
    }
    std::printf("%zu passed, %zu failed, %zu skipped\n", passed, failed, skipped);
  }
  return doc["pass"].get<bool>() ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact computations around permutation stability"};
  app.require_subcommand(1);
  bool as_json = false;
  app.add_flag("--json", as_json, "machine-readable JSON output");

  int exit_code = 0;

  // gen-seq
  {
    auto* sub = app.add_subcommand("gen-seq", "run the sequence recipe");
    sub->fallthrough();
    auto f = std::make_shared<std::string>("one");
    auto c = std::make_shared<uint64_t>(79);
    auto n = std::make_shared<uint64_t>(0);
    auto out = std::make_shared<std::string>();
    sub->add_option("--F", *f, "growth target: built-in name or step-table JSON file");
    sub->add_option("--C", *c, "recipe constant")->capture_default_str();
    sub->add_option("--N", *n, "number of terms")->required();
    sub->add_option("--out", *out, "write the spec JSON here");
    sub->callback([=, &exit_code, &as_json] {
      exit_code = run_gen_seq(*f, *c, *n, *out, as_json);
    });
  }

  // verify-seq
  {
    auto* sub = app.add_subcommand("verify-seq", "re-derive the sequence conditions");
    sub->fallthrough();
    auto path = std::make_shared<std::string>();
    auto n = std::make_shared<uint64_t>(0);
    auto f = std::make_shared<std::string>();
    auto c = std::make_shared<uint64_t>(79);
    sub->add_option("spec", *path, "spec JSON file")->required();
    sub->add_option("--N", *n, "verify indices 1..N")->required();
    sub->add_option("--F", *f, "growth target for the bound checks");
    auto* copt = sub->add_option("--C", *c, "recipe constant for the bound checks");
    sub->callback([=, &exit_code, &as_json] {
      exit_code = run_verify_seq(*path, *n, *f, *c, copt->count() > 0, as_json);
    });
  }

  // eval
  {
    auto* sub = app.add_subcommand("eval", "coordinate and lamplighter images of a word");
    sub->fallthrough();
    auto path = std::make_shared<std::string>();
    auto word = std::make_shared<std::string>();
    auto coords = std::make_shared<uint64_t>(3);
    sub->add_option("--spec", *path, "spec JSON file")->required();
    sub->add_option("--word", *word, "word in a, A, b, B")->required();
    sub->add_option("--coords", *coords, "evaluate coordinates 1..N")->capture_default_str();
    sub->callback(
        [=, &exit_code, &as_json] { exit_code = run_eval(*path, *word, *coords, as_json); });
  }

  // wp
  {
    auto* sub = app.add_subcommand("wp", "word problem");
    sub->fallthrough();
    auto path = std::make_shared<std::string>();
    auto word = std::make_shared<std::string>();
    sub->add_option("--spec", *path, "spec JSON file")->required();
    sub->add_option("--word", *word, "word in a, A, b, B")->required();
    sub->callback([=, &exit_code, &as_json] { exit_code = run_wp(*path, *word, as_json); });
  }

  // tau
  {
    auto* sub = app.add_subcommand("tau", "lamplighter image of a word");
    sub->fallthrough();
    auto word = std::make_shared<std::string>();
    sub->add_option("--word", *word, "word in a, A, b, B")->required();
    sub->callback([=, &exit_code, &as_json] { exit_code = run_tau(*word, as_json); });
  }

  // ball
  {
    auto* sub = app.add_subcommand("ball", "ball of the rank-2 free group");
    sub->fallthrough();
    auto radius = std::make_shared<uint32_t>(0);
    auto words = std::make_shared<bool>(false);
    sub->add_option("--radius", *radius, "ball radius")->required();
    sub->add_flag("--words", *words, "list the words");
    sub->callback([=, &exit_code, &as_json] { exit_code = run_ball(*radius, *words, as_json); });
  }

  // sas
  {
    auto* sub = app.add_subcommand("sas", "randomized almost-solution test");
    sub->fallthrough();
    auto perms = std::make_shared<std::string>();
    auto relations = std::make_shared<std::string>();
    auto delta = std::make_shared<std::string>();
    auto confidence = std::make_shared<std::string>("9/10");
    auto seed = std::make_shared<uint64_t>(kDefaultSeed);
    sub->add_option("--perms", *perms, "file with two permutation lines, x then y")->required();
    sub->add_option("--relations", *relations, "file with one word per line")->required();
    sub->add_option("--delta", *delta, "violation threshold (exact rational)")->required();
    sub->add_option("--confidence", *confidence, "detection confidence")->capture_default_str();
    sub->add_option("--seed", *seed, "RNG seed")->capture_default_str();
    sub->callback([=, &exit_code, &as_json] {
      exit_code = run_sas(*perms, *relations, *delta, *confidence, *seed, as_json);
    });
  }

  // defect
  {
    auto* sub = app.add_subcommand("defect", "local / global defect of a tuple");
    sub->fallthrough();
    auto mode = std::make_shared<std::string>("global");
    auto perms = std::make_shared<std::string>();
    auto relations = std::make_shared<std::string>();
    auto cap_degree = std::make_shared<uint32_t>(0);
    sub->add_option("--mode", *mode, "local or global")
        ->capture_default_str()
        ->check(CLI::IsMember({"local", "global"}));
    sub->add_option("--perms", *perms, "file with two permutation lines, x then y")->required();
    sub->add_option("--relations", *relations, "file with one word per line")->required();
    sub->add_option("--cap-degree", *cap_degree, "global-enumeration degree cap (0 = 6)")->capture_default_str();
    sub->callback([=, &exit_code, &as_json] {
      exit_code = run_defect(*mode, *perms, *relations, *cap_degree, as_json);
    });
  }

  // pad
  {
    auto* sub = app.add_subcommand("pad", "pad a block solution to a near-solution");
    sub->fallthrough();
    auto perms = std::make_shared<std::string>();
    auto word = std::make_shared<std::string>();
    auto delta = std::make_shared<std::string>();
    sub->add_option("--perms", *perms, "file with two permutation lines, x then y")->required();
    sub->add_option("--word", *word, "the violated word w1")->required();
    sub->add_option("--delta", *delta, "target violation bound (exact rational)")->required();
    sub->callback(
        [=, &exit_code, &as_json] { exit_code = run_pad(*perms, *word, *delta, as_json); });
  }

  // folner
  {
    auto* sub = app.add_subcommand("folner", "boundary ratio of a Folner set");
    sub->fallthrough();
    auto path = std::make_shared<std::string>();
    auto n = std::make_shared<uint64_t>(0);
    auto m = std::make_shared<int64_t>(0);
    auto generator = std::make_shared<std::string>();
    auto cap = std::make_shared<uint64_t>(0);
    sub->add_option("--spec", *path, "spec JSON file")->required();
    sub->add_option("--n", *n, "Folner index")->required();
    sub->add_option("--m", *m, "lamp window radius")->required();
    sub->add_option("--generator", *generator, "one of a, A, b, B")->required();
    sub->add_option("--cap", *cap, "enumeration cap (0 = default)")->capture_default_str();
    sub->callback([=, &exit_code, &as_json] {
      exit_code = run_folner(*path, *n, *m, *generator, *cap, as_json);
    });
  }

  // quotient
  {
    auto* sub = app.add_subcommand("quotient", "finite quotient map on a Folner set");
    sub->fallthrough();
    auto path = std::make_shared<std::string>();
    auto n = std::make_shared<uint64_t>(0);
    auto m = std::make_shared<int64_t>(0);
    auto cap = std::make_shared<uint64_t>(0);
    sub->add_option("--spec", *path, "spec JSON file")->required();
    sub->add_option("--n", *n, "Folner index")->required();
    sub->add_option("--m", *m, "lamp window radius")->required();
    sub->add_option("--cap", *cap, "enumeration cap (0 = default)")->capture_default_str();
    sub->callback(
        [=, &exit_code, &as_json] { exit_code = run_quotient(*path, *n, *m, *cap, as_json); });
  }

  // density
  {
    auto* sub = app.add_subcommand("density", "conjugation density of a lamp word");
    sub->fallthrough();
    auto path = std::make_shared<std::string>();
    auto element = std::make_shared<std::string>();
    auto n = std::make_shared<uint64_t>(0);
    auto m = std::make_shared<int64_t>(0);
    auto cap = std::make_shared<uint64_t>(0);
    sub->add_option("--spec", *path, "spec JSON file")->required();
    sub->add_option("--element", *element, "lamp word, e.g. \"b_0 * b_1^2\"")->required();
    sub->add_option("--n", *n, "Folner index")->required();
    sub->add_option("--m", *m, "lamp window radius")->required();
    sub->add_option("--cap", *cap, "enumeration cap (0 = default)")->capture_default_str();
    sub->callback([=, &exit_code, &as_json] {
      exit_code = run_density(*path, *element, *n, *m, *cap, as_json);
    });
  }

  // cosofic
  {
    auto* sub = app.add_subcommand("cosofic", "cosofic approximant densities");
    sub->fallthrough();
    auto path = std::make_shared<std::string>();
    auto h_gens = std::make_shared<std::vector<std::string>>();
    auto tests = std::make_shared<std::vector<std::string>>();
    auto test_words = std::make_shared<std::vector<std::string>>();
    auto n = std::make_shared<uint64_t>(0);
    auto m = std::make_shared<int64_t>(0);
    auto cap = std::make_shared<uint64_t>(0);
    sub->add_option("--spec", *path, "spec JSON file")->required();
    sub->add_option("--H", *h_gens, "subgroup generator (lamp word); repeatable");
    sub->add_option("--test", *tests, "test element (lamp word); repeatable");
    sub->add_option("--test-word", *test_words, "test element (free word with nonzero shift)");
    sub->add_option("--n", *n, "Folner index")->required();
    sub->add_option("--m", *m, "lamp window radius")->required();
    sub->add_option("--cap", *cap, "enumeration cap (0 = default)")->capture_default_str();
    sub->callback([=, &exit_code, &as_json] {
      exit_code = run_cosofic(*path, *h_gens, *tests, *test_words, *n, *m, *cap, as_json);
    });
  }

  // lef
  {
    auto* sub = app.add_subcommand("lef", "local-embedding certificate");
    sub->fallthrough();
    auto path = std::make_shared<std::string>();
    auto l = std::make_shared<uint32_t>(1);
    auto cap = std::make_shared<uint64_t>(0);
    auto out = std::make_shared<std::string>();
    sub->add_option("--spec", *path, "spec JSON file")->required();
    sub->add_option("--l", *l, "ball radius")->required();
    sub->add_option("--cap", *cap, "enumeration cap (0 = default)")->capture_default_str();
    sub->add_option("--out", *out, "write the certificate JSON here");
    sub->callback(
        [=, &exit_code, &as_json] { exit_code = run_lef(*path, *l, *cap, *out, as_json); });
  }

  // verify-paper
  {
    auto* sub = app.add_subcommand("verify-paper", "run the full invariant suite");
    sub->fallthrough();
    auto path = std::make_shared<std::string>();
    auto cap = std::make_shared<uint64_t>(0);
    auto seed = std::make_shared<uint64_t>(kDefaultSeed);
    sub->add_option("--spec", *path, "spec JSON file")->required();
    sub->add_option("--cap", *cap, "enumeration cap (0 = default)")->capture_default_str();
    sub->add_option("--seed", *seed, "RNG seed")->capture_default_str();
    sub->callback([=, &exit_code, &as_json] {
      exit_code = run_verify_paper(*path, *cap, *seed, as_json);
    });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }
  return exit_code;
}
