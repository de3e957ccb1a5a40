// Command-line front end. Talks to the library only through relbetti.h.
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "relbetti.h"

namespace {

struct Config {
  std::vector<std::string> files;
  std::string theorem;
  unsigned degree_cap = 3;
  bool both = false;
  std::string pipeline = "hochschild";
  bool extended_scope = false;
  std::string format = "structured";
  std::string out;
};

void render_plain(const nlohmann::ordered_json& j, const std::string& indent, std::ostream& os) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    std::string key = j.is_object() ? it.key() : "-";
    const auto& v = it.value();
    if (v.is_object() || (v.is_array() && !v.empty() && (v.front().is_object() || v.front().is_array()))) {
      os << indent << key << ":\n";
      render_plain(v, indent + "  ", os);
    } else if (v.is_array()) {
      os << indent << key << ": ";
      for (size_t k = 0; k < v.size(); ++k) {
        if (k) os << ", ";
        os << (v[k].is_string() ? v[k].get<std::string>() : v[k].dump());
      }
      os << "\n";
    } else {
      os << indent << key << ": " << (v.is_string() ? v.get<std::string>() : v.dump()) << "\n";
    }
  }
}

// Exit code: 0 success, 1 discrepancy or failed internal check, 2 input error.
int exit_code(rb_status s) {
  switch (s) {
    case RB_OK: return 0;
    case RB_DISCREPANCY:
    case RB_INTERNAL_ERROR: return 1;
    default: return 2;
  }
}

int run(const std::string& command, const Config& cfg) {
  rb_options opt;
  rb_options_init(&opt);
  opt.degree_cap = cfg.degree_cap;
  std::string pipeline = cfg.both ? "both" : cfg.pipeline;
  opt.pipeline = pipeline.c_str();
  opt.extended_scope = cfg.extended_scope ? 1 : 0;

  int code = 0;
  std::vector<std::string> reports;
  for (const auto& path : cfg.files) {
    rb_document* doc = nullptr;
    rb_report* rep = nullptr;
    rb_status s = rb_document_load(path.c_str(), &doc);
    if (s != RB_OK) {
      std::cerr << "relbetti: " << rb_last_error() << "\n";
      rb_error_report(command.c_str(), s, &rep);
    } else if (command == "validate") {
      s = rb_validate(doc, &rep);
    } else if (command == "betti") {
      s = rb_betti(doc, &opt, &rep);
    } else if (command == "homology") {
      s = rb_homology(doc, &opt, &rep);
    } else if (command == "fiber-square") {
      s = rb_fiber_square(doc, &opt, &rep);
    } else {
      s = rb_verify(doc, cfg.theorem.c_str(), &opt, &rep);
    }
    if (rep) reports.emplace_back(rb_report_json(rep));
    code = std::max(code, exit_code(s));
    rb_report_free(rep);
    rb_document_free(doc);
  }

  std::ostringstream os;
  if (cfg.format == "plain") {
    for (const auto& r : reports) {
      render_plain(nlohmann::ordered_json::parse(r), "", os);
      os << "\n";
    }
  } else if (reports.size() == 1) {
    os << reports[0];
  } else {
    os << "[\n";
    for (size_t k = 0; k < reports.size(); ++k) {
      std::string r = reports[k];
      while (!r.empty() && r.back() == '\n') r.pop_back();
      os << r << (k + 1 < reports.size() ? ",\n" : "\n");
    }
    os << "]\n";
  }
  if (cfg.out.empty()) {
    std::cout << os.str();
  } else {
    std::ofstream f(cfg.out, std::ios::binary);
    if (!f) {
      std::cerr << "relbetti: cannot write " << cfg.out << "\n";
      return 2;
    }
    f << os.str();
  }
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact L2-Betti numbers of finite tracial extensions and groupoids"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(rb_version()));
  Config cfg;

  auto common = [&](CLI::App* sub, bool degrees) {
    sub->add_option("files", cfg.files, "input documents")->required()->check(CLI::ExistingFile);
    sub->add_option("--format", cfg.format, "report format")->check(CLI::IsMember({"structured", "plain"}));
    sub->add_option("--out", cfg.out, "write the report to a file");
    if (degrees) sub->add_option("--N", cfg.degree_cap, "degree cap N (degrees 0..N-1)")->check(CLI::Range(1u, 16u));
  };

  auto* validate = app.add_subcommand("validate", "check the axioms of groupoids, algebras and cocycles");
  common(validate, false);

  auto* betti = app.add_subcommand("betti", "L2-Betti numbers");
  common(betti, true);
  betti->add_flag("--both", cfg.both, "run both pipelines and compare");
  betti->add_option("--pipeline", cfg.pipeline, "hochschild or sauer")
      ->check(CLI::IsMember({"hochschild", "sauer"}));

  auto* homology = app.add_subcommand("homology", "chain dimensions, ranks and homology");
  common(homology, true);
  homology->add_flag("--both", cfg.both, "both complexes");
  homology->add_option("--pipeline", cfg.pipeline, "hochschild or sauer")
      ->check(CLI::IsMember({"hochschild", "sauer"}));

  auto* square = app.add_subcommand("fiber-square", "fiber square, trace and evaluation checks");
  common(square, false);

  auto* verify = app.add_subcommand("verify", "check a theorem on an instance");
  verify->add_option("theorem", cfg.theorem, "theorem name")
      ->required()
      ->check(CLI::IsMember({"compression", "directed_sum", "central_quadratic", "groupoid_equality", "residual"}));
  common(verify, true);
  verify->add_flag("--extended-scope", cfg.extended_scope, "allow projections outside the proven scope");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  for (auto* sub : {validate, betti, homology, square, verify}) {
    if (sub->parsed()) return run(sub->get_name(), cfg);
  }
  return 2;
}
