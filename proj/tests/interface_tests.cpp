// C interface and command-line behaviour. Links only the shared library.
#include <array>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "doctest.h"
#include "json.hpp"
#include "relbetti.h"

namespace {

const std::string data_dir = RELBETTI_DATA_DIR;
const std::string cli = RELBETTI_CLI;

std::string data(const std::string& name) { return data_dir + "/" + name; }

struct Run {
  int exit = -1;
  std::string out;
};

Run run(const std::string& args) {
  Run r;
  FILE* p = popen((cli + " " + args + " 2>/dev/null").c_str(), "r");
  REQUIRE(p);
  std::array<char, 4096> buf;
  size_t got;
  while ((got = fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), got);
  int status = pclose(p);
  r.exit = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// Owns a document and a report.
struct Handles {
  rb_document* doc = nullptr;
  rb_report* rep = nullptr;
  ~Handles() {
    rb_report_free(rep);
    rb_document_free(doc);
  }
};

}  // namespace

TEST_SUITE("c_api") {
  TEST_CASE("betti of a group algebra") {
    Handles h;
    REQUIRE(rb_document_load(data("group_algebra_c3.json").c_str(), &h.doc) == RB_OK);
    CHECK(std::string(rb_document_kind(h.doc)) == "extension");
    rb_options opt;
    rb_options_init(&opt);
    opt.degree_cap = 2;
    REQUIRE(rb_betti(h.doc, &opt, &h.rep) == RB_OK);
    auto j = nlohmann::json::parse(rb_report_json(h.rep));
    CHECK(rb_report_status(h.rep) == RB_OK);
    CHECK(j.dump().find("\"1/3\"") != std::string::npos);
    CHECK(j["status"] == "ok");
  }

  TEST_CASE("parse errors carry the location") {
    rb_document* doc = nullptr;
    CHECK(rb_document_parse("{\"kind\": \"groupoid\", \"construction\": \"pair_relation\", \"base\": {\"atoms\": -1}}",
                            "inline", &doc) == RB_INPUT_ERROR);
    CHECK(doc == nullptr);
    std::string msg = rb_last_error();
    CHECK(msg.rfind("inline: /base", 0) == 0);

    CHECK(rb_document_parse("{not json", "broken", &doc) == RB_INPUT_ERROR);
    CHECK(std::string(rb_last_error()).rfind("broken:", 0) == 0);
    CHECK(rb_document_load("/nonexistent/file.json", &doc) == RB_INPUT_ERROR);
  }

  TEST_CASE("invalid arguments") {
    rb_report* rep = nullptr;
    CHECK(rb_validate(nullptr, &rep) == RB_INVALID_ARGUMENT);
    CHECK(rb_document_parse(nullptr, "x", nullptr) == RB_INVALID_ARGUMENT);
    Handles h;
    REQUIRE(rb_document_load(data("pair2.json").c_str(), &h.doc) == RB_OK);
    rb_options opt;
    rb_options_init(&opt);
    opt.degree_cap = 0;
    CHECK(rb_betti(h.doc, &opt, &rep) == RB_INVALID_ARGUMENT);
    opt.degree_cap = 2;
    opt.pipeline = "other";
    CHECK(rb_betti(h.doc, &opt, &rep) == RB_INVALID_ARGUMENT);
    rb_report_free(nullptr);
    rb_document_free(nullptr);
  }

  TEST_CASE("non-tracial cocycle is a discrepancy on validate") {
    Handles h;
    REQUIRE(rb_document_load(data("cocycle_r2_sign.json").c_str(), &h.doc) == RB_OK);
    CHECK(rb_validate(h.doc, &h.rep) == RB_DISCREPANCY);
    REQUIRE(h.rep);
    CHECK(std::string(rb_report_json(h.rep)).find("faithful positive trace") != std::string::npos);
  }

  TEST_CASE("verify theorems from the corpus") {
    for (const auto& [file, theorem] : {std::pair{"compression_m2_scalars.json", "compression"},
                                        std::pair{"compression_m2_diagonal.json", "compression"},
                                        std::pair{"directed_sum.json", "directed_sum"},
                                        std::pair{"central_quadratic.json", "central_quadratic"},
                                        std::pair{"swap_action.json", "groupoid_equality"},
                                        std::pair{"cocycle_r3_coboundary.json", "residual"}}) {
      CAPTURE(file);
      Handles h;
      REQUIRE(rb_document_load(data(file).c_str(), &h.doc) == RB_OK);
      rb_options opt;
      rb_options_init(&opt);
      opt.degree_cap = 2;
      CHECK(rb_verify(h.doc, theorem, &opt, &h.rep) == RB_OK);
    }
  }

  TEST_CASE("reports are deterministic") {
    Handles a, b;
    std::string text = slurp(data("partition_21.json"));
    REQUIRE(rb_document_parse(text.c_str(), "partition_21.json", &a.doc) == RB_OK);
    REQUIRE(rb_document_parse(text.c_str(), "partition_21.json", &b.doc) == RB_OK);
    rb_options opt;
    rb_options_init(&opt);
    opt.pipeline = "both";
    REQUIRE(rb_betti(a.doc, &opt, &a.rep) == RB_OK);
    REQUIRE(rb_betti(b.doc, &opt, &b.rep) == RB_OK);
    CHECK(std::string(rb_report_json(a.rep)) == rb_report_json(b.rep));
  }
}

TEST_SUITE("cli") {
  TEST_CASE("exit codes") {
    CHECK(run("validate " + data("pair3.json")).exit == 0);
    CHECK(run("betti --both --N 3 " + data("swap_action.json")).exit == 0);
    CHECK(run("validate " + data("cocycle_r2_sign.json")).exit == 1);
    CHECK(run("betti " + data("cocycle_r2_sign.json")).exit == 2);
    CHECK(run("betti /nonexistent.json").exit == 2);
    CHECK(run("betti --both " + data("matrix2_scalars.json")).exit == 2);
    CHECK(run("verify compression " + data("pair2.json")).exit == 2);
    CHECK(run("betti --N 0 " + data("pair2.json")).exit != 0);
  }

  TEST_CASE("structured output") {
    auto r = run("betti --both --N 3 " + data("swap_action.json"));
    auto j = nlohmann::json::parse(r.out);
    CHECK(j["status"] == "ok");
    CHECK(j.dump().find("\"1/2\"") != std::string::npos);
    auto many = run("validate " + data("pair2.json") + " " + data("pair3.json"));
    auto arr = nlohmann::json::parse(many.out);
    REQUIRE(arr.is_array());
    CHECK(arr.size() == 2);
  }

  TEST_CASE("plain output and the summary line") {
    auto r = run("verify compression --format plain " + data("compression_m2_scalars.json"));
    CHECK(r.exit == 0);
    CHECK(r.out.find("lhs = rhs = 1") != std::string::npos);
    CHECK(r.out.find('{') == std::string::npos);
  }

  TEST_CASE("repeated runs are byte-identical") {
    for (const auto& args : {"fiber-square " + data("pair3.json"), "homology " + data("matrix2_diagonal.json"),
                             "betti " + data("directed_sum.json")}) {
      CAPTURE(args);
      auto first = run(args);
      CHECK(run(args).out == first.out);
    }
  }
}
