#include "relbetti.h"

#include <functional>
#include <new>
#include <string>

#include "relbetti/error.hpp"
#include "relbetti/report.hpp"

struct rb_document {
  relbetti::Document doc;
};

struct rb_report {
  relbetti::Report report;
};

namespace {

thread_local std::string last_error;

rb_status status_of(relbetti::Outcome o) { return static_cast<rb_status>(o); }

rb_status fail(rb_status s, const std::string& msg) {
  last_error = msg;
  return s;
}

relbetti::RunOptions options(const rb_options* opt) {
  relbetti::RunOptions r;
  if (!opt) return r;
  r.degree_cap = opt->degree_cap;
  if (opt->pipeline) r.pipeline = opt->pipeline;
  r.extended_scope = opt->extended_scope != 0;
  return r;
}

const char* bad_options(const rb_options* opt) {
  if (!opt) return nullptr;
  if (opt->degree_cap < 1) return "degree_cap must be at least 1";
  if (opt->pipeline) {
    std::string p = opt->pipeline;
    if (p != "hochschild" && p != "sauer" && p != "both") return "unknown pipeline";
  }
  return nullptr;
}

template <class F>
rb_status run(const rb_document* doc, rb_report** out, F&& f, const rb_options* opt = nullptr) {
  if (!doc || !out) return fail(RB_INVALID_ARGUMENT, "null argument");
  *out = nullptr;
  if (const char* why = bad_options(opt)) return fail(RB_INVALID_ARGUMENT, why);
  *out = nullptr;
  try {
    auto* r = new rb_report{f(doc->doc)};
    *out = r;
    rb_status s = status_of(r->report.outcome);
    last_error = s == RB_OK ? "" : "see report";
    return s;
  } catch (const std::bad_alloc&) {
    return fail(RB_INTERNAL_ERROR, "out of memory");
  } catch (const std::exception& e) {
    return fail(RB_INTERNAL_ERROR, e.what());
  }
}

rb_status load(rb_document** out, const std::function<relbetti::Document()>& f) {
  if (!out) return fail(RB_INVALID_ARGUMENT, "null argument");
  *out = nullptr;
  try {
    *out = new rb_document{f()};
    last_error.clear();
    return RB_OK;
  } catch (const relbetti::ParseError& e) {
    return fail(RB_INPUT_ERROR, e.what());
  } catch (const relbetti::PreconditionError& e) {
    std::string msg = e.what();
    for (const auto& w : e.witnesses()) msg += " [" + w + "]";
    return fail(RB_INPUT_ERROR, msg);
  } catch (const std::exception& e) {
    return fail(RB_INTERNAL_ERROR, e.what());
  }
}

}  // namespace

extern "C" {

const char* rb_version(void) { return "1.0.0"; }

const char* rb_last_error(void) { return last_error.c_str(); }

void rb_options_init(rb_options* opt) {
  if (!opt) return;
  opt->degree_cap = 3;
  opt->pipeline = "hochschild";
  opt->extended_scope = 0;
}

rb_status rb_document_load(const char* path, rb_document** out) {
  if (!path) return fail(RB_INVALID_ARGUMENT, "null path");
  return load(out, [&] { return relbetti::load_document(path); });
}

rb_status rb_document_parse(const char* text, const char* origin, rb_document** out) {
  if (!text) return fail(RB_INVALID_ARGUMENT, "null text");
  return load(out, [&] { return relbetti::parse_document(text, origin ? origin : "<string>"); });
}

const char* rb_document_kind(const rb_document* doc) { return doc ? doc->doc.kind.c_str() : ""; }

void rb_document_free(rb_document* doc) { delete doc; }

rb_status rb_validate(const rb_document* doc, rb_report** out) {
  return run(doc, out, [](const relbetti::Document& d) { return relbetti::run_validate(d); });
}

rb_status rb_betti(const rb_document* doc, const rb_options* opt, rb_report** out) {
  return run(doc, out, [&](const relbetti::Document& d) { return relbetti::run_betti(d, options(opt)); }, opt);
}

rb_status rb_homology(const rb_document* doc, const rb_options* opt, rb_report** out) {
  return run(doc, out, [&](const relbetti::Document& d) { return relbetti::run_homology(d, options(opt)); }, opt);
}

rb_status rb_fiber_square(const rb_document* doc, const rb_options* opt, rb_report** out) {
  return run(doc, out, [&](const relbetti::Document& d) { return relbetti::run_fiber_square(d, options(opt)); }, opt);
}

rb_status rb_verify(const rb_document* doc, const char* theorem, const rb_options* opt, rb_report** out) {
  if (!theorem) return fail(RB_INVALID_ARGUMENT, "null theorem");
  return run(doc, out, [&](const relbetti::Document& d) { return relbetti::run_verify(d, theorem, options(opt)); }, opt);
}

rb_status rb_error_report(const char* command, rb_status status, rb_report** out) {
  if (!out) return fail(RB_INVALID_ARGUMENT, "null argument");
  auto o = static_cast<relbetti::Outcome>(status);
  *out = new rb_report{relbetti::error_report(command ? command : "", last_error, o)};
  return status;
}

const char* rb_report_json(const rb_report* report) { return report ? report->report.json.c_str() : ""; }

rb_status rb_report_status(const rb_report* report) {
  return report ? status_of(report->report.outcome) : RB_INVALID_ARGUMENT;
}

void rb_report_free(rb_report* report) { delete report; }

}  // extern "C"
