/* C interface to relbetti. All objects are opaque; every call returns a
 * status code and the last error message is kept per thread. */
#ifndef RELBETTI_H
#define RELBETTI_H

#ifdef __cplusplus
extern "C" {
#endif

#if defined(RB_BUILDING_LIBRARY)
#define RB_API __attribute__((visibility("default")))
#else
#define RB_API
#endif

typedef struct rb_document rb_document;
typedef struct rb_report rb_report;

typedef enum rb_status {
  RB_OK = 0,
  RB_DISCREPANCY = 1,    /* a check or identity did not hold */
  RB_INPUT_ERROR = 2,    /* unreadable or malformed input, failed precondition */
  RB_INTERNAL_ERROR = 3, /* an internal identity failed */
  RB_INVALID_ARGUMENT = 4
} rb_status;

typedef struct rb_options {
  unsigned degree_cap;  /* N, at least 1 */
  const char* pipeline; /* "hochschild", "sauer" or "both" */
  int extended_scope;
} rb_options;

RB_API const char* rb_version(void);
RB_API const char* rb_last_error(void);
RB_API void rb_options_init(rb_options* opt);

RB_API rb_status rb_document_load(const char* path, rb_document** out);
RB_API rb_status rb_document_parse(const char* text, const char* origin, rb_document** out);
RB_API const char* rb_document_kind(const rb_document* doc);
RB_API void rb_document_free(rb_document* doc);

/* Each command stores a report in *out (also on failure, when one could be
 * produced) and returns its outcome. */
RB_API rb_status rb_validate(const rb_document* doc, rb_report** out);
RB_API rb_status rb_betti(const rb_document* doc, const rb_options* opt, rb_report** out);
RB_API rb_status rb_homology(const rb_document* doc, const rb_options* opt, rb_report** out);
RB_API rb_status rb_fiber_square(const rb_document* doc, const rb_options* opt, rb_report** out);
RB_API rb_status rb_verify(const rb_document* doc, const char* theorem, const rb_options* opt, rb_report** out);

/* Report for a failure that happened before a document existed. */
RB_API rb_status rb_error_report(const char* command, rb_status status, rb_report** out);

RB_API const char* rb_report_json(const rb_report* report);
RB_API rb_status rb_report_status(const rb_report* report);
RB_API void rb_report_free(rb_report* report);

#ifdef __cplusplus
}
#endif

#endif
