/* C interface to the ssqa analyzer. All handles are opaque. Strings returned
 * by ssqa_report_to_* are owned by the caller and released with
 * ssqa_string_free. Functions that can fail return an ssqa_status and leave a
 * message in ssqa_last_error() for the calling thread. */
#ifndef SSQA_SSQA_H
#define SSQA_SSQA_H

#include <stddef.h>

#if defined(_WIN32)
#define SSQA_API __declspec(dllexport)
#else
#define SSQA_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ssqa_status {
    SSQA_OK = 0,
    SSQA_ERR_INVALID_ARGUMENT = 1,
    SSQA_ERR_INGEST = 2,   /* workbook unreadable or malformed */
    SSQA_ERR_MANIFEST = 3, /* manifest unreadable, malformed or unbound */
    SSQA_ERR_CONFIG = 4,   /* config file or rule list invalid */
    SSQA_ERR_IO = 5,       /* output file could not be written */
    SSQA_ERR_INTERNAL = 6
} ssqa_status;

typedef enum ssqa_severity { SSQA_INFO = 0, SSQA_WARNING = 1, SSQA_ERROR = 2 } ssqa_severity;

typedef enum ssqa_dimension {
    SSQA_SUITABLE_FOR_ANALYSIS = 0,
    SSQA_READABLE = 1,
    SSQA_TRANSFERABLE = 2,
    SSQA_ACCURATE = 3,
    SSQA_REUSABLE = 4,
    SSQA_MODIFIABLE = 5
} ssqa_dimension;

typedef struct ssqa_options ssqa_options;
typedef struct ssqa_report ssqa_report;

SSQA_API const char* ssqa_version(void);
/* Message for the last failed call on this thread; "" if none. */
SSQA_API const char* ssqa_last_error(void);

SSQA_API ssqa_status ssqa_options_create(ssqa_options** out);
SSQA_API void ssqa_options_destroy(ssqa_options* opts);
/* Manifest path; NULL clears it and selects module inference. */
SSQA_API ssqa_status ssqa_options_set_manifest(ssqa_options* opts, const char* path);
/* Loads and validates the config file now. */
SSQA_API ssqa_status ssqa_options_set_config(ssqa_options* opts, const char* path);
/* Comma-separated rule ids ("R1,R6"); overrides the config's rule list. */
SSQA_API ssqa_status ssqa_options_set_rules(ssqa_options* opts, const char* rules);

/* opts may be NULL for defaults. */
SSQA_API ssqa_status ssqa_analyze(const char* path, const ssqa_options* opts, ssqa_report** out);
SSQA_API void ssqa_report_destroy(ssqa_report* report);

SSQA_API ssqa_status ssqa_report_to_json(const ssqa_report* report, char** out);
SSQA_API ssqa_status ssqa_report_to_text(const ssqa_report* report, char** out);
SSQA_API ssqa_status ssqa_report_quotient_dot(const ssqa_report* report, char** out);
SSQA_API void ssqa_string_free(char* s);

/* Number of findings at or above min_severity. */
SSQA_API size_t ssqa_report_count(const ssqa_report* report, ssqa_severity min_severity);
/* Score in [0, 100], or -1 for a bad argument. */
SSQA_API int ssqa_report_score(const ssqa_report* report, ssqa_dimension dimension);
/* 1 if the structured-design verdict is pass, 0 if fail, -1 for NULL. */
SSQA_API int ssqa_report_verdict_pass(const ssqa_report* report);
/* 1 if the workbook looks like an analytical model, 0 if not, -1 for NULL. */
SSQA_API int ssqa_report_analytical(const ssqa_report* report);

#ifdef __cplusplus
}
#endif

#endif
