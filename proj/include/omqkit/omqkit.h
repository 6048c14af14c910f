#ifndef OMQKIT_OMQKIT_H
#define OMQKIT_OMQKIT_H

#include <stddef.h>
#include <stdint.h>

#if defined(OMQKIT_BUILDING)
#define OMQK_API __attribute__((visibility("default")))
#else
#define OMQK_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum {
    OMQK_OK = 0,
    OMQK_ERR_PARSE = 2,        /* malformed or invalid input */
    OMQK_ERR_UNSUPPORTED = 3,
    OMQK_ERR_IO = 4,
    OMQK_ERR_LIMIT = 5,        /* a configured size bound was exceeded */
    OMQK_ERR_ARGUMENT = 6,
    OMQK_ERR_INTERNAL = 7
} omqk_status;

typedef enum {
    OMQK_FORMAT_AUTO = 0,
    OMQK_FORMAT_FACTS,
    OMQK_FORMAT_ONTOLOGY,
    OMQK_FORMAT_OMQ,
    OMQK_FORMAT_DATALOG,
    OMQK_FORMAT_MSNP,
    OMQK_FORMAT_TEMPLATES,
    OMQK_FORMAT_PATTERNS
} omqk_format;

typedef enum {
    OMQK_ENGINE_TEMPLATE = 0,
    OMQK_ENGINE_DDLOG,
    OMQK_ENGINE_MSNP
} omqk_engine;

typedef struct {
    uint64_t max_models;
    size_t max_product;
    size_t max_rules;
} omqk_limits;

typedef struct omqk_artifact omqk_artifact;
typedef struct omqk_answers omqk_answers;

OMQK_API const char* omqk_version(void);
OMQK_API omqk_limits omqk_limits_default(void);

/* Message of the last failing call on this thread, or "". */
OMQK_API const char* omqk_last_error(void);

OMQK_API omqk_format omqk_detect_format(const char* text);
OMQK_API const char* omqk_format_name(omqk_format fmt);

OMQK_API omqk_status omqk_parse(const char* text, omqk_format fmt, omqk_artifact** out);
OMQK_API omqk_format omqk_artifact_format(const omqk_artifact* a);
OMQK_API omqk_status omqk_render(const omqk_artifact* a, char** out);
OMQK_API omqk_status omqk_describe(const omqk_artifact* a, char** out);
OMQK_API void omqk_artifact_free(omqk_artifact* a);
OMQK_API void omqk_string_free(char* s);

/* Kinds: alc-aq alc-baq alc-conq alc-ucq mddlog fgddlog commsnp gmsnp mmsnp2.
   Multi-step conversions are chained automatically. */
OMQK_API omqk_status omqk_compile(const omqk_artifact* in, const char* from, const char* to,
                                  const omqk_limits* limits, omqk_artifact** out);

OMQK_API omqk_status omqk_to_templates(const omqk_artifact* omq, const omqk_limits* limits, omqk_artifact** out);
OMQK_API omqk_status omqk_from_templates(const omqk_artifact* family, omqk_artifact** out);

OMQK_API omqk_status omqk_eval(const omqk_artifact* query, const omqk_artifact* data, omqk_engine engine,
                               const omqk_limits* limits, omqk_answers** out);
OMQK_API size_t omqk_answers_count(const omqk_answers* a);
OMQK_API size_t omqk_answers_arity(const omqk_answers* a);
OMQK_API const char* omqk_answers_get(const omqk_answers* a, size_t row, size_t col);
OMQK_API omqk_status omqk_answers_render(const omqk_answers* a, char** out);
OMQK_API void omqk_answers_free(omqk_answers* a);

/* Decides whether every answer of q1 is an answer of q2. On failure to
   contain, *witness receives a template family holding the offending
   pointed instance. */
OMQK_API omqk_status omqk_contain(const omqk_artifact* q1, const omqk_artifact* q2, const omqk_limits* limits,
                                  int* contained, omqk_artifact** witness);

OMQK_API omqk_status omqk_fo_definable(const omqk_artifact* q, const omqk_limits* limits, int* result);

/* Always OMQK_ERR_UNSUPPORTED. */
OMQK_API omqk_status omqk_datalog_definable(const omqk_artifact* q, int* result);

OMQK_API omqk_status omqk_forb_member(const omqk_artifact* patterns, const omqk_artifact* data,
                                      const omqk_limits* limits, int* member);

#ifdef __cplusplus
}
#endif

#endif
