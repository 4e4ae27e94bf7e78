#ifndef POLYTOWER_H
#define POLYTOWER_H

/* C interface to the polytower library. Every handle is opaque and owned by
 * the caller once returned; release it with the matching _free function.
 * Functions returning pt_status set a thread-local message readable with
 * pt_last_error() when they return PT_INPUT_ERROR or PT_INTERNAL_ERROR. */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define PT_API __declspec(dllexport)
#else
#define PT_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Report statuses double as process exit codes. */
typedef enum pt_status {
  PT_HOLDS = 0,
  PT_FAILS = 1,
  PT_INCONCLUSIVE = 2,
  PT_INPUT_ERROR = 3,
  PT_INTERNAL_ERROR = 4
} pt_status;

typedef enum pt_format { PT_FORMAT_JSON = 0, PT_FORMAT_HUMAN = 1 } pt_format;

typedef struct pt_budgets {
  uint64_t pi1;    /* Tietze rewrite steps */
  uint64_t filler; /* 2-cell filler search states */
  uint64_t nerve;  /* index subsets examined per nerve */
} pt_budgets;

typedef struct pt_options {
  int n;                  /* connectivity bound; 0 = command default */
  pt_budgets budgets;
  const char* scale_base; /* "p/q" or NULL */
  uint64_t seed;
} pt_options;

typedef struct pt_report pt_report;
typedef struct pt_complex pt_complex;
typedef struct pt_tower pt_tower;

PT_API const char* pt_version(void);
PT_API const char* pt_last_error(void);
PT_API const char* pt_status_name(pt_status status);

/* Library defaults, then POLYTOWER_BUDGETS ("pi1=N,filler=N,nerve=N", any
 * subset). PT_INPUT_ERROR on a malformed variable; *out is still filled
 * with the defaults. */
PT_API pt_status pt_options_init(pt_options* out);

/* Runs a command ("validate", "subdivide", "stars", "nerve", "homology",
 * "pi1", "check-map", "verify-tower", "restrict", "lift", "mesh", "gen")
 * on positional arguments. Always produces a report unless out is NULL;
 * input errors become reports with status PT_INPUT_ERROR. */
PT_API pt_status pt_run(const char* command, const char* const* args, size_t arg_count, const pt_options* options,
                        pt_report** out);

PT_API pt_status pt_report_status(const pt_report* report);
/* Owned by the report; valid until pt_report_free. */
PT_API const char* pt_report_text(pt_report* report, pt_format format);
PT_API void pt_report_free(pt_report* report);

/* Complexes. Text is JSON {"vertices": [...], "maximal": [[...]...]}. */
PT_API pt_status pt_complex_parse(const char* text, size_t length, pt_complex** out);
PT_API void pt_complex_free(pt_complex* complex);
PT_API size_t pt_complex_vertex_count(const pt_complex* complex);
PT_API int pt_complex_dimension(const pt_complex* complex);
/* Writes up to capacity entries; *length receives dimension + 1. */
PT_API pt_status pt_complex_f_vector(const pt_complex* complex, size_t* buffer, size_t capacity, size_t* length);
PT_API pt_status pt_complex_subdivide(const pt_complex* complex, pt_complex** out);
/* Betti number and number of torsion coefficients of H_degree. Fails with
 * PT_INPUT_ERROR when the Betti number does not fit in 64 bits. */
PT_API pt_status pt_complex_homology(const pt_complex* complex, int degree, uint64_t* betti, size_t* torsion_count);
/* Canonical JSON; free with pt_string_free. */
PT_API char* pt_complex_to_json(const pt_complex* complex);

/* Towers. Missing scales default to scale_base^i ("1/2" when NULL). */
PT_API pt_status pt_tower_parse(const char* text, size_t length, const char* scale_base, pt_tower** out);
PT_API void pt_tower_free(pt_tower* tower);
PT_API size_t pt_tower_depth(const pt_tower* tower);
PT_API pt_status pt_tower_verify(const pt_tower* tower, int n, const pt_budgets* budgets, pt_report** out);

PT_API void pt_string_free(char* text);

#ifdef __cplusplus
}
#endif

#endif
