#ifndef FMLOCAL_H
#define FMLOCAL_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum FmStatus {
  FM_STATUS_OK = 0,
  FM_STATUS_NULL_POINTER = 1,
  FM_STATUS_INVALID_UTF8 = 2,
  // Malformed structure text.
  FM_STATUS_SYNTAX = 3,
  // Well-formed input that the operation rejects, such as structures
  // over different vocabularies.
  FM_STATUS_INVALID_INPUT = 4,
  // A search bound stopped the computation.
  FM_STATUS_BOUND_EXCEEDED = 5,
  FM_STATUS_BUFFER_TOO_SMALL = 6,
  FM_STATUS_PANIC = 7,
} FmStatus;

// Opaque structure handle.
typedef struct FmStructure FmStructure;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Copies the last error message of this thread into `buf` (NUL
// terminated, truncated to `len`). Returns the full message length.
//
// # Safety
// `buf` must be null or valid for `len` bytes.
size_t fm_last_error(char *buf, size_t len);

// The library version as a static NUL-terminated string.
const char *fm_version(void);

// Parses a structure from its text format.
//
// # Safety
// `text` must be a NUL-terminated string and `out` valid for writing.
enum FmStatus fm_structure_parse(const char *text, struct FmStructure **out);

// Releases a handle; null is ignored.
//
// # Safety
// `s` must be null or a handle not yet freed.
void fm_structure_free(struct FmStructure *s);

// # Safety
// `s` must be a live handle and `out` valid for writing.
enum FmStatus fm_structure_size(const struct FmStructure *s, size_t *out);

// Writes the canonical text of `s` as a new string, released with
// `fm_string_free`.
//
// # Safety
// `s` must be a live handle and `out` valid for writing.
enum FmStatus fm_structure_to_text(const struct FmStructure *s, char **out);

// # Safety
// `s` must be null or a string returned by this library.
void fm_string_free(char *s);

// # Safety
// Handles must be live and `out` valid for writing.
enum FmStatus fm_is_isomorphic(const struct FmStructure *a, const struct FmStructure *b, bool *out);

// Looks for a homomorphism `a -> b`. When one exists and `map` is not
// null, its images are written to `map`, which must hold `size(a)`
// entries (`map_len`).
//
// # Safety
// Handles must be live, `found` valid for writing and `map` null or valid
// for `map_len` entries.
enum FmStatus fm_find_hom(const struct FmStructure *a,
                          const struct FmStructure *b,
                          bool *found,
                          size_t *map,
                          size_t map_len);

// The core of `s` as a new handle.
//
// # Safety
// `s` must be a live handle and `out` valid for writing.
enum FmStatus fm_core(const struct FmStructure *s, struct FmStructure **out);

// # Safety
// `s` must be a live handle and `out` valid for writing.
enum FmStatus fm_tree_depth(const struct FmStructure *s, size_t *out);

// Whether the forth game is won both ways for `k` rounds.
//
// # Safety
// Handles must be live and `out` valid for writing.
enum FmStatus fm_khom_equivalent(const struct FmStructure *a,
                                 const struct FmStructure *b,
                                 size_t k,
                                 bool *out);

// Whether the duplicator wins the k-round Ehrenfeucht-Fraisse game.
//
// # Safety
// Handles must be live and `out` valid for writing.
enum FmStatus fm_ef_equivalent(const struct FmStructure *a,
                               const struct FmStructure *b,
                               size_t k,
                               bool *out);

// Runs the command line with `argc` arguments (the first is the program
// name) and returns its exit code; -1 for unusable arguments.
//
// # Safety
// `argv` must hold `argc` NUL-terminated strings.
int fm_cli_run(int argc, const char *const *argv);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* FMLOCAL_H */
