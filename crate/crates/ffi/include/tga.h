#ifndef TGA_H
#define TGA_H

/* Generated by cbindgen from src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum TgaStatus {
  TGA_STATUS_OK = 0,
  TGA_STATUS_NULL_POINTER = 1,
  TGA_STATUS_INVALID_UTF8 = 2,
  TGA_STATUS_PARSE = 3,
  TGA_STATUS_INVALID_INPUT = 4,
  TGA_STATUS_VERIFICATION = 5,
  TGA_STATUS_INDEX_OUT_OF_RANGE = 6,
  TGA_STATUS_INTERNAL = 7,
  TGA_STATUS_PANIC = 8,
} TgaStatus;

/**
 * Opaque family of minimal idempotents.
 */
typedef struct TgaFamily TgaFamily;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version, a static NUL-terminated string.
 */
const char *tga_version(void);

/**
 * Message for the last failed call on this thread, or NULL. Valid until the
 * next call into the library from the same thread.
 */
const char *tga_last_error(void);

/**
 * Release a string returned by this library. NULL is ignored.
 *
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void tga_string_free(char *s);

/**
 * Classification of `field` as JSON, with the emulation annotation for
 * groups of order 2^n.
 *
 * # Safety
 * `field` must be a NUL-terminated string; `out` must be writable.
 */
enum TgaStatus tga_classify_json(const char *field, uint32_t n, char **out);

/**
 * Build the minimal idempotents of K_t<g>, g^(2^n) = a. With `checked`
 * the family is verified first and a failure is reported as
 * `TGA_STATUS_VERIFICATION`.
 *
 * # Safety
 * `field` and `a` must be NUL-terminated strings; `out` must be writable.
 */
enum TgaStatus tga_family_build(const char *field,
                                uint32_t n,
                                const char *a,
                                bool checked,
                                struct TgaFamily **out);

/**
 * Release a family. NULL is ignored.
 *
 * # Safety
 * `family` must come from `tga_family_build` and not have been freed.
 */
void tga_family_free(struct TgaFamily *family);

/**
 * Number of idempotents, 0 for NULL.
 *
 * # Safety
 * `family` must be NULL or a live handle.
 */
size_t tga_family_len(const struct TgaFamily *family);

/**
 * K-dimension of the component of idempotent `index`.
 *
 * # Safety
 * `family` must be a live handle; `out` must be writable.
 */
enum TgaStatus tga_family_dim(const struct TgaFamily *family, size_t index, size_t *out);

/**
 * Run every check on the family; `*ok` receives the overall verdict. When
 * it is false the first failed check is left in `tga_last_error`.
 *
 * # Safety
 * `family` must be a live handle; `ok` must be writable.
 */
enum TgaStatus tga_family_verify(const struct TgaFamily *family, bool *ok);

/**
 * The family as JSON, optionally with the verification report.
 *
 * # Safety
 * `family` must be a live handle; `out` must be writable.
 */
enum TgaStatus tga_family_json(const struct TgaFamily *family, bool verify, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TGA_H */
