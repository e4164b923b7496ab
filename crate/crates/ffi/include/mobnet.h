#ifndef MOBNET_H
#define MOBNET_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum MobnetDirection {
  MOBNET_DIRECTION_OUT = 0,
  MOBNET_DIRECTION_IN = 1,
} MobnetDirection;

typedef enum MobnetGender {
  MOBNET_GENDER_ALL = 0,
  MOBNET_GENDER_FEMALE = 1,
  MOBNET_GENDER_MALE = 2,
  MOBNET_GENDER_UNKNOWN = 3,
} MobnetGender;

typedef enum MobnetStatus {
  MOBNET_STATUS_OK = 0,
  MOBNET_STATUS_NULL_POINTER = 1,
  MOBNET_STATUS_INVALID_ARGUMENT = 2,
  MOBNET_STATUS_IO = 3,
  MOBNET_STATUS_DATA = 4,
  MOBNET_STATUS_UNDEFINED = 5,
  MOBNET_STATUS_BUFFER_TOO_SMALL = 6,
  MOBNET_STATUS_PANIC = 7,
} MobnetStatus;

typedef enum MobnetStem {
  MOBNET_STEM_ALL = 0,
  MOBNET_STEM_STEM = 1,
  MOBNET_STEM_NON_STEM = 2,
} MobnetStem;

// One year's network.
typedef struct MobnetNetwork MobnetNetwork;

// Loaded records and node universes.
typedef struct MobnetStudy MobnetStudy;

// Summary statistics. Ratios that are undefined on the network are NaN.
typedef struct MobnetMetrics {
  size_t universe;
  size_t active;
  size_t sending;
  size_t receiving;
  size_t partnerships;
  size_t active_connections;
  size_t isolates;
  double density;
  double degree_centralization_all;
  double degree_centralization_out;
  double degree_centralization_in;
  double closeness_centralization_all;
  double closeness_centralization_out;
  double closeness_centralization_in;
  double assortativity;
  double reciprocity;
  uint64_t strength;
  uint64_t strength_stem;
  uint64_t strength_non_stem;
} MobnetMetrics;

typedef struct MobnetRankEntry {
  // Node index, usable with [`mobnet_network_node_code`].
  size_t node;
  size_t degree;
} MobnetRankEntry;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Copy the calling thread's last error message into `buf`.
//
// # Safety
// `buf` is null or valid for `len` bytes; `needed` is null or writable.
enum MobnetStatus mobnet_last_error(char *buf, size_t len, size_t *needed);

// Load the years `first..=last` from `data_dir` using the schemas in
// `schema_dir`. `geo_table` may be null. `all_participants` selects the
// universe policy (0: institutions with special-needs flows).
//
// # Safety
// String arguments are null or NUL-terminated; `out` is writable.
enum MobnetStatus mobnet_study_load(const char *data_dir,
                                    const char *schema_dir,
                                    int32_t first,
                                    int32_t last,
                                    const char *geo_table,
                                    bool all_participants,
                                    struct MobnetStudy **out);

// # Safety
// `study` is null or a handle from [`mobnet_study_load`] not yet freed.
void mobnet_study_free(struct MobnetStudy *study);

// Network of `year`: special-needs flows when `special_needs` is true,
// otherwise all study flows.
//
// # Safety
// `study` is a live handle; `out` is writable.
enum MobnetStatus mobnet_network_build(const struct MobnetStudy *study,
                                       int32_t year,
                                       bool special_needs,
                                       struct MobnetNetwork **out);

// New network keeping only the flows of one gender and/or STEM class.
//
// # Safety
// `network` is a live handle; `out` is writable.
enum MobnetStatus mobnet_network_subnetwork(const struct MobnetNetwork *network,
                                            enum MobnetGender gender,
                                            enum MobnetStem stem,
                                            struct MobnetNetwork **out);

// # Safety
// `network` is null or a live handle.
void mobnet_network_free(struct MobnetNetwork *network);

// Number of nodes (the universe size), or 0 for a null handle.
//
// # Safety
// `network` is null or a live handle.
size_t mobnet_network_node_count(const struct MobnetNetwork *network);

// Institution code of `node` copied NUL-terminated into `buf`.
//
// # Safety
// `network` is a live handle; `buf` is null or valid for `len` bytes;
// `needed` is null or writable.
enum MobnetStatus mobnet_network_node_code(const struct MobnetNetwork *network,
                                           size_t node,
                                           char *buf,
                                           size_t len,
                                           size_t *needed);

// Node index of an institution code, or `InvalidArgument` if absent.
//
// # Safety
// `network` is a live handle; `code` is NUL-terminated; `out` is writable.
enum MobnetStatus mobnet_network_node_index(const struct MobnetNetwork *network,
                                            const char *code,
                                            size_t *out);

// All summary statistics of `network`.
//
// # Safety
// `network` is a live handle; `out` is writable.
enum MobnetStatus mobnet_network_metrics(const struct MobnetNetwork *network,
                                         struct MobnetMetrics *out);

// Density as an exact fraction `numer / denom` in lowest terms.
//
// # Safety
// `network` is a live handle; `numer` and `denom` are writable.
enum MobnetStatus mobnet_network_density(const struct MobnetNetwork *network,
                                         uint64_t *numer,
                                         uint64_t *denom);

// Up to `k` nodes by degree (descending, ties by code) into `entries`,
// which must hold `capacity` elements; `written` receives the count.
//
// # Safety
// `network` is a live handle; `entries` is valid for `capacity` elements;
// `written` is writable.
enum MobnetStatus mobnet_network_top_k(const struct MobnetNetwork *network,
                                       enum MobnetDirection direction,
                                       size_t k,
                                       struct MobnetRankEntry *entries,
                                       size_t capacity,
                                       size_t *written);

// Bounded inclusiveness `(I - 1) / (I + 1)`; negative or NaN `index` is
// `InvalidArgument`.
//
// # Safety
// `out` is writable.
enum MobnetStatus mobnet_bound_index(double index, double *out);

// Inclusiveness index from incoming counts: special-needs at the
// university, special-needs in its country, all at the university, all in
// its country. Writes `I` and its bounded form.
//
// # Safety
// `index` and `bounded` are writable.
enum MobnetStatus mobnet_inclusiveness_index(uint64_t sn_university,
                                             uint64_t sn_country,
                                             uint64_t university,
                                             uint64_t country,
                                             double *index,
                                             double *bounded);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MOBNET_H */
