/* sensebench C API. Generated by cbindgen from crates/capi; do not edit. */

#ifndef SENSEBENCH_H
#define SENSEBENCH_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Synthetic concept family for [`sb_dataset_synth`].
 */
typedef enum SbFamily {
  /**
   * `a`-of-`b` threshold concept (two senses).
   */
  SB_FAMILY_M_OF_N = 0,
  /**
   * `a` terms of `b` literals each (two senses).
   */
  SB_FAMILY_DNF = 1,
  /**
   * Generative model with `a` senses; `b` is ignored.
   */
  SB_FAMILY_GENERATIVE = 2,
} SbFamily;

/**
 * Classifier selector, mirroring the CLI ids.
 */
typedef enum SbLearner {
  SB_LEARNER_NAIVE_BAYES = 0,
  SB_LEARNER_PERCEPTRON = 1,
  SB_LEARNER_DECISION_TREE = 2,
  SB_LEARNER_KNN = 3,
  SB_LEARNER_PFOIL_DNF = 4,
  SB_LEARNER_PFOIL_CNF = 5,
  SB_LEARNER_PFOIL_DLIST = 6,
} SbLearner;

/**
 * Result of every fallible call.
 */
typedef enum SbStatus {
  /**
   * Success.
   */
  SB_STATUS_OK = 0,
  /**
   * A required pointer argument was null.
   */
  SB_STATUS_NULL_ARGUMENT = 1,
  /**
   * A string argument was not valid UTF-8.
   */
  SB_STATUS_INVALID_UTF8 = 2,
  /**
   * The operating system reported an I/O error.
   */
  SB_STATUS_IO = 3,
  /**
   * A file or buffer did not match the expected format.
   */
  SB_STATUS_PARSE = 4,
  /**
   * Arguments were structurally valid but out of range.
   */
  SB_STATUS_BAD_CONFIG = 5,
  /**
   * Training failed on this dataset.
   */
  SB_STATUS_TRAIN = 6,
  /**
   * An index argument was out of range.
   */
  SB_STATUS_OUT_OF_RANGE = 7,
  /**
   * Internal invariant violated; state is still consistent.
   */
  SB_STATUS_INTERNAL = 8,
} SbStatus;

/**
 * Opaque dataset handle.
 */
typedef struct SbDataset SbDataset;

/**
 * Opaque trained-model handle.
 */
typedef struct SbModel SbModel;

/**
 * Training hyperparameters. Obtain defaults from [`sb_params_default`].
 */
typedef struct SbParams {
  /**
   * Laplace smoothing for naive Bayes.
   */
  double alpha;
  /**
   * Perceptron learning rate.
   */
  double eta;
  /**
   * Perceptron epoch cap.
   */
  size_t epochs;
  /**
   * Neighbor count for k-NN.
   */
  size_t k;
  /**
   * Whether the decision tree is pruned.
   */
  bool prune;
} SbParams;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *sb_version(void);

/**
 * Message for the most recent failure on this thread. Never null;
 * empty before the first failure. Valid until the next failing call
 * on the same thread.
 */
const char *sb_last_error(void);

/**
 * The defaults used by the CLI.
 */
struct SbParams sb_params_default(void);

/**
 * Loads a serialized dataset from `path`.
 *
 * # Safety
 * `path` must be NUL-terminated; `out` must be a valid location.
 */
enum SbStatus sb_dataset_load(const char *path, struct SbDataset **out);

/**
 * Parses a dataset from an in-memory string in the serialized format.
 *
 * # Safety
 * `text` must be NUL-terminated; `out` must be a valid location.
 */
enum SbStatus sb_dataset_parse(const char *text, struct SbDataset **out);

/**
 * Generates a synthetic dataset. `a` and `b` parameterize the family
 * (see [`SbFamily`]); labels are flipped to a random other sense with
 * probability `noise`.
 *
 * # Safety
 * `out` must be a valid location.
 */
enum SbStatus sb_dataset_synth(enum SbFamily family,
                               size_t a,
                               size_t b,
                               size_t features,
                               size_t examples,
                               double noise,
                               uint64_t seed,
                               struct SbDataset **out);

/**
 * Writes `data` to `path` in the serialized format.
 *
 * # Safety
 * Both pointers must be valid; `path` NUL-terminated.
 */
enum SbStatus sb_dataset_save(const struct SbDataset *data, const char *path);

/**
 * Frees a dataset handle. Null is ignored.
 *
 * # Safety
 * `data` must have come from this library and not been freed before.
 */
void sb_dataset_free(struct SbDataset *data);

/**
 * Number of examples; 0 for null.
 *
 * # Safety
 * `data` must be a live handle or null.
 */
size_t sb_dataset_examples(const struct SbDataset *data);

/**
 * Size of the feature space; 0 for null.
 *
 * # Safety
 * `data` must be a live handle or null.
 */
size_t sb_dataset_features(const struct SbDataset *data);

/**
 * Number of senses; 0 for null.
 *
 * # Safety
 * `data` must be a live handle or null.
 */
size_t sb_dataset_senses(const struct SbDataset *data);

/**
 * Name of sense `id`, borrowed from the handle; null if `data` is null
 * or `id` is out of range.
 *
 * # Safety
 * `data` must be a live handle or null.
 */
const char *sb_dataset_sense_name(const struct SbDataset *data, size_t id);

/**
 * Trains `learner` on the whole dataset. `params` may be null for
 * defaults. Randomized learners draw from a stream derived from `seed`,
 * so equal seeds give equal models.
 *
 * # Safety
 * `data` must be a live handle; `params` valid or null; `out` a valid
 * location.
 */
enum SbStatus sb_train(const struct SbDataset *data,
                       enum SbLearner learner,
                       const struct SbParams *params,
                       uint64_t seed,
                       struct SbModel **out);

/**
 * Frees a model handle. Null is ignored.
 *
 * # Safety
 * `model` must have come from this library and not been freed before.
 */
void sb_model_free(struct SbModel *model);

/**
 * Which learner produced this model.
 *
 * # Safety
 * `model` must be a live handle; `out` a valid location.
 */
enum SbStatus sb_model_learner(const struct SbModel *model, enum SbLearner *out);

/**
 * Learner-specific size (leaves, literals, parameters, or stored
 * examples); 0 for null.
 *
 * # Safety
 * `model` must be a live handle or null.
 */
size_t sb_model_size(const struct SbModel *model);

/**
 * Classifies one example given as the indices of its present features
 * (any order, duplicates allowed). `present` may be null when `len` is
 * 0. Fails with `OutOfRange` if an index is outside the training
 * feature space.
 *
 * # Safety
 * `model` must be a live handle; `present` must point to `len` indices;
 * `out_sense` must be a valid location.
 */
enum SbStatus sb_predict(const struct SbModel *model,
                         const size_t *present,
                         size_t len,
                         size_t *out_sense);

/**
 * Fraction of `data` the model labels correctly.
 *
 * # Safety
 * `model` and `data` must be live handles; `out` a valid location.
 */
enum SbStatus sb_accuracy(const struct SbModel *model, const struct SbDataset *data, double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SENSEBENCH_H */
