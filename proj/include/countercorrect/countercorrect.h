// Copyright 2026 The CounterCorrect Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef COUNTERCORRECT_COUNTERCORRECT_H_
#define COUNTERCORRECT_COUNTERCORRECT_H_

#include <stddef.h>
#include <stdint.h>

#if defined(CC_BUILDING_LIBRARY)
#define CC_API __attribute__((visibility("default")))
#else
#define CC_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum cc_status {
  CC_OK = 0,
  CC_ERR_IO = 1,
  CC_ERR_VALIDATION = 2,
  CC_ERR_ARGUMENT = 3,
  CC_ERR_STATE = 4,
  CC_ERR_INTERNAL = 5
} cc_status;

typedef struct cc_corpus cc_corpus;
typedef struct cc_classifier cc_classifier;
typedef struct cc_policy cc_policy;
typedef struct cc_reward_context cc_reward_context;

/* Message for the last failed call on this thread; empty after success. */
CC_API const char* cc_last_error(void);
CC_API const char* cc_status_name(cc_status status);
CC_API const char* cc_version(void);

/* Every char** result is allocated by the library and released here. */
CC_API void cc_string_free(char* s);

/* Key-value config file as a JSON object of strings. */
CC_API cc_status cc_config_load(const char* path, char** json_out);

/* ---- corpus ---- */
CC_API cc_status cc_corpus_load(const char* path, cc_corpus** out);
CC_API cc_status cc_corpus_parse(const char* jsonl, cc_corpus** out);
CC_API void cc_corpus_free(cc_corpus* corpus);
CC_API cc_status cc_corpus_size(const cc_corpus* corpus, size_t* out);
CC_API cc_status cc_corpus_save(const cc_corpus* corpus, const char* path);
CC_API cc_status cc_corpus_to_jsonl(const cc_corpus* corpus, char** out);
CC_API cc_status cc_corpus_stats(const cc_corpus* corpus, char** json_out);
CC_API cc_status cc_corpus_clean(const cc_corpus* corpus, cc_corpus** out);
/* keywords_json: JSON array of strings, or NULL for the default list. */
CC_API cc_status cc_corpus_filter_keywords(const cc_corpus* corpus, const char* keywords_json, cc_corpus** out);
CC_API cc_status cc_corpus_split(const cc_corpus* corpus, double train, double validation, double test,
                                 uint64_t seed, cc_corpus** train_out, cc_corpus** validation_out,
                                 cc_corpus** test_out);

/* ---- classifiers ---- */
/* Task: politeness, refutation, evidence, misinfo or disbelief. data_path
   holds annotated pairs or {post?, text, label} examples. config_json keys:
   epochs, batch_size, learning_rate, seed, embed_dim, hidden, vocab_size
   (NULL for defaults). */
CC_API cc_status cc_classifier_train(const char* data_path, const char* task, const char* config_json,
                                     cc_classifier** out);
CC_API cc_status cc_classifier_load(const char* path, cc_classifier** out);
CC_API cc_status cc_classifier_save(const cc_classifier* model, const char* path);
CC_API void cc_classifier_free(cc_classifier* model);
CC_API cc_status cc_classifier_info(const cc_classifier* model, char** json_out);
/* post must be NULL for single-text tasks and non-NULL for pairwise ones. */
CC_API cc_status cc_classifier_score(const cc_classifier* model, const char* post, const char* response,
                                     double* out);
CC_API cc_status cc_classifier_evaluate(const cc_classifier* model, const char* data_path, char** json_out);
/* folds >= 2; returns per-fold and mean precision/recall/F1. */
CC_API cc_status cc_classifier_cross_validate(const char* data_path, const char* task, const char* config_json,
                                              int folds, char** json_out);
/* Line-delimited candidates from a file of {post_id, post_text, replies}. */
CC_API cc_status cc_cascade_identify(const cc_classifier* misinfo, const cc_classifier* disbelief,
                                     const char* threads_path, double threshold, char** jsonl_out);

/* ---- policy ---- */
/* config_json keys: vocab_size, context_window, d_model, n_layers, n_heads,
   mlp_hidden, epochs, batch_size, learning_rate, seed. */
CC_API cc_status cc_policy_warm_start(const cc_corpus* pairs, const char* config_json, cc_policy** out,
                                      char** report_json);
/* Continues supervised training of an existing policy in place. */
CC_API cc_status cc_policy_continue_warm_start(cc_policy* policy, const cc_corpus* pairs, const char* config_json,
                                               char** report_json);
/* Unconditional reference model over the corpus responses. */
CC_API cc_status cc_policy_train_reference(const cc_corpus* pairs, const char* config_json, cc_policy** out,
                                           char** report_json);
CC_API cc_status cc_policy_load(const char* path, cc_policy** out);
CC_API cc_status cc_policy_save(const cc_policy* policy, const char* path);
CC_API void cc_policy_free(cc_policy* policy);
CC_API cc_status cc_policy_info(const cc_policy* policy, char** json_out);
/* config_json keys: top_p, max_new_tokens, temperature, seed. */
CC_API cc_status cc_policy_generate(const cc_policy* policy, const char* post, const char* config_json,
                                    char** result_json);
CC_API cc_status cc_policy_sequence_logprob(const cc_policy* policy, const char* post, const char* response,
                                            double* out);

/* ---- rewards ---- */
/* dir holds politeness.clf, refutation.clf, evidence.clf and reference.lm. */
CC_API cc_status cc_reward_context_load(const char* dir, cc_reward_context** out);
CC_API void cc_reward_context_free(cc_reward_context* ctx);
/* weights_json: {alpha, beta, gamma, theta, lambda}; missing keys keep defaults. */
CC_API cc_status cc_weights_from_config(const char* path, char** weights_json);
CC_API cc_status cc_composite_reward(const char* weights_json, const char* vector_json, double* out);
CC_API cc_status cc_reward_score(const cc_reward_context* ctx, const char* weights_json, const char* post,
                                 const char* response, char** json_out);

/* ---- RL ---- */
/* config_json keys: batch_size, total_steps, learning_rate, seed,
   samples_per_post, top_p, max_new_tokens, checkpoint_interval, keep_best,
   use_baseline. Step records are appended to log_path when non-NULL;
   checkpoints go to <checkpoint_prefix>-<step>.ccp when both it and an
   interval are set. */
CC_API cc_status cc_rl_train(cc_policy* policy, const cc_corpus* posts, const cc_reward_context* ctx,
                             const char* weights_json, const char* config_json, const char* log_path,
                             const char* checkpoint_prefix, char** summary_json);

/* ---- evaluation ---- */
/* config_json keys: top_p, max_new_tokens, temperature, seed, examples. */
CC_API cc_status cc_evaluate_policy(const cc_policy* policy, const cc_corpus* test, const cc_reward_context* ctx,
                                    const char* config_json, char** report_json);
/* Scores the corpus's own responses. */
CC_API cc_status cc_evaluate_references(const cc_corpus* test, const cc_reward_context* ctx, char** report_json);
/* config_json: {variants?, weights?, rl: {...}, eval: {...}}. */
CC_API cc_status cc_run_ablation(const cc_policy* warm_start, const cc_corpus* train, const cc_corpus* test,
                                 const cc_reward_context* ctx, const char* config_json, char** json_out);
/* b may be NULL to compare against the corpus's reference responses. */
CC_API cc_status cc_pairwise_export(const cc_policy* a, const cc_policy* b, const cc_corpus* posts, size_t n_items,
                                    uint64_t seed, const char* config_json, const char* annotator_path,
                                    const char* mapping_path);
CC_API cc_status cc_pairwise_tally(const char* mapping_path, const char* judgements_path, char** json_out);

/* ---- interface ---- */
/* request_json: {post_text, n, seed?, top_p?, weights?, max_candidates?}.
   Result: {candidates: [{text, scores, composite, rank}]}. */
CC_API cc_status cc_generate_candidates(const cc_policy* policy, const cc_reward_context* ctx,
                                        const char* request_json, char** response_json);
/* request_json: {post_text, draft_text, weights?}. */
CC_API cc_status cc_score_draft(const cc_reward_context* ctx, const char* request_json, char** response_json);
/* Reads a service config file (NULL for defaults) and applies CC_* environment overrides. */
CC_API cc_status cc_service_config(const char* path, char** json_out);

#ifdef __cplusplus
}
#endif

#endif  // COUNTERCORRECT_COUNTERCORRECT_H_
