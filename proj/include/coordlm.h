#ifndef COORDLM_H
#define COORDLM_H

/* C interface to the coordination-agreement LM toolkit: treebank transforms,
 * word-level and syntactic LM training, surprisal scoring (direct and
 * beam-marginalized), stimulus generation, and expectation analysis.
 *
 * Every function returns a clm_status; on failure clm_last_error() holds a
 * message for the calling thread. Handles are opaque and freed with their
 * matching *_free function. Strings returned through char** are owned by the
 * caller and released with clm_string_free. Trained models are immutable
 * once created, so scoring calls may run concurrently on one model.
 */

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum clm_status {
  CLM_OK = 0,
  CLM_E_INVALID = 1,  /* bad argument, config value, or input shape */
  CLM_E_PARSE = 2,    /* malformed text input: trees, CSV, checkpoints */
  CLM_E_IO = 3,       /* file cannot be opened, read, or written */
  CLM_E_DECODE = 4,   /* action sequence invalid or beam search died */
  CLM_E_INTERNAL = 5
} clm_status;

/* message of this thread's most recent failing call; never NULL */
const char* clm_last_error(void);
const char* clm_version(void);

void clm_string_free(char* s);
void clm_doubles_free(double* p);

/* ---- trees and treebanks ---- */

typedef struct clm_tree clm_tree;

clm_status clm_tree_parse(const char* text, clm_tree** out);
clm_status clm_tree_serialize(const clm_tree* tree, char** out);
/* relabels direct conjuncts of coordinated NPs as NP-COORD;
 * language selects the coordinator word list (en: and/or, fr: et/ou) */
clm_status clm_tree_to_coord_annotation(const clm_tree* tree, const char* language,
                                        clm_tree** out);
void clm_tree_free(clm_tree* tree);

/* whole-file version of the coordination relabeling, one tree per line */
clm_status clm_transform_treebank(const char* in_path, const char* language,
                                  const char* out_path);

/* Agreement-pattern frequency table over coordinated subjects, written as
 * CSV. mode is "number" or "gender". The lexicon classifies leaves by
 * surface form; with a NULL lexicon_path, English falls back to classifying
 * by part-of-speech tag (gender mode always needs a lexicon). Diagnostic
 * counts go to the registered logger. */
clm_status clm_corpus_stats(const char* treebank_path, const char* language, const char* mode,
                            const char* lexicon_path, const char* out_csv_path);

/* ---- models ---- */

typedef struct clm_model clm_model;

/* config: "key = value" pairs separated by newlines or semicolons; '#'
 * starts a comment. Keys for both trainers: dim, layers, epochs, lr,
 * lr_decay, clip, min_freq, seed. Syntax training adds max_open_nts,
 * max_consec_struct, strip_preterminals (0/1). Unknown keys are errors.
 * seed is required. */
clm_status clm_train_word_lm(const char* corpus_path, const char* config, clm_model** out);
/* variant: "action" (flat LSTM over the linearized tree) or "rnng" */
clm_status clm_train_syntax_lm(const char* treebank_path, const char* variant,
                               const char* config, clm_model** out);

clm_status clm_model_save(const clm_model* model, const char* path);
clm_status clm_model_load(const char* path, clm_model** out);
/* "word", "action", or "rnng" */
const char* clm_model_variant(const clm_model* model);
void clm_model_free(clm_model* model);

/* ---- scoring ---- */

typedef struct clm_beam_params {
  int action_beam;   /* hypotheses kept per expansion round */
  int word_beam;     /* hypotheses kept at each word boundary */
  int fast_track;    /* below-cut word advances rescued per round */
  int struct_budget; /* expansion rounds between words */
} clm_beam_params;

/* Per-token surprisal (bits) of a whitespace-tokenized sentence. Word models
 * take beam == NULL; syntax models marginalize over partial parses with the
 * given beam. *out_bits gets a malloc'd array of *out_n doubles. */
clm_status clm_surprisal_profile(const clm_model* model, const char* sentence,
                                 const clm_beam_params* beam, double** out_bits,
                                 size_t* out_n);

/* total bits of the continuation given the prefix, same beam convention */
clm_status clm_continuation_surprisal(const clm_model* model, const char* prefix,
                                      const char* continuation, const clm_beam_params* beam,
                                      double* out_bits);

/* ---- experiment pipeline ---- */

/* experiments: comma-separated subset of exp1_number, exp1_gender,
 * exp2_number, exp2_gender, exp3_number, exp3_gender, exp4, or "all" for
 * every suite defined for the language. items = 0 keeps each suite's
 * default count. */
clm_status clm_generate_stimuli(const char* lexicon_path, const char* language,
                                const char* experiments, int items, const char* out_csv_path);

/* Scores every stimulus continuation; one CSV row per continuation token.
 * workers parallelizes across items without changing output order. */
clm_status clm_eval_stimuli(const clm_model* model, const char* stimuli_csv_path,
                            const clm_beam_params* beam, int workers,
                            const char* out_csv_path);

/* Expectation summaries (means with 95% t intervals), behavior
 * classification and conjunct-weight fits where the condition sets allow,
 * and figure-ready plot data. Either output path may be NULL to skip it. */
clm_status clm_analyze(const char* eval_csv_path, const char* summary_csv_path,
                       const char* plot_json_path);

/* ---- logging ---- */

typedef void (*clm_log_fn)(const char* line, void* user);
/* receives training epoch lines and corpus-stats diagnostics; NULL silences */
void clm_set_logger(clm_log_fn fn, void* user);

#ifdef __cplusplus
}
#endif

#endif
