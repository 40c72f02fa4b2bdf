#include "coordlm.h"

#include <charconv>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <mutex>
#include <sstream>

#include "agreement_patterns.h"
#include "analysis.h"
#include "beam.h"
#include "checkpoint.h"
#include "errors.h"
#include "eval.h"
#include "stimuli.h"
#include "syntax_lm.h"
#include "tree.h"
#include "word_lm.h"

using namespace coordlm;

extern "C" {
struct clm_tree {
  Tree tree;
};
struct clm_model {
  std::unique_ptr<WordLm> word;
  std::unique_ptr<SyntaxLm> syntax;
};
}

namespace {

thread_local std::string g_last_error = "no error";

void set_error(const std::string& msg) { g_last_error = msg; }

std::mutex g_log_mu;
clm_log_fn g_log_fn = nullptr;
void* g_log_user = nullptr;

void emit_log(const std::string& line) {
  std::lock_guard<std::mutex> lock(g_log_mu);
  if (g_log_fn) g_log_fn(line.c_str(), g_log_user);
}

LogSink api_log_sink() {
  return [](const std::string& line) { emit_log(line); };
}

template <class F>
clm_status wrap(F&& body) {
  try {
    body();
    return CLM_OK;
  } catch (const ParseError& e) {
    set_error(e.what());
    return CLM_E_PARSE;
  } catch (const IoError& e) {
    set_error(e.what());
    return CLM_E_IO;
  } catch (const DecodeError& e) {
    set_error(e.what());
    return CLM_E_DECODE;
  } catch (const std::invalid_argument& e) {
    set_error(e.what());
    return CLM_E_INVALID;
  } catch (const std::exception& e) {
    set_error(e.what());
    return CLM_E_INTERNAL;
  } catch (...) {
    set_error("unknown error");
    return CLM_E_INTERNAL;
  }
}

void need(const void* p, const char* name) {
  if (!p) throw std::invalid_argument(std::string("null argument: ") + name);
}

char* copy_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

// "key = value" pairs split on newlines and semicolons, '#' comments
std::vector<std::pair<std::string, std::string>> parse_kv(const std::string& text) {
  std::vector<std::pair<std::string, std::string>> out;
  std::string piece;
  auto flush = [&] {
    std::string line = trim(piece);
    piece.clear();
    if (line.empty() || line[0] == '#') return;
    size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config entry \"" + line + "\" is not key = value");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw std::invalid_argument("config entry \"" + line + "\" has no key");
    out.emplace_back(key, value);
  };
  for (char c : text) {
    if (c == '\n' || c == ';') flush();
    else piece += c;
  }
  flush();
  return out;
}

long to_long(const std::string& key, const std::string& value) {
  long v = 0;
  auto r = std::from_chars(value.data(), value.data() + value.size(), v);
  if (r.ec != std::errc() || r.ptr != value.data() + value.size())
    throw std::invalid_argument("config key " + key + ": bad integer \"" + value + "\"");
  return v;
}

double to_dbl(const std::string& key, const std::string& value) {
  try {
    size_t pos = 0;
    double v = std::stod(value, &pos);
    if (pos != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument("config key " + key + ": bad number \"" + value + "\"");
  }
}

struct ParsedTrainConfig {
  TrainConfig base;
  StructuralLimits limits;
  bool strip_preterminals = true;
};

ParsedTrainConfig parse_train_config(const char* config, bool syntax) {
  ParsedTrainConfig out;
  bool have_seed = false;
  for (const auto& [key, value] : parse_kv(config ? config : "")) {
    if (key == "dim") out.base.dim = static_cast<int>(to_long(key, value));
    else if (key == "layers") out.base.layers = static_cast<int>(to_long(key, value));
    else if (key == "epochs") out.base.epochs = static_cast<int>(to_long(key, value));
    else if (key == "lr") out.base.lr = to_dbl(key, value);
    else if (key == "lr_decay") out.base.lr_decay = to_dbl(key, value);
    else if (key == "clip") out.base.clip = to_dbl(key, value);
    else if (key == "min_freq") out.base.min_freq = static_cast<int>(to_long(key, value));
    else if (key == "seed") {
      out.base.seed = static_cast<uint64_t>(to_long(key, value));
      have_seed = true;
    } else if (syntax && key == "max_open_nts")
      out.limits.max_open_nts = static_cast<int>(to_long(key, value));
    else if (syntax && key == "max_consec_struct")
      out.limits.max_consec_struct = static_cast<int>(to_long(key, value));
    else if (syntax && key == "strip_preterminals")
      out.strip_preterminals = to_long(key, value) != 0;
    else
      throw std::invalid_argument("unknown config key \"" + key + "\"");
  }
  if (!have_seed) throw std::invalid_argument("config must set seed");
  return out;
}

BeamConfig to_beam_config(const clm_beam_params* p) {
  BeamConfig cfg;
  cfg.action_beam = p->action_beam;
  cfg.word_beam = p->word_beam;
  cfg.fast_track = p->fast_track;
  cfg.struct_budget = p->struct_budget;
  cfg.validate();
  return cfg;
}

const WordLm& word_model(const clm_model* m) {
  if (!m->word)
    throw std::invalid_argument("operation needs a word model (pass beam parameters "
                                "for syntax models)");
  return *m->word;
}

const SyntaxLm& syntax_model(const clm_model* m) {
  if (!m->syntax)
    throw std::invalid_argument("operation needs a syntax model (word models take no "
                                "beam parameters)");
  return *m->syntax;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  return out;
}

void finish_output(std::ofstream& out, const std::string& path) {
  out.flush();
  if (!out.good()) throw IoError("write failed for " + path);
}

std::vector<StimulusItem> generate_suite(const Lexicon& lex, const std::string& language,
                                         const std::string& tag, int items) {
  if (tag == "exp1_number") return generate_exp1(lex, language, "number", items);
  if (tag == "exp1_gender") return generate_exp1(lex, language, "gender", items);
  if (tag == "exp2_number") return generate_exp2(lex, language, "number", items);
  if (tag == "exp2_gender") return generate_exp2(lex, language, "gender", items);
  if (tag == "exp3_number") return generate_exp3(lex, language, "number", items);
  if (tag == "exp3_gender") return generate_exp3(lex, language, "gender", items);
  if (tag == "exp4") return generate_exp4(lex, language, items);
  throw std::invalid_argument("unknown experiment \"" + tag + "\"");
}

}  // namespace

extern "C" {

const char* clm_last_error(void) { return g_last_error.c_str(); }

const char* clm_version(void) { return "0.1.0"; }

void clm_string_free(char* s) { std::free(s); }

void clm_doubles_free(double* p) { std::free(p); }

void clm_set_logger(clm_log_fn fn, void* user) {
  std::lock_guard<std::mutex> lock(g_log_mu);
  g_log_fn = fn;
  g_log_user = user;
}

clm_status clm_tree_parse(const char* text, clm_tree** out) {
  return wrap([&] {
    need(text, "text");
    need(out, "out");
    *out = new clm_tree{parse_bracketed(text)};
  });
}

clm_status clm_tree_serialize(const clm_tree* tree, char** out) {
  return wrap([&] {
    need(tree, "tree");
    need(out, "out");
    *out = copy_string(serialize(tree->tree));
  });
}

clm_status clm_tree_to_coord_annotation(const clm_tree* tree, const char* language,
                                        clm_tree** out) {
  return wrap([&] {
    need(tree, "tree");
    need(language, "language");
    need(out, "out");
    *out = new clm_tree{to_coord_annotation(tree->tree, coordinators_for(language))};
  });
}

void clm_tree_free(clm_tree* tree) { delete tree; }

clm_status clm_transform_treebank(const char* in_path, const char* language,
                                  const char* out_path) {
  return wrap([&] {
    need(in_path, "in_path");
    need(language, "language");
    need(out_path, "out_path");
    auto coords = coordinators_for(language);
    std::vector<Tree> bank = read_treebank(in_path);
    for (auto& t : bank) t = to_coord_annotation(t, coords);
    write_treebank(bank, out_path);
  });
}

clm_status clm_corpus_stats(const char* treebank_path, const char* language, const char* mode,
                            const char* lexicon_path, const char* out_csv_path) {
  return wrap([&] {
    need(treebank_path, "treebank_path");
    need(language, "language");
    need(mode, "mode");
    need(out_csv_path, "out_csv_path");
    PatternMode pm;
    if (std::string(mode) == "number") pm = PatternMode::kNumber;
    else if (std::string(mode) == "gender") pm = PatternMode::kGender;
    else throw std::invalid_argument("mode must be number or gender");
    FeatureTagger tagger;
    if (lexicon_path) {
      tagger = lexicon_feature_tagger(Lexicon::read_tsv(lexicon_path), language);
    } else if (std::string(language) == "en" && pm == PatternMode::kNumber) {
      tagger = english_tag_tagger();
    } else {
      throw std::invalid_argument("this language/mode needs a lexicon for leaf tagging");
    }
    std::vector<Tree> bank = read_treebank(treebank_path);
    AgreementPatternTable table =
        count_agreement_patterns(bank, tagger, coordinators_for(language), pm);
    auto out = open_output(out_csv_path);
    table.write_csv(out);
    finish_output(out, out_csv_path);
    const auto& d = table.diagnostics;
    emit_log("coordinated subjects " + std::to_string(d.coord_np_subjects) +
             " counted " + std::to_string(table.total()) + " skipped_multi_coord " +
             std::to_string(d.skipped_multi_coord) + " skipped_conjunct " +
             std::to_string(d.skipped_conjunct) + " skipped_no_predicate " +
             std::to_string(d.skipped_no_predicate));
  });
}

clm_status clm_train_word_lm(const char* corpus_path, const char* config, clm_model** out) {
  return wrap([&] {
    need(corpus_path, "corpus_path");
    need(out, "out");
    ParsedTrainConfig cfg = parse_train_config(config, false);
    auto corpus = read_text_corpus(corpus_path);
    auto trained = train_word_lm(corpus, cfg.base, api_log_sink());
    auto* m = new clm_model;
    m->word = std::move(trained.model);
    *out = m;
  });
}

clm_status clm_train_syntax_lm(const char* treebank_path, const char* variant,
                               const char* config, clm_model** out) {
  return wrap([&] {
    need(treebank_path, "treebank_path");
    need(variant, "variant");
    need(out, "out");
    SyntaxLm::Variant v;
    if (std::string(variant) == "action") v = SyntaxLm::Variant::kActionLstm;
    else if (std::string(variant) == "rnng") v = SyntaxLm::Variant::kRnng;
    else throw std::invalid_argument("variant must be action or rnng");
    ParsedTrainConfig pc = parse_train_config(config, true);
    SyntaxTrainConfig cfg;
    cfg.base = pc.base;
    cfg.limits = pc.limits;
    cfg.strip_preterminals = pc.strip_preterminals;
    auto bank = read_treebank(treebank_path);
    auto trained = train_syntax_lm(bank, v, cfg, api_log_sink());
    auto* m = new clm_model;
    m->syntax = std::move(trained.model);
    *out = m;
  });
}

clm_status clm_model_save(const clm_model* model, const char* path) {
  return wrap([&] {
    need(model, "model");
    need(path, "path");
    if (model->word) save_checkpoint(*model->word, path);
    else save_checkpoint(*model->syntax, path);
  });
}

clm_status clm_model_load(const char* path, clm_model** out) {
  return wrap([&] {
    need(path, "path");
    need(out, "out");
    LoadedModel loaded = load_checkpoint(path);
    auto* m = new clm_model;
    m->word = std::move(loaded.word);
    m->syntax = std::move(loaded.syntax);
    *out = m;
  });
}

const char* clm_model_variant(const clm_model* model) {
  if (!model) return "";
  if (model->word) return "word";
  return model->syntax->variant() == SyntaxLm::Variant::kRnng ? "rnng" : "action";
}

void clm_model_free(clm_model* model) { delete model; }

clm_status clm_surprisal_profile(const clm_model* model, const char* sentence,
                                 const clm_beam_params* beam, double** out_bits,
                                 size_t* out_n) {
  return wrap([&] {
    need(model, "model");
    need(sentence, "sentence");
    need(out_bits, "out_bits");
    need(out_n, "out_n");
    std::vector<std::string> tokens = split_tokens(sentence);
    SurprisalProfile prof;
    if (beam) prof = word_sync_beam(syntax_model(model), tokens, to_beam_config(beam)).profile;
    else prof = word_model(model).surprisal_profile(tokens);
    double* bits = static_cast<double*>(std::malloc(sizeof(double) * prof.bits.size()));
    if (!bits) throw std::bad_alloc();
    for (size_t i = 0; i < prof.bits.size(); ++i) bits[i] = prof.bits[i];
    *out_bits = bits;
    *out_n = prof.bits.size();
  });
}

clm_status clm_continuation_surprisal(const clm_model* model, const char* prefix,
                                      const char* continuation, const clm_beam_params* beam,
                                      double* out_bits) {
  return wrap([&] {
    need(model, "model");
    need(prefix, "prefix");
    need(continuation, "continuation");
    need(out_bits, "out_bits");
    std::vector<std::string> pre = split_tokens(prefix);
    std::vector<std::string> cont = split_tokens(continuation);
    if (cont.empty()) throw std::invalid_argument("empty continuation");
    if (beam) {
      std::vector<std::string> all = pre;
      all.insert(all.end(), cont.begin(), cont.end());
      DecodeResult dec = word_sync_beam(syntax_model(model), all, to_beam_config(beam));
      double total = 0.0;
      for (size_t i = pre.size(); i < all.size(); ++i) total += dec.profile.bits[i];
      *out_bits = total;
    } else {
      *out_bits = word_model(model).continuation_surprisal(pre, cont);
    }
  });
}

clm_status clm_generate_stimuli(const char* lexicon_path, const char* language,
                                const char* experiments, int items, const char* out_csv_path) {
  return wrap([&] {
    need(lexicon_path, "lexicon_path");
    need(language, "language");
    need(experiments, "experiments");
    need(out_csv_path, "out_csv_path");
    Lexicon lex = Lexicon::read_tsv(lexicon_path);
    std::string lang(language);
    std::vector<std::string> tags;
    std::string req(experiments);
    if (req == "all" || req.empty()) {
      tags = {"exp1_number", "exp2_number", "exp3_number", "exp4"};
      if (lang == "fr") {
        tags.insert(tags.begin() + 1, "exp1_gender");
        tags.insert(tags.begin() + 3, "exp2_gender");
        tags.insert(tags.begin() + 5, "exp3_gender");
      }
    } else {
      std::string piece;
      std::istringstream iss(req);
      while (std::getline(iss, piece, ',')) {
        piece = trim(piece);
        if (!piece.empty()) tags.push_back(piece);
      }
      if (tags.empty()) throw std::invalid_argument("no experiments requested");
    }
    std::vector<StimulusItem> all;
    for (const auto& tag : tags) {
      auto suite = generate_suite(lex, lang, tag, items);
      all.insert(all.end(), suite.begin(), suite.end());
    }
    auto out = open_output(out_csv_path);
    write_stimulus_csv(out, all);
    finish_output(out, out_csv_path);
  });
}

clm_status clm_eval_stimuli(const clm_model* model, const char* stimuli_csv_path,
                            const clm_beam_params* beam, int workers,
                            const char* out_csv_path) {
  return wrap([&] {
    need(model, "model");
    need(stimuli_csv_path, "stimuli_csv_path");
    need(out_csv_path, "out_csv_path");
    std::vector<StimulusItem> items = read_stimulus_csv(stimuli_csv_path);
    auto out = open_output(out_csv_path);
    if (beam) eval_stimuli_beam(syntax_model(model), to_beam_config(beam), items, out, workers);
    else eval_stimuli_word(word_model(model), items, out, workers);
    finish_output(out, out_csv_path);
  });
}

clm_status clm_analyze(const char* eval_csv_path, const char* summary_csv_path,
                       const char* plot_json_path) {
  return wrap([&] {
    need(eval_csv_path, "eval_csv_path");
    CsvTable eval = read_csv(eval_csv_path);
    AnalysisResult result = analyze_eval(eval);
    if (summary_csv_path) {
      auto out = open_output(summary_csv_path);
      write_summary_csv(out, result.summaries);
      finish_output(out, summary_csv_path);
    }
    if (plot_json_path) {
      auto out = open_output(plot_json_path);
      out << plot_data_json(result);
      finish_output(out, plot_json_path);
    }
  });
}

}  // extern "C"
