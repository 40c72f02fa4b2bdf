#include <CLI11.hpp>
#include <coordlm.h>
#include <json.hpp>

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;

namespace {

struct CliError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

const char* status_name(clm_status s) {
  switch (s) {
    case CLM_OK: return "ok";
    case CLM_E_INVALID: return "invalid";
    case CLM_E_PARSE: return "parse";
    case CLM_E_IO: return "io";
    case CLM_E_DECODE: return "decode";
    default: return "internal";
  }
}

void check(clm_status s) {
  if (s != CLM_OK)
    throw CliError(std::string("(") + status_name(s) + ") " + clm_last_error());
}

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

// [section] blocks of key = value lines; '#' comments
using ConfigFile = std::map<std::string, std::map<std::string, std::string>>;

ConfigFile read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CliError("cannot read config file " + path);
  ConfigFile cfg;
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    if (t.front() == '[' && t.back() == ']') {
      section = trim(t.substr(1, t.size() - 2));
      if (section.empty()) throw CliError(path + ":" + std::to_string(lineno) + ": empty section");
      continue;
    }
    size_t eq = t.find('=');
    if (eq == std::string::npos)
      throw CliError(path + ":" + std::to_string(lineno) + ": expected key = value");
    std::string key = trim(t.substr(0, eq));
    std::string value = trim(t.substr(eq + 1));
    if (key.empty()) throw CliError(path + ":" + std::to_string(lineno) + ": empty key");
    if (section.empty())
      throw CliError(path + ":" + std::to_string(lineno) + ": key outside any [section]");
    cfg[section][key] = value;
  }
  return cfg;
}

// flags > config file > defaults, with the winning value recorded for the
// run manifest
class Effective {
 public:
  Effective(const ConfigFile* file, std::string section)
      : file_(file), section_(std::move(section)) {}

  std::string get(const CLI::Option* flag, const std::string& key, const std::string& fallback) {
    std::string value = fallback;
    if (file_) {
      auto sec = file_->find(section_);
      if (sec != file_->end()) {
        auto it = sec->second.find(key);
        if (it != sec->second.end()) value = it->second;
      }
    }
    if (flag && flag->count() > 0) value = flag->as<std::string>();
    values_[key] = value;
    return value;
  }

  long get_long(const CLI::Option* flag, const std::string& key, const std::string& fallback) {
    std::string v = get(flag, key, fallback);
    try {
      size_t pos = 0;
      long out = std::stol(v, &pos);
      if (pos != v.size()) throw std::invalid_argument(v);
      return out;
    } catch (const std::exception&) {
      throw CliError("option " + key + ": bad integer \"" + v + "\"");
    }
  }

  const std::map<std::string, std::string>& values() const { return values_; }

 private:
  const ConfigFile* file_;
  std::string section_;
  std::map<std::string, std::string> values_;
};

uint64_t fnv1a64(const char* data, size_t n) {
  uint64_t h = 1469598103934665603ULL;
  for (size_t i = 0; i < n; ++i) {
    h ^= static_cast<unsigned char>(data[i]);
    h *= 1099511628211ULL;
  }
  return h;
}

std::string hex64(uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string hash_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CliError("cannot read input " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  std::string bytes = ss.str();
  return hex64(fnv1a64(bytes.data(), bytes.size()));
}

std::string timestamp() {
  auto now = std::chrono::system_clock::now();
  std::time_t t = std::chrono::system_clock::to_time_t(now);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  return buf;
}

// Run directory with the shared artifacts: manifest.json for machine readers
// and run.log for humans (timestamps live only in the log).
class RunDir {
 public:
  RunDir(const std::string& dir, const std::string& command) : dir_(dir), command_(command) {
    if (dir_.empty()) throw CliError("--out is required");
    if (fs::exists(dir_)) {
      if (!fs::is_directory(dir_)) throw CliError(dir + " exists and is not a directory");
      if (!fs::is_empty(dir_)) throw CliError("output directory " + dir + " is not empty");
    } else {
      fs::create_directories(dir_);
    }
    log_.open(path("run.log"));
    if (!log_) throw CliError("cannot write " + path("run.log"));
    log("start " + command_);
  }

  std::string path(const std::string& name) const { return (fs::path(dir_) / name).string(); }

  void log(const std::string& line) {
    log_ << timestamp() << " " << line << "\n";
    log_.flush();
  }

  void add_input(const std::string& name, const std::string& p) {
    inputs_[name] = {{"path", p}, {"fnv1a64", hash_file(p)}};
  }

  std::string add_output(const std::string& name) {
    outputs_.push_back(name);
    return path(name);
  }

  void finish(std::map<std::string, std::string> effective) {
    // input files appear under inputs with a content hash, so the config map
    // (and its hash) stays stable when the same data is read from elsewhere
    for (auto it = inputs_.begin(); it != inputs_.end(); ++it) effective.erase(it.key());
    nlohmann::json m;
    m["command"] = command_;
    m["config"] = effective;
    std::string flat;
    for (const auto& [k, v] : effective) flat += k + "=" + v + "\n";
    m["config_hash"] = hex64(fnv1a64(flat.data(), flat.size()));
    m["inputs"] = inputs_;
    m["outputs"] = outputs_;
    m["versions"] = {{"coordlm", clm_version()}};
    std::ofstream out(path("manifest.json"));
    out << m.dump(2) << "\n";
    if (!out.good()) throw CliError("cannot write " + path("manifest.json"));
    log("done " + command_);
    for (const auto& o : outputs_) std::cout << path(o) << "\n";
  }

  static RunDir* active;

 private:
  std::string dir_;
  std::string command_;
  std::ofstream log_;
  nlohmann::json inputs_ = nlohmann::json::object();
  std::vector<std::string> outputs_;
};

RunDir* RunDir::active = nullptr;

void forward_log(const char* line, void*) {
  if (RunDir::active) RunDir::active->log(line);
}

struct BeamFlags {
  CLI::Option *action = nullptr, *word = nullptr, *fast = nullptr, *budget = nullptr;

  void add(CLI::App* cmd) {
    action = cmd->add_option("--beam-actions", "hypotheses kept per expansion round");
    word = cmd->add_option("--beam-words", "hypotheses kept at each word boundary");
    fast = cmd->add_option("--beam-fast-track", "below-cut word advances rescued per round");
    budget = cmd->add_option("--beam-budget", "expansion rounds between words");
  }

  clm_beam_params resolve(Effective& eff) const {
    clm_beam_params p;
    p.action_beam = static_cast<int>(eff.get_long(action, "action_beam", "100"));
    p.word_beam = static_cast<int>(eff.get_long(word, "word_beam", "10"));
    p.fast_track = static_cast<int>(eff.get_long(fast, "fast_track", "5"));
    p.struct_budget = static_cast<int>(eff.get_long(budget, "struct_budget", "8"));
    return p;
  }
};

struct ModelHandle {
  clm_model* m = nullptr;
  ~ModelHandle() { clm_model_free(m); }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"coordination-agreement LM toolkit"};
  app.require_subcommand(1);

  std::string config_path, out_dir;
  app.add_option("--config", config_path, "config file ([section] key = value)");
  auto* out_flag = app.add_option("--out", out_dir, "fresh run directory for all artifacts");
  auto* seed_flag = app.add_option("--seed", "training seed (overrides [train] seed)");
  auto* workers_flag = app.add_option("--workers", "parallel scoring workers (eval)");

  auto fall = [](CLI::App* sub) {
    sub->fallthrough();
    return sub;
  };

  auto* train = fall(app.add_subcommand("train", "train a model and save its checkpoint"));
  auto* t_variant = train->add_option("--variant", "word | action | rnng");
  auto* t_corpus = train->add_option("--corpus", "tokenized text, one sentence per line");
  auto* t_treebank = train->add_option("--treebank", "bracketed trees, one per line");
  auto* t_dim = train->add_option("--dim", "hidden/embedding width");
  auto* t_layers = train->add_option("--layers", "LSTM layers");
  auto* t_epochs = train->add_option("--epochs", "training epochs");
  auto* t_lr = train->add_option("--lr", "learning rate");
  auto* t_lr_decay = train->add_option("--lr-decay", "per-epoch learning-rate multiplier");
  auto* t_clip = train->add_option("--clip", "gradient-norm ceiling");
  auto* t_min_freq = train->add_option("--min-freq", "vocabulary frequency threshold");
  auto* t_open = train->add_option("--max-open-nts", "open-constituent ceiling");
  auto* t_consec = train->add_option("--max-consec-struct", "consecutive structural-action cap");
  auto* t_strip = train->add_option("--strip-preterminals", "1 to drop tag nodes before training");

  auto* gen = fall(app.add_subcommand("gen-stimuli", "generate the agreement stimulus suites"));
  auto* g_lexicon = gen->add_option("--lexicon", "inflection table TSV");
  auto* g_language = gen->add_option("--language", "en | fr");
  auto* g_experiments = gen->add_option("--experiments", "comma list or all");
  auto* g_items = gen->add_option("--items", "items per suite (0 = default)");

  auto* eval = fall(app.add_subcommand("eval", "score stimulus continuations with a checkpoint"));
  auto* e_model = eval->add_option("--model", "checkpoint path");
  auto* e_stimuli = eval->add_option("--stimuli", "stimulus CSV path");
  BeamFlags e_beam;
  e_beam.add(eval);

  auto* analyze = fall(app.add_subcommand("analyze", "summarize an eval CSV"));
  auto* a_eval = analyze->add_option("--eval", "eval CSV path");

  auto* stats = fall(app.add_subcommand("corpus-stats", "agreement-pattern frequencies of a treebank"));
  auto* s_treebank = stats->add_option("--treebank", "bracketed trees, one per line");
  auto* s_language = stats->add_option("--language", "en | fr");
  auto* s_mode = stats->add_option("--mode", "number | gender");
  auto* s_lexicon = stats->add_option("--lexicon", "lexicon TSV for leaf tagging");

  auto* transform = fall(app.add_subcommand("transform", "relabel conjunct NPs as NP-COORD"));
  auto* x_treebank = transform->add_option("--treebank", "bracketed trees, one per line");
  auto* x_language = transform->add_option("--language", "en | fr");

  CLI11_PARSE(app, argc, argv);

  try {
    ConfigFile file;
    const ConfigFile* filep = nullptr;
    if (!config_path.empty()) {
      file = read_config_file(config_path);
      filep = &file;
    }
    auto out_of = [&](const std::string& section) {
      Effective eff(filep, section);
      return eff.get(out_flag, "out", out_dir);
    };

    if (*train) {
      Effective eff(filep, "train");
      std::string dir = out_of("train");
      RunDir run(dir, "train");
      RunDir::active = &run;
      clm_set_logger(forward_log, nullptr);

      std::string variant = eff.get(t_variant, "variant", "word");
      std::string corpus = eff.get(t_corpus, "corpus", "");
      std::string treebank = eff.get(t_treebank, "treebank", "");
      std::string seed = eff.get(seed_flag, "seed", "");
      if (seed.empty()) throw CliError("train needs a seed (--seed or [train] seed)");
      std::ostringstream cfg;
      cfg << "dim = " << eff.get(t_dim, "dim", "64") << "\n";
      cfg << "layers = " << eff.get(t_layers, "layers", "2") << "\n";
      cfg << "epochs = " << eff.get(t_epochs, "epochs", "5") << "\n";
      cfg << "lr = " << eff.get(t_lr, "lr", "0.1") << "\n";
      cfg << "lr_decay = " << eff.get(t_lr_decay, "lr_decay", "0.9") << "\n";
      cfg << "clip = " << eff.get(t_clip, "clip", "5.0") << "\n";
      cfg << "min_freq = " << eff.get(t_min_freq, "min_freq", "2") << "\n";
      cfg << "seed = " << seed << "\n";

      ModelHandle model;
      if (variant == "word") {
        if (corpus.empty()) throw CliError("variant word needs --corpus");
        run.add_input("corpus", corpus);
        check(clm_train_word_lm(corpus.c_str(), cfg.str().c_str(), &model.m));
      } else if (variant == "action" || variant == "rnng") {
        if (treebank.empty()) throw CliError("variant " + variant + " needs --treebank");
        cfg << "max_open_nts = " << eff.get(t_open, "max_open_nts", "12") << "\n";
        cfg << "max_consec_struct = " << eff.get(t_consec, "max_consec_struct", "8") << "\n";
        cfg << "strip_preterminals = " << eff.get(t_strip, "strip_preterminals", "1") << "\n";
        run.add_input("treebank", treebank);
        check(clm_train_syntax_lm(treebank.c_str(), variant.c_str(), cfg.str().c_str(),
                                  &model.m));
      } else {
        throw CliError("unknown variant \"" + variant + "\"");
      }
      check(clm_model_save(model.m, run.add_output("model.ckpt").c_str()));
      run.finish(eff.values());
    } else if (*gen) {
      Effective eff(filep, "stimuli");
      RunDir run(out_of("stimuli"), "gen-stimuli");
      RunDir::active = &run;
      std::string lexicon = eff.get(g_lexicon, "lexicon", "");
      if (lexicon.empty()) throw CliError("gen-stimuli needs --lexicon");
      std::string language = eff.get(g_language, "language", "en");
      std::string experiments = eff.get(g_experiments, "experiments", "all");
      long items = eff.get_long(g_items, "items", "0");
      run.add_input("lexicon", lexicon);
      check(clm_generate_stimuli(lexicon.c_str(), language.c_str(), experiments.c_str(),
                                 static_cast<int>(items),
                                 run.add_output("stimuli.csv").c_str()));
      run.finish(eff.values());
    } else if (*eval) {
      Effective eff(filep, "eval");
      Effective beam_eff(filep, "beam");
      RunDir run(out_of("eval"), "eval");
      RunDir::active = &run;
      std::string model_path = eff.get(e_model, "model", "");
      if (model_path.empty()) throw CliError("eval needs --model");
      std::string stimuli = eff.get(e_stimuli, "stimuli", "");
      if (stimuli.empty()) throw CliError("eval needs --stimuli");
      long workers = eff.get_long(workers_flag, "workers", "1");
      run.add_input("model", model_path);
      run.add_input("stimuli", stimuli);
      ModelHandle model;
      check(clm_model_load(model_path.c_str(), &model.m));
      bool syntax = std::string(clm_model_variant(model.m)) != "word";
      clm_beam_params beam = e_beam.resolve(beam_eff);
      check(clm_eval_stimuli(model.m, stimuli.c_str(), syntax ? &beam : nullptr,
                             static_cast<int>(workers), run.add_output("eval.csv").c_str()));
      auto effective = eff.values();
      if (syntax)
        for (const auto& [k, v] : beam_eff.values()) effective["beam." + k] = v;
      run.finish(effective);
    } else if (*analyze) {
      Effective eff(filep, "analyze");
      RunDir run(out_of("analyze"), "analyze");
      RunDir::active = &run;
      std::string eval_csv = eff.get(a_eval, "eval", "");
      if (eval_csv.empty()) throw CliError("analyze needs --eval");
      run.add_input("eval", eval_csv);
      std::string summary = run.add_output("summary.csv");
      std::string plot = run.add_output("plot_data.json");
      check(clm_analyze(eval_csv.c_str(), summary.c_str(), plot.c_str()));
      run.finish(eff.values());
    } else if (*stats) {
      Effective eff(filep, "corpus_stats");
      RunDir run(out_of("corpus_stats"), "corpus-stats");
      RunDir::active = &run;
      clm_set_logger(forward_log, nullptr);
      std::string treebank = eff.get(s_treebank, "treebank", "");
      if (treebank.empty()) throw CliError("corpus-stats needs --treebank");
      std::string language = eff.get(s_language, "language", "en");
      std::string mode = eff.get(s_mode, "mode", "number");
      std::string lexicon = eff.get(s_lexicon, "lexicon", "");
      run.add_input("treebank", treebank);
      if (!lexicon.empty()) run.add_input("lexicon", lexicon);
      check(clm_corpus_stats(treebank.c_str(), language.c_str(), mode.c_str(),
                             lexicon.empty() ? nullptr : lexicon.c_str(),
                             run.add_output("patterns.csv").c_str()));
      run.finish(eff.values());
    } else if (*transform) {
      Effective eff(filep, "transform");
      RunDir run(out_of("transform"), "transform");
      RunDir::active = &run;
      std::string treebank = eff.get(x_treebank, "treebank", "");
      if (treebank.empty()) throw CliError("transform needs --treebank");
      std::string language = eff.get(x_language, "language", "en");
      run.add_input("treebank", treebank);
      check(clm_transform_treebank(treebank.c_str(), language.c_str(),
                                   run.add_output("transformed.trees").c_str()));
      run.finish(eff.values());
    }
  } catch (const std::exception& e) {
    std::cerr << "coordlm: error " << e.what() << "\n";
    RunDir::active = nullptr;
    return 1;
  }
  RunDir::active = nullptr;
  return 0;
}
