#include "checkpoint.h"

#include <charconv>
#include <fstream>
#include <sstream>

#include "errors.h"

namespace coordlm {

namespace {

constexpr const char* kMagic = "coordlm-checkpoint v1";

std::string shortest(double x) {
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, r.ptr);
}

void write_params(std::ostream& out, const ParamStore& ps) {
  out << "params " << ps.all().size() << "\n";
  for (const auto& p : ps.all()) {
    out << "param " << p->name << " " << p->rows() << " " << p->cols() << "\n";
    for (int r = 0; r < p->rows(); ++r) {
      for (int c = 0; c < p->cols(); ++c) {
        if (c) out << ' ';
        out << shortest(p->value(r, c));
      }
      out << '\n';
    }
  }
}

void write_vocab(std::ostream& out, const Vocabulary& v) {
  out << "vocab " << v.size() << "\n";
  for (const auto& w : v.words()) out << w << "\n";
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  return out;
}

void finish(std::ofstream& out, const std::string& path) {
  out << "end\n";
  if (!out.good()) throw IoError("write failed for " + path);
}

// Line-oriented reader with position-tagged errors.
class Reader {
 public:
  explicit Reader(const std::string& path) : path_(path), in_(path) {
    if (!in_) throw IoError("cannot read " + path);
  }

  std::string line() {
    std::string s;
    if (!std::getline(in_, s)) fail("unexpected end of file");
    if (!s.empty() && s.back() == '\r') s.pop_back();
    ++lineno_;
    return s;
  }

  // "key v1 v2 ..." with an exact key and field count
  std::vector<std::string> fields(const std::string& key, int count) {
    std::string s = line();
    std::istringstream iss(s);
    std::string head;
    iss >> head;
    if (head != key) fail("expected \"" + key + "\" line, got \"" + s + "\"");
    std::vector<std::string> out;
    std::string f;
    while (iss >> f) out.push_back(f);
    if (static_cast<int>(out.size()) != count)
      fail("\"" + key + "\" line needs " + std::to_string(count) + " field(s)");
    return out;
  }

  long integer(const std::string& s) {
    long v = 0;
    auto r = std::from_chars(s.data(), s.data() + s.size(), v);
    if (r.ec != std::errc() || r.ptr != s.data() + s.size()) fail("bad integer \"" + s + "\"");
    return v;
  }

  // only blank lines may follow the end marker
  bool at_end() {
    std::string s;
    while (std::getline(in_, s)) {
      ++lineno_;
      if (!s.empty() && s.back() == '\r') s.pop_back();
      if (!s.empty()) return false;
    }
    return true;
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(path_ + ":" + std::to_string(lineno_) + ": " + msg);
  }

  int lineno() const { return lineno_; }

 private:
  std::string path_;
  std::ifstream in_;
  int lineno_ = 0;
};

void read_params(Reader& in, ParamStore& ps) {
  long n = in.integer(in.fields("params", 1)[0]);
  if (n != static_cast<long>(ps.all().size()))
    in.fail("checkpoint holds " + std::to_string(n) + " parameters, model expects " +
            std::to_string(ps.all().size()));
  for (long i = 0; i < n; ++i) {
    auto f = in.fields("param", 3);
    Param* p = ps.find(f[0]);
    if (!p) in.fail("unknown parameter \"" + f[0] + "\"");
    long rows = in.integer(f[1]), cols = in.integer(f[2]);
    if (rows != p->rows() || cols != p->cols())
      in.fail("parameter " + f[0] + " is " + f[1] + "x" + f[2] + ", model expects " +
              std::to_string(p->rows()) + "x" + std::to_string(p->cols()));
    for (long r = 0; r < rows; ++r) {
      std::string row = in.line();
      const char* ptr = row.data();
      const char* end = row.data() + row.size();
      for (long c = 0; c < cols; ++c) {
        while (ptr < end && *ptr == ' ') ++ptr;
        double v = 0.0;
        auto res = std::from_chars(ptr, end, v);
        if (res.ec != std::errc())
          in.fail("bad value in parameter " + f[0] + " row " + std::to_string(r));
        ptr = res.ptr;
        p->value(r, c) = v;
      }
      while (ptr < end && *ptr == ' ') ++ptr;
      if (ptr != end) in.fail("trailing data in parameter " + f[0] + " row " + std::to_string(r));
    }
  }
}

Vocabulary read_vocab(Reader& in) {
  long n = in.integer(in.fields("vocab", 1)[0]);
  if (n < 2) in.fail("vocabulary needs the two reserved entries");
  std::vector<std::string> words;
  words.reserve(n);
  for (long i = 0; i < n; ++i) words.push_back(in.line());
  try {
    return Vocabulary::from_words(std::move(words));
  } catch (const std::invalid_argument& e) {
    in.fail(e.what());
  }
}

}  // namespace

void save_checkpoint(const WordLm& m, const std::string& path) {
  auto out = open_out(path);
  out << kMagic << "\n";
  out << "variant word\n";
  out << "dim " << m.dim() << "\n";
  out << "layers " << m.layers() << "\n";
  write_vocab(out, m.vocab());
  write_params(out, m.params());
  finish(out, path);
}

void save_checkpoint(const SyntaxLm& m, const std::string& path) {
  auto out = open_out(path);
  out << kMagic << "\n";
  out << "variant " << (m.variant() == SyntaxLm::Variant::kRnng ? "rnng" : "action") << "\n";
  out << "dim " << m.dim() << "\n";
  out << "layers " << m.layers() << "\n";
  out << "limits " << m.limits().max_open_nts << " " << m.limits().max_consec_struct << "\n";
  out << "nts " << m.actions().nts().size() << "\n";
  for (const auto& l : m.actions().nts()) out << l << "\n";
  write_vocab(out, m.actions().vocab());
  write_params(out, m.params());
  finish(out, path);
}

LoadedModel load_checkpoint(const std::string& path) {
  Reader in(path);
  if (in.line() != kMagic) in.fail("unsupported checkpoint version (expected \"" +
                                   std::string(kMagic) + "\")");
  std::string variant = in.fields("variant", 1)[0];
  int dim = static_cast<int>(in.integer(in.fields("dim", 1)[0]));
  int layers = static_cast<int>(in.integer(in.fields("layers", 1)[0]));
  LoadedModel out;
  if (variant == "word") {
    Vocabulary vocab = read_vocab(in);
    out.word = std::make_unique<WordLm>(std::move(vocab), dim, layers, 0);
    read_params(in, out.word->params());
  } else if (variant == "action" || variant == "rnng") {
    auto lf = in.fields("limits", 2);
    StructuralLimits limits;
    limits.max_open_nts = static_cast<int>(in.integer(lf[0]));
    limits.max_consec_struct = static_cast<int>(in.integer(lf[1]));
    long nnt = in.integer(in.fields("nts", 1)[0]);
    std::vector<std::string> nts;
    nts.reserve(nnt);
    for (long i = 0; i < nnt; ++i) nts.push_back(in.line());
    Vocabulary vocab = read_vocab(in);
    ActionSpace space(std::move(nts), std::move(vocab));
    if (variant == "rnng")
      out.syntax = std::make_unique<RnngLm>(std::move(space), limits, dim, layers, 0);
    else
      out.syntax = std::make_unique<ActionLstmLm>(std::move(space), limits, dim, layers, 0);
    read_params(in, out.syntax->params());
  } else {
    in.fail("unknown variant \"" + variant + "\"");
  }
  if (in.line() != "end") in.fail("missing \"end\" marker");
  if (!in.at_end()) in.fail("trailing data after \"end\" marker");
  return out;
}

}  // namespace coordlm
