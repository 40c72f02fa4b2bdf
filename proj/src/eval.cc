#include "eval.h"

#include <atomic>
#include <exception>
#include <functional>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "csv.h"

namespace coordlm {

namespace {

// Runs job(i) for i in [0, n) across `workers` threads and rethrows the
// first failure. Jobs write into preallocated slots, so output order stays
// the item order no matter how the work interleaves.
void run_indexed(int n, int workers, const std::function<void(int)>& job) {
  if (workers < 1) throw std::invalid_argument("workers must be >= 1");
  if (workers == 1 || n <= 1) {
    for (int i = 0; i < n; ++i) job(i);
    return;
  }
  std::atomic<int> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mu;
  auto loop = [&] {
    for (;;) {
      int i = next.fetch_add(1);
      if (i >= n || failed.load()) return;
      try {
        job(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mu);
        if (!error) error = std::current_exception();
        failed.store(true);
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  int count = std::min(workers, n);
  pool.reserve(count);
  for (int t = 0; t < count; ++t) pool.emplace_back(loop);
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

std::vector<std::string> base_fields(const StimulusItem& it, int position,
                                     const std::string& token, const std::string& cls,
                                     double bits) {
  return {it.experiment, std::to_string(it.item_id), it.condition, std::to_string(position),
          token,         cls,                        it.measure_region, format_double(bits)};
}

}  // namespace

std::vector<std::string> eval_csv_header(bool beam) {
  std::vector<std::string> h = {"experiment", "item_id", "condition",
                                "position",   "token",   "continuation_class",
                                "measure_region", "surprisal_bits"};
  if (beam) {
    h.push_back("beam_Ka");
    h.push_back("beam_Kw");
    h.push_back("mass_bits");
  }
  return h;
}

void eval_stimuli_word(const WordLm& m, const std::vector<StimulusItem>& items,
                       std::ostream& out, int workers) {
  std::vector<std::string> blocks(items.size());
  run_indexed(static_cast<int>(items.size()), workers, [&](int i) {
    const StimulusItem& it = items[i];
    std::vector<std::string> prefix = split_tokens(it.prefix);
    std::ostringstream block;
    for (const auto& cont : it.continuations) {
      std::vector<std::string> cont_tokens = split_tokens(cont.text);
      if (cont_tokens.empty())
        throw std::invalid_argument("empty continuation in " + it.experiment + " item " +
                                    std::to_string(it.item_id));
      std::vector<std::string> all = prefix;
      all.insert(all.end(), cont_tokens.begin(), cont_tokens.end());
      SurprisalProfile prof = m.surprisal_profile(all);
      for (size_t k = 0; k < cont_tokens.size(); ++k) {
        double bits = prof.bits[prefix.size() + k];
        write_csv_row(block, base_fields(it, static_cast<int>(k), cont_tokens[k], cont.cls, bits));
      }
    }
    blocks[i] = block.str();
  });
  write_csv_row(out, eval_csv_header(false));
  for (const auto& b : blocks) out << b;
}

void eval_stimuli_beam(const SyntaxLm& m, const BeamConfig& cfg,
                       const std::vector<StimulusItem>& items, std::ostream& out,
                       int workers) {
  cfg.validate();
  std::vector<std::string> blocks(items.size());
  run_indexed(static_cast<int>(items.size()), workers, [&](int i) {
    const StimulusItem& it = items[i];
    std::vector<std::string> prefix = split_tokens(it.prefix);
    std::ostringstream block;
    for (const auto& cont : it.continuations) {
      std::vector<std::string> cont_tokens = split_tokens(cont.text);
      if (cont_tokens.empty())
        throw std::invalid_argument("empty continuation in " + it.experiment + " item " +
                                    std::to_string(it.item_id));
      std::vector<std::string> all = prefix;
      all.insert(all.end(), cont_tokens.begin(), cont_tokens.end());
      DecodeResult dec = word_sync_beam(m, all, cfg);
      for (size_t k = 0; k < cont_tokens.size(); ++k) {
        size_t pos = prefix.size() + k;
        auto row = base_fields(it, static_cast<int>(k), cont_tokens[k], cont.cls,
                               dec.profile.bits[pos]);
        row.push_back(std::to_string(cfg.action_beam));
        row.push_back(std::to_string(cfg.word_beam));
        row.push_back(format_double(dec.mass_bits[pos + 1]));
        write_csv_row(block, row);
      }
    }
    blocks[i] = block.str();
  });
  write_csv_row(out, eval_csv_header(true));
  for (const auto& b : blocks) out << b;
}

}  // namespace coordlm
