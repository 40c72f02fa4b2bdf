#ifndef COORDLM_ERRORS_H
#define COORDLM_ERRORS_H

#include <cstddef>
#include <stdexcept>
#include <string>

namespace coordlm {

// Malformed textual input (S-expressions, CSV/TSV, config, checkpoints).
// offset is a 0-based byte position into the offending text where known,
// npos otherwise.
class ParseError : public std::runtime_error {
 public:
  static constexpr size_t npos = static_cast<size_t>(-1);
  ParseError(const std::string& msg, size_t offset = npos)
      : std::runtime_error(offset == npos ? msg : msg + " at offset " + std::to_string(offset)),
        offset_(offset) {}
  size_t offset() const { return offset_; }

 private:
  size_t offset_;
};

class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

// Search / scoring failures: dead beams, hypothesis explosions, scoring a
// terminal state.
class DecodeError : public std::runtime_error {
 public:
  explicit DecodeError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace coordlm

#endif
