#include "csv.h"

#include <cstdio>
#include <fstream>

#include "errors.h"

namespace coordlm {

std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

void write_csv_row(std::ostream& out, const std::vector<std::string>& fields) {
  for (size_t i = 0; i < fields.size(); ++i) {
    if (i) out << ',';
    out << csv_escape(fields[i]);
  }
  out << '\n';
}

std::vector<std::string> parse_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else if (c == '\r') {
      // tolerate CRLF
    } else {
      cur += c;
    }
  }
  if (quoted) throw ParseError("unterminated quote in CSV line");
  fields.push_back(cur);
  return fields;
}

int CsvTable::column(const std::string& name) const {
  for (size_t i = 0; i < header.size(); ++i)
    if (header[i] == name) return static_cast<int>(i);
  return -1;
}

int CsvTable::require_column(const std::string& name, const std::string& context) const {
  int i = column(name);
  if (i < 0) throw ParseError(context + ": missing required column \"" + name + "\"");
  return i;
}

CsvTable read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open CSV file: " + path);
  CsvTable t;
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || (line.size() == 1 && line[0] == '\r')) continue;
    std::vector<std::string> fields;
    try {
      fields = parse_csv_line(line);
    } catch (const ParseError& e) {
      throw ParseError(path + ":" + std::to_string(lineno) + ": " + e.what());
    }
    if (lineno == 1) {
      t.header = std::move(fields);
    } else {
      if (fields.size() != t.header.size())
        throw ParseError(path + ":" + std::to_string(lineno) + ": expected " +
                         std::to_string(t.header.size()) + " fields, got " +
                         std::to_string(fields.size()));
      t.rows.push_back(std::move(fields));
    }
  }
  if (t.header.empty()) throw ParseError(path + ": empty CSV (no header)");
  return t;
}

CsvTable read_csv_expecting(const std::string& path, const std::vector<std::string>& header) {
  CsvTable t = read_csv(path);
  if (t.header != header) {
    std::string want, got;
    for (const auto& h : header) want += (want.empty() ? "" : ",") + h;
    for (const auto& h : t.header) got += (got.empty() ? "" : ",") + h;
    throw ParseError(path + ": header mismatch (expected \"" + want + "\", got \"" + got + "\")");
  }
  return t;
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

}  // namespace coordlm
