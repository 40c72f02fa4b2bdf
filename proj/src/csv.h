#ifndef COORDLM_CSV_H
#define COORDLM_CSV_H

#include <ostream>
#include <string>
#include <vector>

namespace coordlm {

// Minimal RFC-4180 subset: fields are quoted only when they contain a comma,
// quote, or newline; embedded quotes double. No multi-line fields.
std::string csv_escape(const std::string& field);
void write_csv_row(std::ostream& out, const std::vector<std::string>& fields);
std::vector<std::string> parse_csv_line(const std::string& line);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  int column(const std::string& name) const;  // -1 if absent
  // column index or ParseError naming the missing column and the file
  int require_column(const std::string& name, const std::string& context) const;
};

CsvTable read_csv(const std::string& path);
// read_csv + exact header check (ParseError on mismatch)
CsvTable read_csv_expecting(const std::string& path, const std::vector<std::string>& header);

// Canonical double rendering used by every CSV/JSON artifact; shortest form
// at 12 significant digits, so identical runs emit identical bytes.
std::string format_double(double v);

}  // namespace coordlm

#endif
