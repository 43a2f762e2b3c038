#ifndef PROJLDP_CSVIO_HPP_
#define PROJLDP_CSVIO_HPP_

#include <ostream>
#include <string>
#include <vector>

namespace projldp {

// Shortest round-trip decimal for a double ("%.17g"); infinities print as
// "inf"/"-inf". Output is locale-independent.
std::string format_double(double v);

// One "# {json}" metadata comment line; `meta_json` must already be a
// serialized JSON object without newlines.
void write_metadata_line(std::ostream& os, const std::string& meta_json);

// CSV body: header line then one row per entry, fields joined with commas.
void write_csv_rows(std::ostream& os, const std::string& header,
                    const std::vector<std::vector<double>>& rows);

struct CsvTable {
  std::string metadata;                   // the JSON payload, no "# " prefix
  std::vector<std::string> header;        // column names
  std::vector<std::vector<double>> rows;  // parsed numeric cells
};

// Reads a table written by the helpers above (used by the recover command's
// tabulated-phi input and by tests).
CsvTable read_csv(std::istream& is);

}  // namespace projldp

#endif  // PROJLDP_CSVIO_HPP_
