#pragma once

#include <ostream>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

namespace fluxgate {

using Cell = std::variant<double, long, std::string>;

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;

    void add(std::vector<Cell> row);
};

// Ten significant digits; scientific
// notation for 0 < |x| < 1e-3; "nan" for NaN.
std::string format_number(double x);

// RFC 4180 quoting; optional leading "# generated ..." line.
void write_csv(std::ostream& out, const Table& t, const std::string& timestamp_line = "");
nlohmann::json table_to_json(const Table& t);

} // namespace fluxgate
