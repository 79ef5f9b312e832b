#include "fluxgate/csv.h"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace fluxgate {

void Table::add(std::vector<Cell> row)
{
    if (row.size() != columns.size()) throw std::invalid_argument("table: row width does not match the header");
    rows.push_back(std::move(row));
}

std::string format_number(double x)
{
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[64];
    const double a = std::abs(x);
    if (a > 0.0 && a < 1e-3)
        std::snprintf(buf, sizeof buf, "%.9e", x);
    else
        std::snprintf(buf, sizeof buf, "%.10g", x);
    return buf;
}

namespace {

std::string quote(const std::string& s)
{
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

std::string render(const Cell& c)
{
    if (const double* d = std::get_if<double>(&c)) return format_number(*d);
    if (const long* l = std::get_if<long>(&c)) return std::to_string(*l);
    return quote(std::get<std::string>(c));
}

} // namespace

void write_csv(std::ostream& out, const Table& t, const std::string& timestamp_line)
{
    if (!timestamp_line.empty()) out << "# " << timestamp_line << "\r\n";
    for (size_t i = 0; i < t.columns.size(); ++i) out << (i ? "," : "") << quote(t.columns[i]);
    out << "\r\n";
    for (const auto& row : t.rows) {
        for (size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << render(row[i]);
        out << "\r\n";
    }
}

nlohmann::json table_to_json(const Table& t)
{
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : t.rows) {
        nlohmann::json r = nlohmann::json::array();
        for (const Cell& c : row) {
            if (const double* d = std::get_if<double>(&c))
                r.push_back(std::isfinite(*d) ? nlohmann::json(*d) : nlohmann::json(nullptr));
            else if (const long* l = std::get_if<long>(&c))
                r.push_back(*l);
            else
                r.push_back(std::get<std::string>(c));
        }
        rows.push_back(r);
    }
    return {{"columns", t.columns}, {"rows", rows}};
}

} // namespace fluxgate
