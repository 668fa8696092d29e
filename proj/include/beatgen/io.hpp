#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

namespace beatgen::io {

/// Shortest decimal representation that round-trips the exact double.
std::string format_double(double v);

/// Column-oriented result table. Columns keep their insertion order.
class Table {
public:
    void add(std::string name, std::vector<double> values);
    void add(std::string name, std::vector<long long> values);
    void add(std::string name, std::vector<std::string> values);

    std::size_t rows() const { return rows_; }
    std::size_t columns() const { return cols_.size(); }

    /// '#'-prefixed metadata lines (one carrying the full config as JSON,
    /// optionally one with derived results), then a header row, then
    /// comma-separated rows.
    void write_csv(std::ostream& os, const nlohmann::ordered_json& config,
                   const nlohmann::ordered_json* result = nullptr) const;

    /// One object {"meta": {"config": ...}, "data": {column: [...]}} with the
    /// same numeric values as the CSV encoding.
    void write_json(std::ostream& os, const nlohmann::ordered_json& config,
                    const nlohmann::ordered_json* result = nullptr) const;

private:
    using Column = std::variant<std::vector<double>, std::vector<long long>, std::vector<std::string>>;
    std::vector<std::pair<std::string, Column>> cols_;
    std::size_t rows_ = 0;

    void check_rows(std::size_t n);
};

}  // namespace beatgen::io
