#include "beatgen/io.hpp"

#include <charconv>
#include <cmath>
#include <stdexcept>

namespace beatgen::io {

std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

void Table::check_rows(std::size_t n) {
    if (cols_.empty())
        rows_ = n;
    else if (n != rows_)
        throw std::invalid_argument("Table: column length mismatch");
}

void Table::add(std::string name, std::vector<double> values) {
    check_rows(values.size());
    cols_.emplace_back(std::move(name), std::move(values));
}

void Table::add(std::string name, std::vector<long long> values) {
    check_rows(values.size());
    cols_.emplace_back(std::move(name), std::move(values));
}

void Table::add(std::string name, std::vector<std::string> values) {
    check_rows(values.size());
    cols_.emplace_back(std::move(name), std::move(values));
}

void Table::write_csv(std::ostream& os, const nlohmann::ordered_json& config,
                      const nlohmann::ordered_json* result) const {
    os << "# beatgen output\n";
    os << "# config: " << config.dump() << "\n";
    if (result) os << "# result: " << result->dump() << "\n";
    for (std::size_t c = 0; c < cols_.size(); ++c) {
        if (c) os << ',';
        os << cols_[c].first;
    }
    os << '\n';
    for (std::size_t r = 0; r < rows_; ++r) {
        for (std::size_t c = 0; c < cols_.size(); ++c) {
            if (c) os << ',';
            const auto& col = cols_[c].second;
            if (const auto* d = std::get_if<std::vector<double>>(&col))
                os << format_double((*d)[r]);
            else if (const auto* i = std::get_if<std::vector<long long>>(&col))
                os << (*i)[r];
            else
                os << std::get<std::vector<std::string>>(col)[r];
        }
        os << '\n';
    }
}

void Table::write_json(std::ostream& os, const nlohmann::ordered_json& config,
                       const nlohmann::ordered_json* result) const {
    nlohmann::ordered_json root;
    root["meta"] = nlohmann::ordered_json{{"config", config}};
    if (result) root["meta"]["result"] = *result;
    nlohmann::ordered_json data;
    for (const auto& [name, col] : cols_) {
        if (const auto* d = std::get_if<std::vector<double>>(&col))
            data[name] = *d;
        else if (const auto* i = std::get_if<std::vector<long long>>(&col))
            data[name] = *i;
        else
            data[name] = std::get<std::vector<std::string>>(col);
    }
    root["data"] = std::move(data);
    os << root.dump(2) << '\n';
}

}  // namespace beatgen::io
