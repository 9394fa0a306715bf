#pragma once

// Rectangular result tables written as CSV (9 significant digits, `# schema:`
// comment first) or as an equivalent JSON document.

#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

namespace hybridnet {

inline constexpr const char* kResultSchema = "hybridnet.result/1";

class ResultTable {
public:
    using Cell = std::variant<std::monostate, double, std::string>;

    explicit ResultTable(std::vector<std::string> columns) : columns_(std::move(columns)) {
        if (columns_.empty()) throw std::invalid_argument("ResultTable: no columns");
    }

    /// Free-form `key: value` line emitted as a comment above the header.
    void add_note(std::string note) { notes_.push_back(std::move(note)); }

    void add_row(std::vector<Cell> row) {
        if (row.size() != columns_.size())
            throw std::invalid_argument("ResultTable: row has " + std::to_string(row.size()) + " cells, expected " +
                                        std::to_string(columns_.size()));
        rows_.push_back(std::move(row));
    }

    const std::vector<std::string>& columns() const { return columns_; }
    const std::vector<std::vector<Cell>>& rows() const { return rows_; }
    const std::vector<std::string>& notes() const { return notes_; }

    std::size_t column_index(const std::string& name) const {
        for (std::size_t i = 0; i < columns_.size(); ++i)
            if (columns_[i] == name) return i;
        throw std::out_of_range("ResultTable: no column '" + name + "'");
    }

    static std::string format_number(double x) {
        if (std::isnan(x)) return "nan";
        if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.9g", x);
        return buf;
    }

    void write_csv(std::ostream& os) const {
        os << "# schema: " << kResultSchema << "; columns: ";
        for (std::size_t i = 0; i < columns_.size(); ++i) os << (i ? "," : "") << columns_[i];
        os << '\n';
        for (const auto& n : notes_) os << "# " << n << '\n';
        for (std::size_t i = 0; i < columns_.size(); ++i) os << (i ? "," : "") << columns_[i];
        os << '\n';
        for (const auto& row : rows_) {
            for (std::size_t i = 0; i < row.size(); ++i) {
                if (i) os << ',';
                os << csv_cell(row[i]);
            }
            os << '\n';
        }
    }

    void write_json(std::ostream& os) const {
        nlohmann::ordered_json doc;
        doc["schema"] = kResultSchema;
        doc["notes"] = notes_;
        doc["columns"] = columns_;
        auto rows = nlohmann::ordered_json::array();
        for (const auto& row : rows_) {
            nlohmann::ordered_json obj = nlohmann::ordered_json::object();
            for (std::size_t i = 0; i < row.size(); ++i) {
                const auto& c = row[i];
                if (std::holds_alternative<std::monostate>(c)) {
                    obj[columns_[i]] = nullptr;
                } else if (const double* x = std::get_if<double>(&c)) {
                    // same digits as the CSV; non-finite values become null
                    obj[columns_[i]] = std::isfinite(*x) ? nlohmann::ordered_json(std::stod(format_number(*x)))
                                                         : nlohmann::ordered_json(nullptr);
                } else {
                    obj[columns_[i]] = std::get<std::string>(c);
                }
            }
            rows.push_back(std::move(obj));
        }
        doc["rows"] = std::move(rows);
        os << doc.dump(2) << '\n';
    }

private:
    static std::string csv_cell(const Cell& c) {
        if (std::holds_alternative<std::monostate>(c)) return {};
        if (const double* x = std::get_if<double>(&c)) return format_number(*x);
        const auto& s = std::get<std::string>(c);
        if (s.find_first_of(",\"\n") == std::string::npos) return s;
        std::string q = "\"";
        for (char ch : s) {
            if (ch == '"') q += '"';
            q += ch;
        }
        return q + '"';
    }

    std::vector<std::string> columns_;
    std::vector<std::string> notes_;
    std::vector<std::vector<Cell>> rows_;
};

}  // namespace hybridnet
