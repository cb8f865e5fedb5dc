#pragma once

#include <ostream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace ncx2 {

/// Shortest decimal string that parses back to the same double ("nan", "inf",
/// "-inf" for non-finite values).
std::string format_number(double v);

/// An empty cell is std::monostate; text cells are bare tokens, never quoted.
using Cell = std::variant<std::monostate, double, long long, bool, std::string>;
using Row = std::vector<Cell>;

enum class Format { Csv, Json };

/// Writes rows under a fixed header. CSV rows are flushed one complete line at
/// a time; JSON is an array of objects written when the table is finished.
/// Non-finite numbers and empty cells become null in JSON.
class TableWriter {
public:
    TableWriter(std::ostream& out, Format format, std::vector<std::string> columns);
    TableWriter(const TableWriter&) = delete;
    TableWriter& operator=(const TableWriter&) = delete;

    void add(const Row& row);
    void finish();

private:
    std::ostream& out_;
    Format format_;
    std::vector<std::string> columns_;
    std::vector<Row> pending_;
    bool finished_ = false;
};

}  // namespace ncx2
