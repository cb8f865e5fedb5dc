#include "ncx2/table.hpp"

#include <charconv>
#include <cmath>
#include "json.hpp"
#include <stdexcept>

namespace ncx2 {
namespace {

std::string csv_cell(const Cell& c) {
    struct Visitor {
        std::string operator()(std::monostate) const { return {}; }
        std::string operator()(double v) const { return format_number(v); }
        std::string operator()(long long v) const { return std::to_string(v); }
        std::string operator()(bool v) const { return v ? "true" : "false"; }
        std::string operator()(const std::string& v) const { return v; }
    };
    return std::visit(Visitor{}, c);
}

nlohmann::ordered_json json_cell(const Cell& c) {
    struct Visitor {
        nlohmann::ordered_json operator()(std::monostate) const { return nullptr; }
        nlohmann::ordered_json operator()(double v) const {
            if (!std::isfinite(v)) return nullptr;
            return v;
        }
        nlohmann::ordered_json operator()(long long v) const { return v; }
        nlohmann::ordered_json operator()(bool v) const { return v; }
        nlohmann::ordered_json operator()(const std::string& v) const { return v; }
    };
    return std::visit(Visitor{}, c);
}

}  // namespace

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

TableWriter::TableWriter(std::ostream& out, Format format, std::vector<std::string> columns)
    : out_(out), format_(format), columns_(std::move(columns)) {
    if (format_ == Format::Csv) {
        std::string header;
        for (std::size_t i = 0; i < columns_.size(); ++i) {
            if (i) header += ',';
            header += columns_[i];
        }
        header += '\n';
        out_ << header << std::flush;
    }
}

void TableWriter::add(const Row& row) {
    if (row.size() != columns_.size()) throw std::logic_error("row width does not match header");
    if (format_ == Format::Json) {
        pending_.push_back(row);
        return;
    }
    std::string line;
    for (std::size_t i = 0; i < row.size(); ++i) {
        if (i) line += ',';
        line += csv_cell(row[i]);
    }
    line += '\n';
    out_ << line << std::flush;
}

void TableWriter::finish() {
    if (finished_) return;
    finished_ = true;
    if (format_ != Format::Json) return;
    auto doc = nlohmann::ordered_json::array();
    for (const auto& row : pending_) {
        nlohmann::ordered_json obj = nlohmann::ordered_json::object();
        for (std::size_t i = 0; i < row.size(); ++i) obj[columns_[i]] = json_cell(row[i]);
        doc.push_back(std::move(obj));
    }
    out_ << doc.dump(2) << '\n' << std::flush;
}

}  // namespace ncx2
