#include <algorithm>
#include <charconv>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "gfbp/error.hpp"
#include "gfbp/problems.hpp"

namespace gfbp {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

std::optional<double> parse_number(std::string_view cell) {
    cell = trim(cell);
    if (cell.empty()) return std::nullopt;
    if (cell.front() == '+') cell.remove_prefix(1);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
    if (ec != std::errc() || ptr != cell.data() + cell.size()) return std::nullopt;
    return v;
}

std::vector<std::string_view> split_cells(std::string_view line) {
    std::vector<std::string_view> cells;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            cells.push_back(line.substr(start));
            break;
        }
        cells.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
    return cells;
}

}  // namespace

Matrix parse_csv_matrix(std::string_view text) {
    if (text.starts_with("\xEF\xBB\xBF")) text.remove_prefix(3);

    std::vector<double> data;
    std::size_t cols = 0;
    std::size_t rows = 0;
    std::size_t line_no = 0;
    bool first_content_line = true;

    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t nl = text.find('\n', pos);
        const std::string_view line =
            text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++line_no;
        if (trim(line).empty()) continue;

        const auto cells = split_cells(line);
        std::vector<double> values;
        values.reserve(cells.size());
        std::optional<std::size_t> bad_column;
        for (std::size_t c = 0; c < cells.size(); ++c) {
            const auto v = parse_number(cells[c]);
            if (!v) {
                bad_column = c + 1;
                break;
            }
            values.push_back(*v);
        }

        if (first_content_line) {
            first_content_line = false;
            if (bad_column) continue;  // header row
        }
        if (bad_column) {
            throw FormatError("csv: non-numeric cell at line " + std::to_string(line_no) +
                                  ", column " + std::to_string(*bad_column),
                              line_no, *bad_column);
        }
        if (rows == 0) {
            cols = values.size();
        } else if (values.size() != cols) {
            throw FormatError("csv: line " + std::to_string(line_no) + " has " +
                                  std::to_string(values.size()) + " cells, expected " +
                                  std::to_string(cols),
                              line_no, std::min(values.size(), cols) + 1);
        }
        data.insert(data.end(), values.begin(), values.end());
        ++rows;
    }
    if (rows == 0) throw FormatError("csv: no numeric rows", 0, 0);
    return Matrix(rows, cols, std::move(data));
}

Matrix load_csv_matrix(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("csv: cannot open " + path.string(), 0, 0);
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return parse_csv_matrix(buf.str());
    } catch (const FormatError& e) {
        throw FormatError(path.string() + ": " + e.what(), e.row(), e.column());
    }
}

Vector load_csv_vector(const std::filesystem::path& path) {
    const Matrix m = load_csv_matrix(path);
    if (m.cols() != 1 && m.rows() != 1) {
        throw FormatError(path.string() + ": expected a single row or column, got " +
                              std::to_string(m.rows()) + "x" + std::to_string(m.cols()),
                          0, 0);
    }
    return Vector(m.data().begin(), m.data().end());
}

}  // namespace gfbp
