#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "gfbp/error.hpp"
#include "gfbp/problems.hpp"

using namespace gfbp;

namespace {

std::filesystem::path write_temp(const std::string& name, const std::string& text) {
    const auto path = std::filesystem::temp_directory_path() / ("gfbp_csv_" + name);
    std::ofstream(path, std::ios::binary) << text;
    return path;
}

void expect_format_error(std::string_view text, std::size_t row, std::size_t col) {
    try {
        parse_csv_matrix(text);
        FAIL("expected FormatError");
    } catch (const FormatError& e) {
        CHECK(e.row() == row);
        CHECK(e.column() == col);
    }
}

}  // namespace

TEST_CASE("numeric matrix") {
    const Matrix m = parse_csv_matrix("1,2,3\n4,5,6\n");
    CHECK(m.rows() == 2);
    CHECK(m.cols() == 3);
    CHECK(m(1, 2) == 6.0);
}

TEST_CASE("header, whitespace, CRLF, BOM and exponents") {
    const Matrix m = parse_csv_matrix("\xEF\xBB\xBFx1, x2\r\n 1.5 , -2e-3\r\n\r\n+3,4\r\n");
    CHECK(m.rows() == 2);
    CHECK(m(0, 0) == 1.5);
    CHECK(m(0, 1) == -2e-3);
    CHECK(m(1, 0) == 3.0);
}

TEST_CASE("format errors carry row and column") {
    expect_format_error("1,2\n3,abc\n", 2, 2);
    expect_format_error("1,2\n3\n", 2, 2);
    expect_format_error("1,2\n3,4,5\n", 2, 3);
    expect_format_error("1,2\n\n4,,5\n", 3, 2);
    expect_format_error("", 0, 0);
    expect_format_error("a,b\n", 0, 0);
}

TEST_CASE("file loading") {
    const auto a = write_temp("a.csv", "1,0\n0,1\n2,2\n");
    const Matrix m = load_csv_matrix(a);
    CHECK(m.rows() == 3);

    const auto col = write_temp("col.csv", "b\n1\n2\n3\n");
    CHECK(load_csv_vector(col) == Vector{1.0, 2.0, 3.0});
    const auto row = write_temp("row.csv", "1,2,3\n");
    CHECK(load_csv_vector(row) == Vector{1.0, 2.0, 3.0});
    CHECK_THROWS_AS(load_csv_vector(a), FormatError);

    const auto bad = write_temp("bad.csv", "1,2\n3,x\n");
    try {
        load_csv_matrix(bad);
        FAIL("expected FormatError");
    } catch (const FormatError& e) {
        CHECK(e.row() == 2);
        CHECK(std::string(e.what()).find("bad.csv") != std::string::npos);
    }
    CHECK_THROWS_AS(load_csv_matrix("/nonexistent/gfbp.csv"), FormatError);
}
