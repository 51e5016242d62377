// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <sstream>

#include "../support/temp_dir.hpp"
#include "langsim/io/csv.hpp"
#include "langsim/io/matrix_file.hpp"
#include "langsim/ldft/sweep.hpp"

using namespace langsim;
using testing_support::TempDir;

TEST_SUITE("io") {

TEST_CASE("matrix text in row and bracket form") {
    auto m = io::parse_matrix_text("# a pore\n1 1 1\n1, 0, 1\n\n1 1 1  # last row\n");
    CHECK(m == ldft::PorousMatrix(3, 3, {1, 1, 1, 1, 0, 1, 1, 1, 1}));
    CHECK(io::parse_matrix_text("[[0.5, 1], [1, 0]]") == ldft::PorousMatrix(2, 2, {0.5, 1, 1, 0}));
    CHECK(io::parse_matrix_text("0 1") == ldft::PorousMatrix(1, 2, {0, 1}));
}

TEST_CASE("matrix text errors name the line") {
    auto message = [](std::string_view text) {
        try {
            io::parse_matrix_text(text, "m.txt");
        } catch (const io::MatrixFileError& e) {
            return std::string(e.what());
        }
        return std::string("no error");
    };
    CHECK(message("1 0\n0 x\n").find("m.txt:2") != std::string::npos);
    CHECK(message("1 0\n0 1 1\n").find("m.txt:2") != std::string::npos);
    CHECK(message("0 2\n").find("m.txt:1") != std::string::npos);
    CHECK(message("# nothing\n") != "no error");
    CHECK(message("[[1,0],[0]]") != "no error");
    CHECK_THROWS_AS(io::read_matrix_file("/nonexistent/matrix.txt"), io::MatrixFileError);
}

TEST_CASE("csv text") {
    ldft::IsothermCurve c;
    c.points = {{0.0, 0.0}, {2.5, 0.1}, {100.0, 1.0 / 3.0}};
    CHECK(io::isotherm_csv(c) == "rh,density\n0,0\n2.5,0.1\n100,0.3333333333333333\n");

    ldft::PorousMatrix m(3, 3, {1, 1, 1, 1, 0, 1, 1, 1, 1});
    auto loop = ldft::compute_hysteresis(m, {}, {0.0, 100.0, 50.0});
    std::istringstream in(io::hysteresis_csv(loop));
    std::string line;
    std::getline(in, line);
    CHECK(line == "rh,density_ads,density_des");
    std::vector<std::string> rows;
    while (std::getline(in, line)) rows.push_back(line);
    REQUIRE(rows.size() == 3);
    CHECK(rows[0].rfind("0,0,", 0) == 0);
    CHECK(rows[2].rfind("100,", 0) == 0);
}

TEST_CASE("text files are replaced whole") {
    TempDir dir;
    auto p = dir / "out.csv";
    io::write_text_file(p, "a\n");
    io::write_text_file(p, "b\n");
    CHECK(testing_support::slurp(p) == "b\n");
    CHECK_FALSE(std::filesystem::exists(dir / "out.csv.tmp"));
}

}
