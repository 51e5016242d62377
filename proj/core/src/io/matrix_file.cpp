// SPDX-License-Identifier: Apache-2.0
#include "langsim/io/matrix_file.hpp"

#include <fmt/format.h>

#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>
#include <variant>
#include <vector>

#include "langsim/ldft/errors.hpp"
#include "langsim/pipeline/patterns.hpp"

namespace langsim::io {

namespace {

std::string strip_comments(std::string_view text) {
    std::string out;
    bool skipping = false;
    for (char c : text) {
        if (c == '#') skipping = true;
        if (c == '\n') skipping = false;
        if (!skipping) out += c;
    }
    return out;
}

bool blank(std::string_view s) {
    for (char c : s) {
        if (!std::isspace(static_cast<unsigned char>(c))) return false;
    }
    return true;
}

std::vector<double> parse_row(std::string_view line, std::string_view source, std::size_t line_no) {
    std::vector<double> row;
    std::size_t i = 0;
    while (i < line.size()) {
        char c = line[i];
        if (std::isspace(static_cast<unsigned char>(c)) || c == ',') {
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j])) && line[j] != ',') ++j;
        auto token = line.substr(i, j - i);
        if (token.front() == '+') token.remove_prefix(1);
        double v = 0.0;
        auto [p, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
        if (ec != std::errc{} || p != token.data() + token.size()) {
            throw MatrixFileError(fmt::format("{}:{}: '{}' is not a number", source, line_no, line.substr(i, j - i)));
        }
        row.push_back(v);
        i = j;
    }
    return row;
}

}  // namespace

ldft::PorousMatrix parse_matrix_text(std::string_view text, std::string_view source) {
    std::string body = strip_comments(text);
    std::size_t first = body.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) throw MatrixFileError(fmt::format("{}: no matrix rows", source));

    if (body[first] == '[') {
        auto result = pipeline::extract_matrix(body);
        if (auto* m = std::get_if<ldft::PorousMatrix>(&result)) return std::move(*m);
        if (auto* bad = std::get_if<pipeline::Malformed>(&result)) {
            throw MatrixFileError(fmt::format("{}: malformed matrix ({})", source, bad->reason));
        }
        throw MatrixFileError(fmt::format("{}: unbalanced brackets", source));
    }

    std::vector<double> cells;
    std::size_t cols = 0;
    std::size_t rows = 0;
    std::istringstream in(body);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (blank(line)) continue;
        auto row = parse_row(line, source, line_no);
        if (rows == 0) cols = row.size();
        if (row.size() != cols) {
            throw MatrixFileError(fmt::format("{}:{}: row has {} entries, expected {}", source, line_no,
                                              row.size(), cols));
        }
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (!(row[c] >= 0.0 && row[c] <= 1.0)) {
                throw MatrixFileError(fmt::format("{}:{}: entry {} is outside [0, 1]", source, line_no,
                                                  pipeline::format_number(row[c])));
            }
        }
        cells.insert(cells.end(), row.begin(), row.end());
        ++rows;
    }
    return ldft::PorousMatrix(rows, cols, std::move(cells));
}

ldft::PorousMatrix read_matrix_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw MatrixFileError(fmt::format("cannot open matrix file {}", path.string()));
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_matrix_text(ss.str(), path.string());
}

}  // namespace langsim::io
