// SPDX-License-Identifier: Apache-2.0
#include "langsim/pipeline/patterns.hpp"

#include <fmt/format.h>

#include <cctype>
#include <charconv>
#include <cmath>
#include <limits>
#include <regex>
#include <vector>

namespace langsim::pipeline {

namespace {

const std::regex& number_regex() {
    static const std::regex re(number_pattern);
    return re;
}

const std::regex& bracket_open_regex() {
    static const std::regex re(R"(\[\s*\[)");
    return re;
}

bool glue_char(char ch) {
    return std::isalnum(static_cast<unsigned char>(ch)) != 0 || ch == '_';
}

double parse_token(std::string_view tok) {
    if (!tok.empty() && tok.front() == '+') tok.remove_prefix(1);
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec == std::errc::result_out_of_range) {
        // from_chars leaves v untouched; saturate like strtod would.
        bool negative = !tok.empty() && tok.front() == '-';
        bool tiny = tok.find_first_of("eE") != std::string_view::npos &&
                    tok.find("e-") != std::string_view::npos;
        if (tiny) return negative ? -0.0 : 0.0;
        return negative ? -std::numeric_limits<double>::infinity()
                        : std::numeric_limits<double>::infinity();
    }
    return v;
}

/// Whole of `tok` is one number token.
std::optional<double> full_number(std::string_view tok) {
    std::match_results<std::string_view::const_iterator> m;
    if (!std::regex_match(tok.begin(), tok.end(), m, number_regex())) return std::nullopt;
    return parse_token(tok);
}

struct Span {
    std::size_t begin;
    std::size_t end;
};

/// [begin, end) of the bracketed array opening at `open`; end is text.size()
/// when the brackets never balance.
Span bracket_span(std::string_view text, std::size_t open) {
    int depth = 0;
    for (std::size_t i = open; i < text.size(); ++i) {
        if (text[i] == '[') ++depth;
        if (text[i] == ']' && --depth == 0) return {open, i + 1};
    }
    return {open, text.size()};
}

std::vector<Span> bracket_spans(std::string_view text) {
    std::vector<Span> out;
    std::size_t from = 0;
    while (from < text.size()) {
        std::match_results<std::string_view::const_iterator> m;
        if (!std::regex_search(text.begin() + static_cast<std::ptrdiff_t>(from), text.end(), m,
                               bracket_open_regex())) {
            break;
        }
        std::size_t open = from + static_cast<std::size_t>(m.position(0));
        Span s = bracket_span(text, open);
        out.push_back(s);
        from = s.end;
    }
    return out;
}

using Rows = std::vector<std::vector<double>>;

class BracketParser {
  public:
    explicit BracketParser(std::string_view text) : text_(text) {}

    std::optional<Rows> parse() {
        Rows rows;
        if (!eat('[')) return std::nullopt;
        for (;;) {
            auto row = parse_row();
            if (!row) return std::nullopt;
            rows.push_back(std::move(*row));
            if (eat(',')) continue;
            if (eat(']')) break;
            return std::nullopt;
        }
        return rows;
    }

  private:
    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool eat(char ch) {
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == ch) {
            ++pos_;
            return true;
        }
        return false;
    }

    std::optional<double> number() {
        skip_ws();
        std::match_results<std::string_view::const_iterator> m;
        auto start = text_.begin() + static_cast<std::ptrdiff_t>(pos_);
        if (!std::regex_search(start, text_.end(), m, number_regex(),
                               std::regex_constants::match_continuous)) {
            return std::nullopt;
        }
        std::string_view tok = text_.substr(pos_, static_cast<std::size_t>(m.length(0)));
        pos_ += tok.size();
        return parse_token(tok);
    }

    std::optional<std::vector<double>> parse_row() {
        if (!eat('[')) return std::nullopt;
        std::vector<double> row;
        for (;;) {
            auto v = number();
            if (!v) return std::nullopt;
            row.push_back(*v);
            if (eat(',')) continue;
            if (eat(']')) break;
            return std::nullopt;
        }
        return row;
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

/// Entries of a line made only of numbers separated by whitespace/commas.
std::optional<std::vector<double>> numeric_row(std::string_view line) {
    std::vector<double> row;
    std::size_t i = 0;
    auto sep = [](char ch) { return ch == ',' || std::isspace(static_cast<unsigned char>(ch)); };
    while (i < line.size()) {
        while (i < line.size() && sep(line[i])) ++i;
        if (i == line.size()) break;
        std::size_t j = i;
        while (j < line.size() && !sep(line[j])) ++j;
        auto v = full_number(line.substr(i, j - i));
        if (!v) return std::nullopt;
        row.push_back(*v);
        i = j;
    }
    if (row.empty()) return std::nullopt;
    return row;
}

struct BareRun {
    Span span;
    Rows rows;
};

std::vector<BareRun> bare_runs(std::string_view text) {
    std::vector<BareRun> out;
    BareRun current{{0, 0}, {}};
    auto flush = [&] {
        if (current.rows.size() >= 2) out.push_back(current);
        current = BareRun{{0, 0}, {}};
    };
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t nl = text.find('\n', start);
        std::size_t end = nl == std::string_view::npos ? text.size() : nl;
        auto row = numeric_row(text.substr(start, end - start));
        if (row) {
            if (current.rows.empty()) current.span.begin = start;
            current.span.end = end;
            current.rows.push_back(std::move(*row));
        } else {
            flush();
        }
        if (nl == std::string_view::npos) break;
        start = nl + 1;
    }
    flush();
    return out;
}

MatrixExtraction validate_rows(const Rows& rows) {
    std::size_t cols = rows.front().size();
    for (const auto& r : rows) {
        if (r.size() != cols) return Malformed{"ragged"};
    }
    if (rows.size() > max_matrix_side || cols > max_matrix_side) return Malformed{"size"};
    std::vector<double> cells;
    cells.reserve(rows.size() * cols);
    for (const auto& r : rows) {
        for (double v : r) {
            if (!(v >= 0.0 && v <= 1.0)) return Malformed{"range"};
            cells.push_back(v);
        }
    }
    return ldft::PorousMatrix(rows.size(), cols, std::move(cells));
}

}  // namespace

std::optional<double> extract_number(std::string_view text) {
    using It = std::string_view::const_iterator;
    for (std::regex_iterator<It> it(text.begin(), text.end(), number_regex()), end; it != end;
         ++it) {
        auto b = static_cast<std::size_t>(it->position(0));
        auto e = b + static_cast<std::size_t>(it->length(0));
        bool left_ok = b == 0 || !(glue_char(text[b - 1]) || text[b - 1] == '.');
        bool right_ok = e == text.size() || !glue_char(text[e]);
        if (left_ok && right_ok) return parse_token(text.substr(b, e - b));
    }
    return std::nullopt;
}

MatrixExtraction extract_matrix(std::string_view text) {
    auto brackets = bracket_spans(text);
    if (!brackets.empty()) {
        Span s = brackets.front();
        auto rows = BracketParser(text.substr(s.begin, s.end - s.begin)).parse();
        if (!rows) return Malformed{"syntax"};
        return validate_rows(*rows);
    }
    auto runs = bare_runs(text);
    if (!runs.empty()) return validate_rows(runs.front().rows);
    return NoMatch{};
}

std::string format_number(double v) { return fmt::format("{}", v); }

std::string serialize_matrix(const ldft::PorousMatrix& m) {
    std::string out = "[";
    for (std::size_t r = 0; r < m.rows(); ++r) {
        if (r) out += ',';
        out += '[';
        for (std::size_t c = 0; c < m.cols(); ++c) {
            if (c) out += ',';
            out += format_number(m(r, c));
        }
        out += ']';
    }
    out += ']';
    return out;
}

std::string mask_matrix_spans(std::string_view text) {
    std::string out(text);
    auto blank = [&](Span s) {
        for (std::size_t i = s.begin; i < s.end; ++i) {
            if (out[i] != '\n') out[i] = ' ';
        }
    };
    for (Span s : bracket_spans(text)) blank(s);
    for (const auto& run : bare_runs(out)) blank(run.span);
    return out;
}

}  // namespace langsim::pipeline
