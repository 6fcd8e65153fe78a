//
// swarm-opt - collaborative multi-proposer black-box optimization
// SPDX-License-Identifier: Apache-2.0
//

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <optional>

#include "swarmopt/llm.hpp"

namespace swarmopt {

namespace {
    std::string_view trim(std::string_view s) {
        while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
            s.remove_prefix(1);
        while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
            s.remove_suffix(1);
        return s;
    }

    std::size_t find_keyword(std::string_view line, std::string_view keyword) {
        if (line.size() < keyword.size())
            return std::string_view::npos;
        for (std::size_t i = 0; i + keyword.size() <= line.size(); ++i) {
            bool match = true;
            for (std::size_t k = 0; k < keyword.size() && match; ++k)
                match = std::tolower(static_cast<unsigned char>(line[i + k])) == keyword[k];
            if (match)
                return i;
        }
        return std::string_view::npos;
    }

    // Plain decimal numeral: [+-]? (digits [. digits?] | . digits) ([eE][+-]?digits)?
    bool is_decimal_numeral(std::string_view tok) {
        std::size_t i = 0;
        auto digits = [&] {
            std::size_t start = i;
            while (i < tok.size() && std::isdigit(static_cast<unsigned char>(tok[i])))
                ++i;
            return i - start;
        };
        if (i < tok.size() && (tok[i] == '+' || tok[i] == '-'))
            ++i;
        std::size_t mantissa = digits();
        if (i < tok.size() && tok[i] == '.') {
            ++i;
            mantissa += digits();
        }
        if (mantissa == 0)
            return false;
        if (i < tok.size() && (tok[i] == 'e' || tok[i] == 'E')) {
            ++i;
            if (i < tok.size() && (tok[i] == '+' || tok[i] == '-'))
                ++i;
            if (digits() == 0)
                return false;
        }
        return i == tok.size();
    }

    std::optional<double> parse_number(std::string_view tok) {
        tok = trim(tok);
        if (!is_decimal_numeral(tok))
            return std::nullopt;
        if (tok.front() == '+')
            tok.remove_prefix(1);
        double value = 0.0;
        auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
        if (ec != std::errc() || ptr != tok.data() + tok.size() || !std::isfinite(value))
            return std::nullopt;
        return value;
    }

    std::optional<std::vector<double>> parse_line(std::string_view line, std::size_t n_cells) {
        const std::size_t key = find_keyword(line, "power:");
        if (key == std::string_view::npos)
            return std::nullopt;
        std::string_view rest = trim(line.substr(key + 6));
        if (rest.empty() || rest.front() != '[')
            return std::nullopt;
        const std::size_t close = rest.find(']');
        if (close == std::string_view::npos)
            return std::nullopt;
        std::string_view body = rest.substr(1, close - 1);

        std::vector<double> values;
        while (true) {
            const std::size_t comma = body.find(',');
            auto value = parse_number(body.substr(0, comma));
            if (!value)
                return std::nullopt;
            values.push_back(*value);
            if (comma == std::string_view::npos)
                break;
            body.remove_prefix(comma + 1);
        }
        if (values.size() != n_cells)
            return std::nullopt;
        return values;
    }
}  // namespace

ProposalBatch parse_actions(std::string_view text, std::size_t n_cells, double p_max,
                            std::size_t max_actions) {
    ProposalBatch batch;
    batch.raw_text = std::string(text);

    while (!text.empty()) {
        const std::size_t eol = text.find('\n');
        std::string_view line = trim(text.substr(0, eol));
        text.remove_prefix(eol == std::string_view::npos ? text.size() : eol + 1);
        if (line.empty())
            continue;

        auto values = parse_line(line, n_cells);
        if (!values) {
            ++batch.parse_failures;
            continue;
        }
        if (batch.actions.size() >= max_actions)
            continue;
        for (auto &v : *values) {
            const double clamped = std::clamp(v, 0.0, p_max);
            if (clamped != v)
                ++batch.clamped_count;
            v = clamped == 0.0 ? 0.0 : clamped;  // no negative zero
        }
        batch.actions.push_back(PowerAction{std::move(*values)});
    }
    return batch;
}

}  // namespace swarmopt
