#include <cctype>
#include <charconv>
#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "epispec/errors.hpp"
#include "epispec/graph.hpp"

namespace epispec {
namespace {

[[noreturn]] void fail_line(size_t line_no, const std::string& what) {
    throw DataError("line " + std::to_string(line_no) + ": " + what);
}

// Whitespace-splits a line into at most 4 tokens (3 expected; the 4th only
// to detect trailing junk).
std::vector<std::string_view> split_tokens(std::string_view line) {
    std::vector<std::string_view> tokens;
    size_t pos = 0;
    while (pos < line.size() && tokens.size() < 4) {
        while (pos < line.size() && std::isspace(static_cast<unsigned char>(line[pos]))) ++pos;
        if (pos >= line.size()) break;
        size_t end = pos;
        while (end < line.size() && !std::isspace(static_cast<unsigned char>(line[end]))) ++end;
        tokens.push_back(line.substr(pos, end - pos));
        pos = end;
    }
    return tokens;
}

uint32_t parse_index(std::string_view token, size_t line_no) {
    uint32_t value = 0;
    const auto [ptr, ec] = std::from_chars(token.begin(), token.end(), value);
    if (ec != std::errc() || ptr != token.end())
        fail_line(line_no, "bad node index '" + std::string(token) + "'");
    return value;
}

double parse_weight(std::string_view token, size_t line_no) {
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(token.begin(), token.end(), value);
    if (ec != std::errc() || ptr != token.end())
        fail_line(line_no, "bad edge weight '" + std::string(token) + "'");
    return value;
}

} // namespace

Graph load_edge_list(std::istream& in, bool one_indexed) {
    std::vector<Edge> edges;
    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back(); // CRLF
        const auto tokens = split_tokens(line);
        if (tokens.empty() || tokens[0].front() == '#') continue;
        if (tokens.size() < 2 || tokens.size() > 3)
            fail_line(line_no, "expected 'i j' or 'i j w'");

        uint32_t i = parse_index(tokens[0], line_no);
        uint32_t j = parse_index(tokens[1], line_no);
        if (one_indexed) {
            if (i == 0 || j == 0) fail_line(line_no, "node index 0 in one-indexed input");
            --i;
            --j;
        }
        if (i == j) fail_line(line_no, "self-loop on node " + std::to_string(i));
        const double w = tokens.size() == 3 ? parse_weight(tokens[2], line_no) : 1.0;
        if (!(w > 0.0)) fail_line(line_no, "nonpositive edge weight");
        edges.push_back({i, j, w});
    }
    // Duplicate detection happens in from_edges; re-raise with file context.
    try {
        return Graph::from_edges(std::move(edges));
    } catch (const DataError& err) {
        throw DataError(std::string("edge list: ") + err.what());
    }
}

Graph load_edge_list_file(const std::string& path, bool one_indexed) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open '" + path + "' for reading");
    try {
        return load_edge_list(in, one_indexed);
    } catch (const DataError& err) {
        throw DataError(path + ": " + err.what());
    }
}

void write_edge_list(const Graph& g, std::ostream& out) {
    char buf[64];
    for (const auto& e : g.edges()) {
        // 17 significant digits round-trip any double exactly.
        std::snprintf(buf, sizeof buf, "%" PRIu32 " %" PRIu32 " %.17g", e.i, e.j, e.w);
        out << buf << '\n';
    }
}

} // namespace epispec
