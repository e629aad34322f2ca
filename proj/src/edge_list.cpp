#include "graphsr/edge_list.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <vector>

namespace gsr {

namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
        std::size_t j = i;
        while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
        if (j > i) out.push_back(line.substr(i, j - i));
        i = j;
    }
    return out;
}

template <typename T>
T parse_field(std::string_view field, std::size_t line, const char* what) {
    T value{};
    const auto* end = field.data() + field.size();
    auto [ptr, ec] = std::from_chars(field.data(), end, value);
    if (ec != std::errc() || ptr != end) {
        throw EdgeListError(line, "malformed " + std::string(what) + " '" + std::string(field) + "'");
    }
    return value;
}

}  // namespace

Graph load_edge_list(std::string_view text) {
    std::size_t line_no = 0;
    std::size_t n = 0;
    bool have_n = false;
    std::vector<Edge> edges;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t eol = text.find('\n', pos);
        if (eol == std::string_view::npos) eol = text.size();
        std::string_view line = text.substr(pos, eol - pos);
        pos = eol + 1;
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        const auto fields = split_fields(line);
        if (fields.empty()) continue;
        if (!have_n) {
            if (fields.size() != 1) throw EdgeListError(line_no, "expected node count");
            n = parse_field<std::size_t>(fields[0], line_no, "node count");
            have_n = true;
            continue;
        }
        if (fields.size() != 3) throw EdgeListError(line_no, "expected 'u v w'");
        Edge e{parse_field<NodeId>(fields[0], line_no, "node id"),
               parse_field<NodeId>(fields[1], line_no, "node id"),
               parse_field<double>(fields[2], line_no, "weight")};
        edges.push_back(e);
    }
    if (!have_n) throw EdgeListError(line_no, "missing node count");
    return Graph::build(n, std::move(edges));
}

std::string save_edge_list(const Graph& g) {
    std::string out = std::to_string(g.node_count()) + "\n";
    char buf[64];
    for (const Edge& e : g.edges()) {
        auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, e.w);
        out += std::to_string(e.u) + " " + std::to_string(e.v) + " " + std::string(buf, ptr) + "\n";
    }
    return out;
}

Graph read_edge_list_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw GraphError("cannot open edge list '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return load_edge_list(ss.str());
}

void write_edge_list_file(const Graph& g, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw GraphError("cannot write edge list '" + path + "'");
    out << save_edge_list(g);
}

}  // namespace gsr
