#pragma once

#include <string>
#include <string_view>

#include "graphsr/graph.hpp"

namespace gsr {

/// Parse failure; `line()` is 1-based.
class EdgeListError : public GraphError {
public:
    EdgeListError(std::size_t line, const std::string& what)
        : GraphError("line " + std::to_string(line) + ": " + what), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

// Format: first line `n`, then one `u v w` per line; `#` starts a comment.
Graph load_edge_list(std::string_view text);
std::string save_edge_list(const Graph& g);

Graph read_edge_list_file(const std::string& path);
void write_edge_list_file(const Graph& g, const std::string& path);

}  // namespace gsr
