#include "sampcent/graph.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <string>

#include "sampcent/error.hpp"

namespace sampcent {

namespace {

// Compressed storage for a sorted, duplicate-free list of (outer, inner) pairs.
void compress(Index n, const std::vector<Edge>& sorted, std::vector<Index>& ptr,
              std::vector<Index>& idx) {
    ptr.assign(static_cast<std::size_t>(n) + 1, 0);
    idx.resize(sorted.size());
    for (const auto& [outer, inner] : sorted) {
        ++ptr[static_cast<std::size_t>(outer) + 1];
    }
    std::partial_sum(ptr.begin(), ptr.end(), ptr.begin());
    for (std::size_t k = 0; k < sorted.size(); ++k) {
        idx[k] = sorted[k].second;
    }
}

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_ws(std::string_view s) {
    std::vector<std::string_view> out;
    std::size_t pos = 0;
    while (pos < s.size()) {
        while (pos < s.size() && (s[pos] == ' ' || s[pos] == '\t' || s[pos] == '\r')) {
            ++pos;
        }
        if (pos == s.size()) {
            break;
        }
        auto end = pos;
        while (end < s.size() && s[end] != ' ' && s[end] != '\t' && s[end] != '\r') {
            ++end;
        }
        out.push_back(s.substr(pos, end - pos));
        pos = end;
    }
    return out;
}

std::int64_t parse_int(std::string_view token, std::size_t line, const char* what) {
    std::int64_t value = 0;
    const auto* end = token.data() + token.size();
    const auto [ptr, ec] = std::from_chars(token.data(), end, value);
    if (ec != std::errc{} || ptr != end) {
        throw ParseError(line, std::string("expected integer ") + what + ", got '" +
                                   std::string(token) + "'");
    }
    return value;
}

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

SparseGraph parse_plain_edges(std::istream& in, bool directed) {
    std::vector<Edge> edges;
    std::int64_t max_id = -1;
    std::int64_t declared_n = 0;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto body = trim(line);
        if (body.starts_with("# n=")) {
            // Order header written by write_edge_list; keeps trailing isolated nodes.
            const auto fields = split_ws(body.substr(4));
            if (!fields.empty()) {
                declared_n = parse_int(fields[0], line_no, "node count");
            }
            continue;
        }
        if (body.empty() || body.front() == '#' || body.front() == '%') {
            continue;
        }
        const auto tokens = split_ws(body);
        if (tokens.size() < 2) {
            throw ParseError(line_no, "expected 'src dst', got '" + std::string(body) + "'");
        }
        const auto src = parse_int(tokens[0], line_no, "source id");
        const auto dst = parse_int(tokens[1], line_no, "target id");
        if (src < 0 || dst < 0) {
            throw ParseError(line_no, "node ids must be nonnegative");
        }
        max_id = std::max({max_id, src, dst});
        edges.emplace_back(src, dst);
    }
    if (edges.empty()) {
        throw Error("graph has no edges");
    }
    const Index n = std::max(max_id + 1, declared_n);
    std::vector<std::int64_t> labels(static_cast<std::size_t>(n));
    std::iota(labels.begin(), labels.end(), std::int64_t{0});
    return SparseGraph::from_edges(n, edges, directed, std::move(labels));
}

SparseGraph parse_matrix_market(std::istream& in, bool directed) {
    std::string line;
    std::size_t line_no = 0;
    if (!std::getline(in, line)) {
        throw ParseError(1, "empty Matrix Market file");
    }
    ++line_no;
    const auto header = split_ws(trim(line));
    if (header.size() != 5 || lower(header[0]) != "%%matrixmarket") {
        throw ParseError(line_no, "missing %%MatrixMarket header");
    }
    if (lower(header[1]) != "matrix" || lower(header[2]) != "coordinate") {
        throw ParseError(line_no, "only 'matrix coordinate' files are supported");
    }
    const auto field = lower(header[3]);
    if (field != "pattern" && field != "integer" && field != "real" && field != "double") {
        throw ParseError(line_no, "unsupported field '" + field + "'");
    }
    const auto symmetry = lower(header[4]);
    bool symmetric = false;
    if (symmetry == "symmetric") {
        symmetric = true;
    } else if (symmetry != "general") {
        throw ParseError(line_no, "unsupported symmetry '" + symmetry + "'");
    }

    Index rows = -1;
    Index cols = -1;
    Index declared = -1;
    while (std::getline(in, line)) {
        ++line_no;
        const auto body = trim(line);
        if (body.empty() || body.front() == '%') {
            continue;
        }
        const auto tokens = split_ws(body);
        if (tokens.size() != 3) {
            throw ParseError(line_no, "expected 'rows cols entries' size line");
        }
        rows = parse_int(tokens[0], line_no, "row count");
        cols = parse_int(tokens[1], line_no, "column count");
        declared = parse_int(tokens[2], line_no, "entry count");
        break;
    }
    if (rows < 0) {
        throw ParseError(line_no, "missing size line");
    }
    if (rows != cols) {
        throw DimensionError("adjacency matrix must be square, got " + std::to_string(rows) +
                             "x" + std::to_string(cols));
    }

    std::vector<Edge> edges;
    edges.reserve(static_cast<std::size_t>(std::max<Index>(declared, 0)));
    const std::size_t min_tokens = field == "pattern" ? 2 : 3;
    while (std::getline(in, line)) {
        ++line_no;
        const auto body = trim(line);
        if (body.empty() || body.front() == '%') {
            continue;
        }
        const auto tokens = split_ws(body);
        if (tokens.size() < min_tokens) {
            throw ParseError(line_no, "malformed entry '" + std::string(body) + "'");
        }
        const auto i = parse_int(tokens[0], line_no, "row index");
        const auto j = parse_int(tokens[1], line_no, "column index");
        if (i < 1 || i > rows || j < 1 || j > cols) {
            throw ParseError(line_no, "index out of range");
        }
        edges.emplace_back(i - 1, j - 1);
    }
    if (static_cast<Index>(edges.size()) != declared) {
        throw ParseError(line_no, "expected " + std::to_string(declared) + " entries, found " +
                                      std::to_string(edges.size()));
    }
    if (edges.empty()) {
        throw Error("graph has no edges");
    }
    std::vector<std::int64_t> labels(static_cast<std::size_t>(rows));
    std::iota(labels.begin(), labels.end(), std::int64_t{1});
    return SparseGraph::from_edges(rows, edges, directed && !symmetric, std::move(labels));
}

} // namespace

SparseGraph SparseGraph::from_edges(Index n, std::span<const Edge> edges, bool directed,
                                    std::vector<std::int64_t> labels) {
    if (n < 1) {
        throw DimensionError("graph order must be at least 1");
    }
    std::vector<Edge> entries;
    entries.reserve(edges.size() * (directed ? 1 : 2));
    for (const auto& [i, j] : edges) {
        if (i < 0 || i >= n || j < 0 || j >= n) {
            throw DimensionError("edge (" + std::to_string(i) + "," + std::to_string(j) +
                                 ") outside graph of order " + std::to_string(n));
        }
        entries.emplace_back(i, j);
    }
    // Duplicates are counted on the input pairs, before symmetrisation.
    std::vector<Edge> canonical = entries;
    if (!directed) {
        for (auto& [i, j] : canonical) {
            if (i > j) {
                std::swap(i, j);
            }
        }
    }
    std::sort(canonical.begin(), canonical.end());
    const auto unique_inputs =
        std::unique(canonical.begin(), canonical.end()) - canonical.begin();

    if (!directed) {
        for (const auto& [i, j] : edges) {
            if (i != j) {
                entries.emplace_back(j, i);
            }
        }
    }
    std::sort(entries.begin(), entries.end());
    entries.erase(std::unique(entries.begin(), entries.end()), entries.end());

    SparseGraph g;
    g.n_ = n;
    g.directed_ = directed;
    g.duplicates_ = static_cast<Index>(edges.size()) - unique_inputs;
    compress(n, entries, g.row_ptr_, g.col_idx_);

    std::vector<Edge> by_column(entries.size());
    std::transform(entries.begin(), entries.end(), by_column.begin(),
                   [](const Edge& e) { return Edge{e.second, e.first}; });
    std::sort(by_column.begin(), by_column.end());
    compress(n, by_column, g.col_ptr_, g.row_idx_);

    if (labels.empty()) {
        labels.resize(static_cast<std::size_t>(n));
        std::iota(labels.begin(), labels.end(), std::int64_t{0});
    } else if (static_cast<Index>(labels.size()) != n) {
        throw DimensionError("label map size does not match graph order");
    }
    g.labels_ = std::move(labels);
    return g;
}

bool SparseGraph::has_edge(Index i, Index j) const {
    const auto r = row(i);
    return std::binary_search(r.begin(), r.end(), j);
}

SparseVector SparseGraph::column_vector(Index j) const {
    SparseVector v{n_, {}};
    for (const Index i : column(j)) {
        v.entries.emplace_back(i, 1.0);
    }
    return v;
}

Index SparseGraph::self_loop_count() const {
    Index count = 0;
    for (Index i = 0; i < n_; ++i) {
        count += has_edge(i, i) ? 1 : 0;
    }
    return count;
}

Index SparseGraph::nonzero_column_count() const {
    Index count = 0;
    for (Index j = 0; j < n_; ++j) {
        count += in_degree(j) > 0 ? 1 : 0;
    }
    return count;
}

Index SparseGraph::nonzero_row_count() const {
    Index count = 0;
    for (Index i = 0; i < n_; ++i) {
        count += out_degree(i) > 0 ? 1 : 0;
    }
    return count;
}

std::vector<Edge> SparseGraph::entries() const {
    std::vector<Edge> out;
    out.reserve(col_idx_.size());
    for (Index i = 0; i < n_; ++i) {
        for (const Index j : row(i)) {
            out.emplace_back(i, j);
        }
    }
    return out;
}

GraphFormat parse_graph_format(std::string_view text) {
    const auto t = lower(text);
    if (t == "edge-list" || t == "edgelist" || t == "edges" || t == "txt") {
        return GraphFormat::edge_list;
    }
    if (t == "matrix-market" || t == "mtx" || t == "mm") {
        return GraphFormat::matrix_market;
    }
    throw ConfigError("unknown graph format '" + std::string(text) + "'");
}

SparseGraph parse_edge_list(std::istream& in, GraphFormat format, bool directed) {
    return format == GraphFormat::edge_list ? parse_plain_edges(in, directed)
                                            : parse_matrix_market(in, directed);
}

SparseGraph read_graph_file(const std::filesystem::path& path, GraphFormat format,
                            bool directed) {
    std::ifstream in(path);
    if (!in) {
        throw Error("cannot open graph file '" + path.string() + "'");
    }
    return parse_edge_list(in, format, directed);
}

void write_edge_list(std::ostream& out, const SparseGraph& g) {
    out << "# n=" << g.order() << (g.directed() ? " directed" : " undirected") << '\n';
    for (const auto& [i, j] : g.entries()) {
        if (!g.directed() && i > j) {
            continue;
        }
        out << i << ' ' << j << '\n';
    }
}

SelfLoopRemoval remove_self_loops(const SparseGraph& g) {
    std::vector<Edge> kept;
    Index removed = 0;
    for (const auto& e : g.entries()) {
        if (e.first == e.second) {
            ++removed;
        } else if (g.directed() || e.first < e.second) {
            kept.push_back(e);
        }
    }
    if (removed == 0) {
        return {g, 0};
    }
    auto out = SparseGraph::from_edges(g.order(), kept, g.directed(), g.labels());
    out.duplicates_ = g.duplicates_;
    return {std::move(out), removed};
}

SparseGraph transpose(const SparseGraph& g) {
    SparseGraph t = g;
    std::swap(t.col_ptr_, t.row_ptr_);
    std::swap(t.row_idx_, t.col_idx_);
    return t;
}

Eigen::VectorXd masked_matvec(const SparseGraph& g, const SampleSet& mask,
                              const Eigen::Ref<const Eigen::VectorXd>& x) {
    if (x.size() != g.order()) {
        throw DimensionError("masked_matvec: vector has dimension " + std::to_string(x.size()) +
                             ", graph has order " + std::to_string(g.order()));
    }
    std::vector<Index> cols = mask.indices;
    std::sort(cols.begin(), cols.end());
    Eigen::VectorXd y = Eigen::VectorXd::Zero(g.order());
    for (const Index j : cols) {
        if (j < 0 || j >= g.order()) {
            throw DimensionError("masked_matvec: mask index " + std::to_string(j) +
                                 " out of range");
        }
        const double xj = x[j];
        for (const Index i : g.column(j)) {
            y[i] += xj;
        }
    }
    return y;
}

Eigen::VectorXd matvec(const SparseGraph& g, const Eigen::Ref<const Eigen::VectorXd>& x) {
    if (x.size() != g.order()) {
        throw DimensionError("matvec: dimension mismatch");
    }
    Eigen::VectorXd y(g.order());
    for (Index i = 0; i < g.order(); ++i) {
        double s = 0.0;
        for (const Index j : g.row(i)) {
            s += x[j];
        }
        y[i] = s;
    }
    return y;
}

Eigen::VectorXd transpose_matvec(const SparseGraph& g,
                                 const Eigen::Ref<const Eigen::VectorXd>& x) {
    if (x.size() != g.order()) {
        throw DimensionError("transpose_matvec: dimension mismatch");
    }
    Eigen::VectorXd y(g.order());
    for (Index j = 0; j < g.order(); ++j) {
        double s = 0.0;
        for (const Index i : g.column(j)) {
            s += x[i];
        }
        y[j] = s;
    }
    return y;
}

} // namespace sampcent
