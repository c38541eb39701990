#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "sampcent/sample_set.hpp"

namespace sampcent {

using Edge = std::pair<Index, Index>;

/// Sparse vector with strictly increasing indices and nonzero values.
struct SparseVector {
    Index dimension = 0;
    std::vector<std::pair<Index, double>> entries;

    bool operator==(const SparseVector&) const = default;
};

struct SelfLoopRemoval;

/// Immutable unweighted adjacency matrix stored both column-major and row-major.
///
/// Entry (i, j) is present iff there is an edge from node i to node j, so
/// column j lists the sources of the edges pointing into j. Both stores are
/// sorted and free of duplicates. Undirected graphs store every edge in both
/// directions.
class SparseGraph {
public:
    SparseGraph() = default;

    /// Builds a graph of order `n` from (source, target) pairs.
    /// Duplicate pairs are collapsed; the number collapsed is kept in duplicates().
    /// For undirected graphs each pair is stored symmetrically.
    static SparseGraph from_edges(Index n, std::span<const Edge> edges, bool directed,
                                  std::vector<std::int64_t> labels = {});

    Index order() const noexcept { return n_; }
    bool directed() const noexcept { return directed_; }
    Index edge_count() const noexcept { return static_cast<Index>(row_idx_.size()); }
    Index duplicates() const noexcept { return duplicates_; }

    std::span<const Index> column(Index j) const noexcept {
        return {row_idx_.data() + col_ptr_[j], row_idx_.data() + col_ptr_[j + 1]};
    }
    std::span<const Index> row(Index i) const noexcept {
        return {col_idx_.data() + row_ptr_[i], col_idx_.data() + row_ptr_[i + 1]};
    }
    Index in_degree(Index j) const noexcept { return col_ptr_[j + 1] - col_ptr_[j]; }
    Index out_degree(Index i) const noexcept { return row_ptr_[i + 1] - row_ptr_[i]; }

    bool has_edge(Index i, Index j) const;
    SparseVector column_vector(Index j) const;

    /// Raw dataset label of internal node `i` (used only for reporting).
    std::int64_t label(Index i) const { return labels_[static_cast<std::size_t>(i)]; }
    const std::vector<std::int64_t>& labels() const noexcept { return labels_; }

    Index self_loop_count() const;
    Index nonzero_column_count() const;
    Index nonzero_row_count() const;

    /// All entries in row-major order.
    std::vector<Edge> entries() const;

    bool operator==(const SparseGraph& other) const = default;

private:
    friend SparseGraph transpose(const SparseGraph& g);
    friend SelfLoopRemoval remove_self_loops(const SparseGraph& g);

    Index n_ = 0;
    bool directed_ = true;
    Index duplicates_ = 0;
    std::vector<Index> col_ptr_{0};
    std::vector<Index> row_idx_;
    std::vector<Index> row_ptr_{0};
    std::vector<Index> col_idx_;
    std::vector<std::int64_t> labels_;
};

enum class GraphFormat { edge_list, matrix_market };

GraphFormat parse_graph_format(std::string_view text);

/// Reads a graph from text.
///
/// Edge lists hold one whitespace separated "src dst" pair of 0-based ids per
/// line; lines starting with '#' or '%' are comments, and n = 1 + the largest
/// id seen (or the "# n=N" header written by write_edge_list, if larger). Matrix Market coordinate files use 1-based indices and the
/// declared dimension; values are ignored (coerced to 1) and a symmetric
/// header forces an undirected graph. Self-loops are kept.
SparseGraph parse_edge_list(std::istream& in, GraphFormat format, bool directed);

SparseGraph read_graph_file(const std::filesystem::path& path, GraphFormat format,
                            bool directed);

/// Writes every stored entry as a "src dst" line (one line per undirected edge).
void write_edge_list(std::ostream& out, const SparseGraph& g);

struct SelfLoopRemoval {
    SparseGraph graph;
    Index removed = 0;
};

SelfLoopRemoval remove_self_loops(const SparseGraph& g);

SparseGraph transpose(const SparseGraph& g);

/// y = A_J x where A_J keeps only the columns listed in `mask`.
/// Columns are visited in ascending index order and rows in ascending order
/// within each column, so the result is bitwise reproducible.
Eigen::VectorXd masked_matvec(const SparseGraph& g, const SampleSet& mask,
                              const Eigen::Ref<const Eigen::VectorXd>& x);

/// Ordinary product A x.
Eigen::VectorXd matvec(const SparseGraph& g, const Eigen::Ref<const Eigen::VectorXd>& x);

/// Product A^T x.
Eigen::VectorXd transpose_matvec(const SparseGraph& g,
                                 const Eigen::Ref<const Eigen::VectorXd>& x);

} // namespace sampcent
