#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <istream>
#include <optional>
#include <span>
#include <vector>

namespace tfhnn {

using NodeId = std::uint32_t;
using EdgeId = std::uint32_t;

// Immutable hypergraph with the 0/1 incidence matrix H (n x m) stored twice:
// hyperedge -> member nodes and node -> incident hyperedges. Both views are
// CSR-style, sorted and duplicate-free, and exact transposes of each other.
class Hypergraph {
public:
    Hypergraph() = default;

    // Member lists are sorted and deduplicated; any id >= n raises BoundsError.
    Hypergraph(std::size_t n, const std::vector<std::vector<NodeId>>& hyperedges);

    std::size_t num_nodes() const noexcept { return n_; }
    std::size_t num_edges() const noexcept { return edge_ptr_.empty() ? 0 : edge_ptr_.size() - 1; }
    std::size_t num_incidences() const noexcept { return edge_nodes_.size(); }

    std::span<const NodeId> edge(EdgeId k) const noexcept {
        return {edge_nodes_.data() + edge_ptr_[k], edge_ptr_[k + 1] - edge_ptr_[k]};
    }
    std::span<const EdgeId> incident_edges(NodeId i) const noexcept {
        return {node_edges_.data() + node_ptr_[i], node_ptr_[i + 1] - node_ptr_[i]};
    }

    bool contains(EdgeId k, NodeId i) const noexcept;

    std::vector<std::vector<NodeId>> edge_lists() const;

    // Hash of (n, member lists); identifies the structure independent of storage.
    std::uint64_t structure_hash() const;

    friend bool operator==(const Hypergraph&, const Hypergraph&) = default;

private:
    std::size_t n_ = 0;
    std::vector<std::size_t> edge_ptr_{0};
    std::vector<NodeId> edge_nodes_;
    std::vector<std::size_t> node_ptr_{0};
    std::vector<EdgeId> node_edges_;
};

// Diagonals of D_V and D_E. A zero count (isolated node, empty hyperedge) is
// stored as 1 so every normalisation downstream stays a total function.
struct DegreeVectors {
    std::vector<double> node_deg;
    std::vector<double> edge_deg;
};

DegreeVectors degrees(const Hypergraph& h);

// Nodes within hypergraph distance <= k of source (distance counts hyperedges
// on a shortest path), excluding source. Sorted ascending.
std::vector<NodeId> khop_neighbours(const Hypergraph& h, NodeId source, std::size_t k);

// Edge-list text: one hyperedge per nonempty line, whitespace-separated 0-based
// node ids. An optional first line "#n=<int> m=<int>" fixes the dimensions.
Hypergraph parse_edge_list(std::istream& in);
Hypergraph load_hypergraph(const std::filesystem::path& path);
// Writes the "#n= m=" header; DomainError for an empty hyperedge, which the
// format cannot represent.
void save_hypergraph(const std::filesystem::path& path, const Hypergraph& h);

struct LabelVector {
    static constexpr std::int32_t kUnlabeled = -1;

    std::vector<std::int32_t> labels;
    std::size_t num_classes = 0;

    std::size_t size() const noexcept { return labels.size(); }
    bool is_labeled(std::size_t i) const noexcept { return labels[i] != kUnlabeled; }
    std::vector<std::size_t> labeled_indices() const;
};

// One integer per line; -1 marks an unlabeled node. Class count is
// 1 + max label unless given.
LabelVector load_labels(const std::filesystem::path& path,
                        std::optional<std::size_t> num_classes = std::nullopt);
void save_labels(const std::filesystem::path& path, const LabelVector& y);

}  // namespace tfhnn
