#include "tfhnn/hypergraph.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>

#include "tfhnn/dense.hpp"
#include "tfhnn/errors.hpp"

namespace tfhnn {

Hypergraph::Hypergraph(std::size_t n, const std::vector<std::vector<NodeId>>& hyperedges) : n_(n) {
    if (n > std::numeric_limits<NodeId>::max())
        throw BoundsError("Hypergraph: node count exceeds 32-bit id range");
    edge_ptr_.reserve(hyperedges.size() + 1);
    std::vector<std::size_t> node_count(n, 0);
    for (std::size_t k = 0; k < hyperedges.size(); ++k) {
        std::vector<NodeId> members = hyperedges[k];
        std::sort(members.begin(), members.end());
        members.erase(std::unique(members.begin(), members.end()), members.end());
        if (!members.empty() && members.back() >= n)
            throw BoundsError("hyperedge " + std::to_string(k) + " references node " +
                              std::to_string(members.back()) + " >= n=" + std::to_string(n));
        for (NodeId v : members) ++node_count[v];
        edge_nodes_.insert(edge_nodes_.end(), members.begin(), members.end());
        edge_ptr_.push_back(edge_nodes_.size());
    }

    node_ptr_.assign(n + 1, 0);
    for (std::size_t i = 0; i < n; ++i) node_ptr_[i + 1] = node_ptr_[i] + node_count[i];
    node_edges_.resize(edge_nodes_.size());
    std::vector<std::size_t> cursor(node_ptr_.begin(), node_ptr_.end() - 1);
    // Edges are visited in increasing k, so each node's list comes out sorted.
    for (std::size_t k = 0; k + 1 < edge_ptr_.size(); ++k)
        for (std::size_t p = edge_ptr_[k]; p < edge_ptr_[k + 1]; ++p)
            node_edges_[cursor[edge_nodes_[p]]++] = static_cast<EdgeId>(k);
}

bool Hypergraph::contains(EdgeId k, NodeId i) const noexcept {
    auto e = edge(k);
    return std::binary_search(e.begin(), e.end(), i);
}

std::vector<std::vector<NodeId>> Hypergraph::edge_lists() const {
    std::vector<std::vector<NodeId>> out;
    out.reserve(num_edges());
    for (EdgeId k = 0; k < num_edges(); ++k) {
        auto e = edge(k);
        out.emplace_back(e.begin(), e.end());
    }
    return out;
}

std::uint64_t Hypergraph::structure_hash() const {
    const std::uint64_t dims[2] = {n_, num_edges()};
    std::uint64_t h = fnv1a(std::as_bytes(std::span(dims)));
    std::vector<std::uint64_t> ptr(edge_ptr_.begin(), edge_ptr_.end());
    h = fnv1a(std::as_bytes(std::span(ptr)), h);
    return fnv1a(std::as_bytes(std::span(edge_nodes_)), h);
}

DegreeVectors degrees(const Hypergraph& h) {
    DegreeVectors d;
    d.node_deg.resize(h.num_nodes());
    d.edge_deg.resize(h.num_edges());
    for (NodeId i = 0; i < h.num_nodes(); ++i) {
        const auto c = h.incident_edges(i).size();
        d.node_deg[i] = c == 0 ? 1.0 : static_cast<double>(c);
    }
    for (EdgeId k = 0; k < h.num_edges(); ++k) {
        const auto c = h.edge(k).size();
        d.edge_deg[k] = c == 0 ? 1.0 : static_cast<double>(c);
    }
    return d;
}

std::vector<NodeId> khop_neighbours(const Hypergraph& h, NodeId source, std::size_t k) {
    if (source >= h.num_nodes())
        throw BoundsError("khop_neighbours: source " + std::to_string(source) + " >= n=" +
                          std::to_string(h.num_nodes()));
    std::vector<bool> seen_node(h.num_nodes(), false);
    std::vector<bool> seen_edge(h.num_edges(), false);
    seen_node[source] = true;
    std::vector<NodeId> frontier{source};
    std::vector<NodeId> result;
    for (std::size_t hop = 0; hop < k && !frontier.empty(); ++hop) {
        std::vector<NodeId> next;
        for (NodeId v : frontier) {
            for (EdgeId e : h.incident_edges(v)) {
                if (seen_edge[e]) continue;
                seen_edge[e] = true;
                for (NodeId u : h.edge(e)) {
                    if (seen_node[u]) continue;
                    seen_node[u] = true;
                    next.push_back(u);
                }
            }
        }
        result.insert(result.end(), next.begin(), next.end());
        frontier = std::move(next);
    }
    std::sort(result.begin(), result.end());
    return result;
}

namespace {

std::uint64_t parse_uint(std::string_view tok, std::size_t lineno) {
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc{} || ptr != tok.data() + tok.size())
        throw ParseError("malformed token '" + std::string(tok) + "'", lineno);
    return v;
}

}  // namespace

Hypergraph parse_edge_list(std::istream& in) {
    std::optional<std::uint64_t> declared_n, declared_m;
    std::vector<std::vector<NodeId>> edges;
    std::uint64_t max_id = 0;
    bool any_id = false;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (lineno == 1 && line.rfind("#n=", 0) == 0) {
            std::istringstream hs(line.substr(1));
            std::string tok;
            while (hs >> tok) {
                const auto eq = tok.find('=');
                if (eq == std::string::npos) throw ParseError("malformed header token '" + tok + "'", lineno);
                const auto key = tok.substr(0, eq);
                const auto val = parse_uint(std::string_view(tok).substr(eq + 1), lineno);
                if (key == "n") declared_n = val;
                else if (key == "m") declared_m = val;
                else throw ParseError("unknown header key '" + key + "'", lineno);
            }
            continue;
        }
        std::istringstream ls(line);
        std::string tok;
        std::vector<NodeId> members;
        while (ls >> tok) {
            const auto id = parse_uint(tok, lineno);
            if (declared_n && id >= *declared_n)
                throw BoundsError("line " + std::to_string(lineno) + ": node id " + std::to_string(id) +
                                  " >= declared n=" + std::to_string(*declared_n));
            if (id >= std::numeric_limits<NodeId>::max())
                throw BoundsError("line " + std::to_string(lineno) + ": node id out of range");
            members.push_back(static_cast<NodeId>(id));
            max_id = std::max(max_id, id);
            any_id = true;
        }
        if (!members.empty()) edges.push_back(std::move(members));
    }
    if (declared_m && *declared_m != edges.size())
        throw ParseError("header declares m=" + std::to_string(*declared_m) + " but file has " +
                             std::to_string(edges.size()) + " hyperedges",
                         1);
    const std::size_t n = declared_n ? *declared_n : (any_id ? max_id + 1 : 0);
    return Hypergraph(n, edges);
}

Hypergraph load_hypergraph(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    return parse_edge_list(in);
}

void save_hypergraph(const std::filesystem::path& path, const Hypergraph& h) {
    for (EdgeId k = 0; k < h.num_edges(); ++k)
        if (h.edge(k).empty())
            throw DomainError("hyperedge " + std::to_string(k) + " is empty; the edge-list format cannot store it");
    std::ofstream out(path);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out << "#n=" << h.num_nodes() << " m=" << h.num_edges() << '\n';
    for (EdgeId k = 0; k < h.num_edges(); ++k) {
        auto e = h.edge(k);
        for (std::size_t p = 0; p < e.size(); ++p) out << (p ? " " : "") << e[p];
        out << '\n';
    }
}

std::vector<std::size_t> LabelVector::labeled_indices() const {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < labels.size(); ++i)
        if (is_labeled(i)) idx.push_back(i);
    return idx;
}

LabelVector load_labels(const std::filesystem::path& path, std::optional<std::size_t> num_classes) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    LabelVector y;
    std::string line;
    std::size_t lineno = 0;
    std::int64_t max_label = -1;
    while (std::getline(in, line)) {
        ++lineno;
        std::istringstream ls(line);
        std::string tok;
        if (!(ls >> tok)) continue;
        std::int64_t v = 0;
        auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
        if (ec != std::errc{} || ptr != tok.data() + tok.size() || v < -1)
            throw ParseError("malformed label '" + tok + "'", lineno);
        y.labels.push_back(static_cast<std::int32_t>(v));
        max_label = std::max(max_label, v);
    }
    y.num_classes = num_classes ? *num_classes : static_cast<std::size_t>(max_label + 1);
    if (max_label >= static_cast<std::int64_t>(y.num_classes))
        throw BoundsError("label " + std::to_string(max_label) + " >= class count " +
                          std::to_string(y.num_classes));
    return y;
}

void save_labels(const std::filesystem::path& path, const LabelVector& y) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    for (auto v : y.labels) out << v << '\n';
}

}  // namespace tfhnn
