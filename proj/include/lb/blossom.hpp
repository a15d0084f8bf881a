// Copyright 2026 The latblossom Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef LB_BLOSSOM_HPP
#define LB_BLOSSOM_HPP

#include <algorithm>
#include <cstdint>
#include <functional>
#include <limits>
#include <vector>

#include "lb/common.hpp"
#include "lb/graph.hpp"

namespace lb {

using Weight = int64_t;

constexpr int32_t kNoId = -1;
constexpr Weight kInfWeight = std::numeric_limits<Weight>::max() / 4;
constexpr Weight kInfRadius = kInfWeight;

// Boundary endpoints of matching edges. These never become nodes: a boundary
// carries no dual, never enters a tree, and a tight vertex-boundary edge is
// an immediate augmentation target.
constexpr int32_t kBoundaryTopId = -2;
constexpr int32_t kBoundaryBottomId = -3;

inline bool is_boundary_id(int32_t id) { return id <= kBoundaryTopId; }

// Tie-break keys: boundary targets sort after every vertex id.
constexpr int64_t kBoundaryKeyTop = int64_t{1} << 40;
constexpr int64_t kBoundaryKeyBottom = (int64_t{1} << 40) + 1;

inline int64_t target_key(int32_t endpoint) {
    if (endpoint == kBoundaryTopId) return kBoundaryKeyTop;
    if (endpoint == kBoundaryBottomId) return kBoundaryKeyBottom;
    return endpoint;
}

struct MatchEdge {
    int32_t u;  // vertex id
    int32_t v;  // vertex id or boundary sentinel
    Weight w;   // doubled units
    bool alive;
};

enum class NodeLabel : uint8_t { Free, Outer, Inner };

/// A node is a vertex or a blossom. Blossom children and cycle edges are
/// immutable after creation; the internal pairing is derived from the cycle
/// and the current external attachment, so re-matching a blossom from outside
/// requires no internal rewrite.
struct MatchNode {
    bool is_blossom = false;
    bool alive = true;
    Weight dual = 0;                  // y for vertices, Y for blossoms
    int32_t parent_blossom = kNoId;   // immediate enclosing blossom
    NodeLabel label = NodeLabel::Free;
    int32_t mate_edge = kNoId;        // valid for top-level nodes
    int32_t tree_parent_edge = kNoId;
    int32_t vertex = kNoId;           // for vertex nodes
    std::vector<int32_t> children;    // odd cycle of node ids
    std::vector<int32_t> cycle_edges;  // cycle_edges[i] joins children[i], children[i+1 mod n]
};

struct VertexMatch {
    int32_t u;
    int32_t v;  // vertex id or boundary sentinel
    int32_t edge;
};

struct MatchResult {
    std::vector<VertexMatch> pairs;
    Weight total_doubled = 0;

    Weight weight() const { return total_doubled / 2; }
};

struct MatcherOptions {
    bool journal = false;
    bool verify_certificate = true;
    bool invariant_monitor = false;
};

struct MatcherStats {
    int64_t trees = 0;
    int64_t augmentations = 0;
    int64_t grows = 0;
    int64_t blossoms_formed = 0;
    int64_t expansions = 0;
    int64_t ignores = 0;
    int64_t dual_adjusts = 0;
    int64_t explorations = 0;
    int64_t certificate_checks = 0;
};

class BlossomMatcher {
  public:
    explicit BlossomMatcher(MatcherOptions options = {}) : options_(options) {}

    // -- graph construction ------------------------------------------------

    int32_t add_vertex() {
        int32_t v = static_cast<int32_t>(node_of_vertex_.size());
        int32_t node = new_node();
        nodes_[node].vertex = v;
        node_of_vertex_.push_back(node);
        adj_.emplace_back();
        vertex_alive_.push_back(1);
        explored_radius_.push_back(kInfRadius);
        record(JOp::NewVertex, v, 0);
        return v;
    }

    int32_t add_edge(int32_t u, int32_t v, Weight w) {
        int32_t e = static_cast<int32_t>(edges_.size());
        edges_.push_back({u, v, w, true});
        adj_[u].push_back(e);
        if (!is_boundary_id(v)) adj_[v].push_back(e);
        edge_ignored_.push_back(0);
        record(JOp::NewEdge, e, 0);
        return e;
    }

    bool adjacent(int32_t u, int32_t v) const {
        for (int32_t e : adj_[u]) {
            const MatchEdge& me = edges_[e];
            if (me.alive && (me.u == v || me.v == v)) return true;
        }
        return false;
    }

    void set_explored_radius(int32_t v, Weight r) {
        record(JOp::SetRadius, v, explored_radius_[v]);
        explored_radius_[v] = r;
    }

    /// Load a prebuilt 2-D syndrome graph. Vertices get ids 0..k-1 in the
    /// graph's (row, col) order.
    void load(const SyndromeGraph& g) {
        for (size_t i = 0; i < g.vertices.size(); ++i) add_vertex();
        for (const SyndromeGraph::Edge& e : g.edges) add_edge(e.u, e.v, e.w);
        for (const SyndromeGraph::BoundaryEdge& b : g.boundary_edges)
            add_edge(b.v, b.side == Boundary::Top ? kBoundaryTopId : kBoundaryBottomId, b.w);
    }

    // Exploration hook: called before every dual adjustment, once per outer
    // tree vertex, with the vertex's post-adjustment ball radius (doubled).
    // The hook guards the temporal boundary (throws FutureDataNeeded when the
    // ball would cover unmeasured rounds), grows the explored region when it
    // is smaller than the ball, and returns true if any edges were added.
    std::function<bool(int32_t vertex, Weight needed)> ensure_radius;
    // Called during journal undo when a vertex is removed, so owners can
    // shrink their coordinate registries in lockstep.
    std::function<void(int32_t vertex)> on_vertex_removed;
    // Test observer, fired after every dual adjustment with the delta applied.
    std::function<void(Weight delta)> post_adjust_hook;

    // -- matching ----------------------------------------------------------

    /// Match every unmatched vertex, lowest id first. For closed graphs only
    /// (exploration must not demand future data).
    MatchResult run_all() {
        for (int32_t v = 0; v < static_cast<int32_t>(node_of_vertex_.size()); ++v) {
            if (!vertex_alive_[v]) continue;
            int32_t t = top_of_vertex(v);
            if (nodes_[t].mate_edge == kNoId) grow_tree_from(v);
        }
        MatchResult result = extract_matching();
        if (options_.verify_certificate) verify_certificate(result);
        return result;
    }

    /// Grow one alternating tree rooted at (the top node of) `v` and augment.
    /// Throws FutureDataNeeded if growth would need unmeasured rounds; the
    /// caller is expected to undo to a mark taken beforehand.
    void grow_tree_from(int32_t v) {
        int32_t root = top_of_vertex(v);
        if (nodes_[root].mate_edge != kNoId)
            throw Error(ErrorCode::GraphInfeasible, "tree root must be unmatched");
        stats_.trees += 1;
        set_root(root);
        set_label(root, NodeLabel::Outer);
        tree_push(root);
        while (true) {
            Scan scan = scan_candidates();
            if (scan.has_tight) {
                if (dispatch_tight(scan)) return;  // augmented
                continue;
            }
            int32_t b = find_inner_blossom_y0();
            if (b != kNoId) {
                expand_blossom(b);
                continue;
            }
            if (scan.delta >= kInfWeight)
                throw Error(ErrorCode::GraphInfeasible, "alternating tree cannot reach a match");
            if (scan.delta == 0)
                throw Error(ErrorCode::NoProgress, "zero dual adjustment: missed tight edge");
            if (ensure_exploration(scan.delta)) continue;  // new candidates may lower delta
            dual_adjust(scan.delta);
        }
    }

    bool vertex_matched(int32_t v) const {
        return nodes_[top_of_vertex(v)].mate_edge != kNoId;
    }

    /// Read the current matching down to vertex level. Requires every alive
    /// vertex to be matched.
    MatchResult extract_matching() const {
        MatchResult result;
        std::vector<uint8_t> seen(node_of_vertex_.size(), 0);
        for (int32_t v = 0; v < static_cast<int32_t>(node_of_vertex_.size()); ++v) {
            if (!vertex_alive_[v] || seen[v]) continue;
            int32_t t = top_of_vertex(v);
            int32_t e = nodes_[t].mate_edge;
            if (e == kNoId)
                throw Error(ErrorCode::GraphInfeasible, "extraction requires a perfect matching");
            const MatchEdge& me = edges_[e];
            if (!is_boundary_id(me.v) && top_of_vertex(me.v) == t && top_of_vertex(me.u) != t)
                continue;  // handled from the other side's pass
            emit_match(e, result, seen);
        }
        for (int32_t v = 0; v < static_cast<int32_t>(node_of_vertex_.size()); ++v)
            if (vertex_alive_[v] && !seen[v])
                throw Error(ErrorCode::GraphInfeasible, "vertex left unmatched by extraction");
        return result;
    }

    /// Optimality certificate: dual feasibility plus complementary slackness.
    void verify_certificate(const MatchResult& result) const {
        stats_.certificate_checks += 1;
        for (const MatchEdge& e : edges_) {
            if (!e.alive) continue;
            if (full_slack(e) < 0)
                throw Error(ErrorCode::GraphInfeasible, "dual infeasible: negative edge slack");
        }
        std::vector<int32_t> degree(node_of_vertex_.size(), 0);
        for (const VertexMatch& m : result.pairs) {
            const MatchEdge& e = edges_[m.edge];
            if (full_slack(e) != 0)
                throw Error(ErrorCode::GraphInfeasible, "matched edge is not tight");
            degree[m.u] += 1;
            if (!is_boundary_id(m.v)) degree[m.v] += 1;
        }
        for (int32_t v = 0; v < static_cast<int32_t>(node_of_vertex_.size()); ++v)
            if (vertex_alive_[v] && degree[v] != 1)
                throw Error(ErrorCode::GraphInfeasible, "vertex not matched exactly once");
        for (size_t n = 0; n < nodes_.size(); ++n) {
            if (!nodes_[n].is_blossom || !nodes_[n].alive) continue;
            if (nodes_[n].dual < 0)
                throw Error(ErrorCode::GraphInfeasible, "negative blossom dual");
            if (nodes_[n].dual > 0 && count_crossings(static_cast<int32_t>(n), result) != 1)
                throw Error(ErrorCode::GraphInfeasible,
                            "blossom with positive dual lacks a unique crossing edge");
        }
    }

    /// Dual feasibility over every alive edge and blossom; used by the
    /// invariant monitor during growth.
    void check_dual_feasibility() const {
        for (const MatchEdge& e : edges_)
            if (e.alive && full_slack(e) < 0)
                throw Error(ErrorCode::GraphInfeasible, "dual infeasible during growth");
        for (const MatchNode& n : nodes_)
            if (n.is_blossom && n.alive && n.dual < 0)
                throw Error(ErrorCode::GraphInfeasible, "negative blossom dual during growth");
    }

    // -- journal -----------------------------------------------------------

    struct Mark {
        size_t ops;
        size_t pool;
    };

    Mark mark() const { return {journal_.size(), pool_.size()}; }

    void undo_to(Mark m) {
        if (m.ops > journal_.size() || m.pool > pool_.size())
            throw Error(ErrorCode::InvalidMark, "mark does not belong to this journal");
        while (journal_.size() > m.ops) {
            JournalOp op = journal_.back();
            journal_.pop_back();
            apply_undo(op);
        }
        pool_.resize(m.pool);
    }

    void clear_journal() { journal_.clear(); pool_.clear(); }
    size_t journal_size() const { return journal_.size(); }

    // -- trimming (permanent, non-journaled) --------------------------------

    /// Drop a vertex and its incident edges. Caller guarantees: journal is
    /// empty, the vertex is matched, not in a blossom, and its mate is being
    /// dropped in the same batch (or is a boundary).
    void trim_vertex(int32_t v) {
        if (!journal_.empty())
            throw Error(ErrorCode::InvalidMark, "cannot trim with journal entries outstanding");
        for (int32_t e : adj_[v]) {
            MatchEdge& me = edges_[e];
            if (!me.alive) continue;
            me.alive = false;
            int32_t other = me.u == v ? me.v : me.u;
            if (!is_boundary_id(other)) {
                auto& oa = adj_[other];
                oa.erase(std::remove(oa.begin(), oa.end(), e), oa.end());
            }
        }
        adj_[v].clear();
        vertex_alive_[v] = 0;
        nodes_[node_of_vertex_[v]].alive = false;
    }

    // -- accessors ----------------------------------------------------------

    int32_t vertex_count() const { return static_cast<int32_t>(node_of_vertex_.size()); }
    bool is_vertex_alive(int32_t v) const { return vertex_alive_[v] != 0; }
    const MatchEdge& edge(int32_t e) const { return edges_[e]; }
    size_t edge_count() const { return edges_.size(); }
    Weight explored_radius(int32_t v) const { return explored_radius_[v]; }
    const MatcherStats& stats() const { return stats_; }
    const MatcherOptions& options() const { return options_; }
    MatcherOptions& options() { return options_; }

    Weight vertex_dual(int32_t v) const {
        Weight acc = 0;
        for (int32_t n = node_of_vertex_[v]; n != kNoId; n = nodes_[n].parent_blossom)
            acc += nodes_[n].dual;
        return acc;
    }

    int32_t top_of_vertex(int32_t v) const { return top(node_of_vertex_[v]); }
    const MatchNode& node(int32_t n) const { return nodes_[n]; }
    size_t node_count() const { return nodes_.size(); }

    int32_t mate_edge_of_vertex(int32_t v) const { return nodes_[top_of_vertex(v)].mate_edge; }

    size_t alive_blossom_count() const {
        size_t c = 0;
        for (const MatchNode& n : nodes_)
            if (n.is_blossom && n.alive) ++c;
        return c;
    }

    /// Deep copy of all matching-relevant state, for exactness tests.
    struct Snapshot {
        std::vector<MatchNode> nodes;
        std::vector<int32_t> node_of_vertex;
        std::vector<uint8_t> vertex_alive;
        std::vector<MatchEdge> edges;
        std::vector<std::vector<int32_t>> adj;
        std::vector<uint8_t> edge_ignored;
        std::vector<Weight> explored_radius;
        std::vector<int32_t> tree_nodes;
        std::vector<int32_t> tree_ignored;
        int32_t tree_root;

        friend bool operator==(const Snapshot& a, const Snapshot& b) {
            auto node_eq = [](const MatchNode& x, const MatchNode& y) {
                return x.is_blossom == y.is_blossom && x.alive == y.alive && x.dual == y.dual &&
                       x.parent_blossom == y.parent_blossom && x.label == y.label &&
                       x.mate_edge == y.mate_edge && x.tree_parent_edge == y.tree_parent_edge &&
                       x.vertex == y.vertex && x.children == y.children &&
                       x.cycle_edges == y.cycle_edges;
            };
            auto edge_eq = [](const MatchEdge& x, const MatchEdge& y) {
                return x.u == y.u && x.v == y.v && x.w == y.w && x.alive == y.alive;
            };
            if (a.nodes.size() != b.nodes.size() || a.edges.size() != b.edges.size()) return false;
            for (size_t i = 0; i < a.nodes.size(); ++i)
                if (!node_eq(a.nodes[i], b.nodes[i])) return false;
            for (size_t i = 0; i < a.edges.size(); ++i)
                if (!edge_eq(a.edges[i], b.edges[i])) return false;
            return a.node_of_vertex == b.node_of_vertex && a.vertex_alive == b.vertex_alive &&
                   a.adj == b.adj && a.edge_ignored == b.edge_ignored &&
                   a.explored_radius == b.explored_radius && a.tree_nodes == b.tree_nodes &&
                   a.tree_ignored == b.tree_ignored && a.tree_root == b.tree_root;
        }
    };

    Snapshot snapshot() const {
        return {nodes_,        node_of_vertex_, vertex_alive_, edges_,        adj_,
                edge_ignored_, explored_radius_, tree_nodes_,   tree_ignored_, tree_root_};
    }

  private:
    enum class JOp : uint8_t {
        DualAdd,
        SetLabel,
        SetMate,
        SetTreeParent,
        SetParentBlossom,
        NewBlossom,
        SetBlossomAlive,
        NewVertex,
        NewEdge,
        SetIgnored,
        SetRadius,
        TreePush,
        TreeSnapshot,
        IgnorePush,
        IgnoreSnapshot,
        SetRoot,
    };

    struct JournalOp {
        JOp kind;
        int32_t a;
        int64_t b;
    };

    struct Scan {
        bool has_tight = false;
        int32_t edge = kNoId;
        int32_t src_vertex = kNoId;
        int64_t dst_key = 0;
        Weight delta = kInfWeight;
    };

    // -- journaled field mutations ------------------------------------------

    void record(JOp kind, int32_t a, int64_t b) {
        if (options_.journal) journal_.push_back({kind, a, b});
    }

    int32_t new_node() {
        nodes_.emplace_back();
        return static_cast<int32_t>(nodes_.size()) - 1;
    }

    void dual_add(int32_t node, Weight delta) {
        nodes_[node].dual += delta;
        record(JOp::DualAdd, node, delta);
    }

    void set_label(int32_t node, NodeLabel l) {
        record(JOp::SetLabel, node, static_cast<int64_t>(nodes_[node].label));
        nodes_[node].label = l;
    }

    void set_mate(int32_t node, int32_t e) {
        record(JOp::SetMate, node, nodes_[node].mate_edge);
        nodes_[node].mate_edge = e;
    }

    void set_tree_parent(int32_t node, int32_t e) {
        record(JOp::SetTreeParent, node, nodes_[node].tree_parent_edge);
        nodes_[node].tree_parent_edge = e;
    }

    void set_parent_blossom(int32_t node, int32_t b) {
        record(JOp::SetParentBlossom, node, nodes_[node].parent_blossom);
        nodes_[node].parent_blossom = b;
    }

    void set_blossom_alive(int32_t node, bool alive) {
        record(JOp::SetBlossomAlive, node, nodes_[node].alive ? 1 : 0);
        nodes_[node].alive = alive;
    }

    void set_ignored(int32_t e, uint8_t val) {
        record(JOp::SetIgnored, e, edge_ignored_[e]);
        edge_ignored_[e] = val;
    }

    void set_root(int32_t node) {
        record(JOp::SetRoot, 0, tree_root_);
        tree_root_ = node;
    }

    void tree_push(int32_t node) {
        tree_nodes_.push_back(node);
        record(JOp::TreePush, node, 0);
    }

    void tree_snapshot() {
        if (options_.journal) {
            pool_.push_back(tree_nodes_);
            record(JOp::TreeSnapshot, static_cast<int32_t>(pool_.size()) - 1, 0);
        }
    }

    void ignore_push(int32_t e) {
        tree_ignored_.push_back(e);
        record(JOp::IgnorePush, e, 0);
    }

    void ignore_snapshot() {
        if (options_.journal) {
            pool_.push_back(tree_ignored_);
            record(JOp::IgnoreSnapshot, static_cast<int32_t>(pool_.size()) - 1, 0);
        }
    }

    void apply_undo(const JournalOp& op) {
        switch (op.kind) {
            case JOp::DualAdd: nodes_[op.a].dual -= op.b; break;
            case JOp::SetLabel: nodes_[op.a].label = static_cast<NodeLabel>(op.b); break;
            case JOp::SetMate: nodes_[op.a].mate_edge = static_cast<int32_t>(op.b); break;
            case JOp::SetTreeParent:
                nodes_[op.a].tree_parent_edge = static_cast<int32_t>(op.b);
                break;
            case JOp::SetParentBlossom:
                nodes_[op.a].parent_blossom = static_cast<int32_t>(op.b);
                break;
            case JOp::NewBlossom: nodes_.pop_back(); break;
            case JOp::SetBlossomAlive: nodes_[op.a].alive = op.b != 0; break;
            case JOp::NewVertex: {
                int32_t v = op.a;
                nodes_.pop_back();
                node_of_vertex_.pop_back();
                adj_.pop_back();
                vertex_alive_.pop_back();
                explored_radius_.pop_back();
                if (on_vertex_removed) on_vertex_removed(v);
                break;
            }
            case JOp::NewEdge: {
                const MatchEdge& e = edges_.back();
                adj_[e.u].pop_back();
                if (!is_boundary_id(e.v)) adj_[e.v].pop_back();
                edges_.pop_back();
                edge_ignored_.pop_back();
                break;
            }
            case JOp::SetIgnored: edge_ignored_[op.a] = static_cast<uint8_t>(op.b); break;
            case JOp::SetRadius: explored_radius_[op.a] = op.b; break;
            case JOp::TreePush: tree_nodes_.pop_back(); break;
            case JOp::TreeSnapshot: tree_nodes_ = pool_[op.a]; break;
            case JOp::IgnorePush: tree_ignored_.pop_back(); break;
            case JOp::IgnoreSnapshot: tree_ignored_ = pool_[op.a]; break;
            case JOp::SetRoot: tree_root_ = static_cast<int32_t>(op.b); break;
        }
    }

    // -- structure queries ---------------------------------------------------

    int32_t top(int32_t node) const {
        while (nodes_[node].parent_blossom != kNoId) node = nodes_[node].parent_blossom;
        return node;
    }

    bool node_contains_vertex(int32_t node, int32_t v) const {
        for (int32_t n = node_of_vertex_[v]; n != kNoId; n = nodes_[n].parent_blossom)
            if (n == node) return true;
        return false;
    }

    /// Endpoint of edge `e` lying inside `node`.
    int32_t endpoint_in(const MatchEdge& e, int32_t node) const {
        if (!is_boundary_id(e.v) && node_contains_vertex(node, e.v)) {
            if (node_contains_vertex(node, e.u))
                throw Error(ErrorCode::GraphInfeasible, "edge has both endpoints in one node");
            return e.v;
        }
        return e.u;
    }

    /// Child of blossom `b` containing vertex `v`.
    int32_t child_containing(int32_t b, int32_t v) const {
        int32_t n = node_of_vertex_[v];
        while (nodes_[n].parent_blossom != b) {
            n = nodes_[n].parent_blossom;
            if (n == kNoId)
                throw Error(ErrorCode::GraphInfeasible, "vertex not inside expected blossom");
        }
        return n;
    }

    int32_t tree_parent_node(int32_t node) const {
        int32_t e = nodes_[node].tree_parent_edge;
        const MatchEdge& me = edges_[e];
        int32_t inside = endpoint_in(me, node);
        int32_t other = me.u == inside ? me.v : me.u;
        return top(node_of_vertex_[other]);
    }

    void collect_vertex_duals(int32_t node, Weight acc,
                              std::vector<std::pair<int32_t, Weight>>& out) const {
        const MatchNode& n = nodes_[node];
        if (!n.is_blossom) {
            out.emplace_back(n.vertex, acc + n.dual);
            return;
        }
        for (int32_t c : n.children) collect_vertex_duals(c, acc + n.dual, out);
    }

    /// Slack honoring blossom nesting: only duals of blossoms containing
    /// exactly one endpoint count. For boundary edges only the vertex side
    /// contributes.
    Weight full_slack(const MatchEdge& e) const {
        Weight s = e.w - vertex_dual(e.u);
        if (!is_boundary_id(e.v)) {
            s -= vertex_dual(e.v);
            // add back duals of blossoms containing both endpoints
            for (int32_t n = node_of_vertex_[e.u]; n != kNoId; n = nodes_[n].parent_blossom)
                if (nodes_[n].is_blossom && node_contains_vertex(n, e.v)) s += 2 * nodes_[n].dual;
        }
        return s;
    }

    int32_t count_crossings(int32_t blossom, const MatchResult& result) const {
        int32_t c = 0;
        for (const VertexMatch& m : result.pairs) {
            bool inu = node_contains_vertex(blossom, m.u);
            bool inv = !is_boundary_id(m.v) && node_contains_vertex(blossom, m.v);
            if (inu != inv) ++c;
        }
        return c;
    }

    // -- scanning -------------------------------------------------------------

    Scan scan_candidates() {
        Scan scan;
        scratch_duals_.clear();
        for (int32_t tn : tree_nodes_) {
            if (nodes_[tn].label != NodeLabel::Outer) continue;
            size_t begin = scratch_duals_.size();
            collect_vertex_duals(tn, 0, scratch_duals_);
            for (size_t i = begin; i < scratch_duals_.size(); ++i) {
                int32_t u = scratch_duals_[i].first;
                Weight du = scratch_duals_[i].second;
                for (int32_t eid : adj_[u]) {
                    const MatchEdge& e = edges_[eid];
                    if (!e.alive) continue;
                    int32_t far = e.u == u ? e.v : e.u;
                    Weight slack;
                    int64_t key;
                    if (is_boundary_id(far)) {
                        slack = e.w - du;
                        key = target_key(far);
                    } else {
                        int32_t ft = top_of_vertex(far);
                        if (ft == tn) continue;
                        // an ignore mark applies only while the far node is
                        // still inner; absorption into an outer blossom makes
                        // the edge a live candidate again
                        if (edge_ignored_[eid] && nodes_[ft].label == NodeLabel::Inner) continue;
                        slack = e.w - du - vertex_dual(far);
                        if (nodes_[ft].label == NodeLabel::Outer) {
                            // outer-outer slack shrinks twice as fast
                            if ((slack & 1) != 0)
                                throw Error(ErrorCode::NoProgress, "odd outer-outer slack");
                            slack /= 2;
                        } else if (nodes_[ft].label == NodeLabel::Inner) {
                            if (slack > 0) continue;  // grows under adjustment
                        }
                        key = far;
                    }
                    if (slack < 0)
                        throw Error(ErrorCode::GraphInfeasible, "negative slack encountered");
                    if (slack == 0) {
                        if (!scan.has_tight || u < scan.src_vertex ||
                            (u == scan.src_vertex && key < scan.dst_key)) {
                            scan.has_tight = true;
                            scan.edge = eid;
                            scan.src_vertex = u;
                            scan.dst_key = key;
                        }
                    } else if (slack < scan.delta) {
                        scan.delta = slack;
                    }
                }
            }
        }
        if (!scan.has_tight) {
            for (int32_t tn : tree_nodes_)
                if (nodes_[tn].label == NodeLabel::Inner && nodes_[tn].is_blossom)
                    scan.delta = std::min(scan.delta, nodes_[tn].dual);
        }
        return scan;
    }

    int32_t find_inner_blossom_y0() const {
        int32_t best = kNoId;
        for (int32_t tn : tree_nodes_)
            if (nodes_[tn].label == NodeLabel::Inner && nodes_[tn].is_blossom &&
                nodes_[tn].dual == 0 && (best == kNoId || tn < best))
                best = tn;
        return best;
    }

    /// Make sure every outer vertex has candidate edges out to its
    /// post-adjustment ball. Returns true if any exploration happened (new
    /// edges may change the minimum slack).
    bool ensure_exploration(Weight delta) {
        if (!ensure_radius) return false;
        bool explored = false;
        for (int32_t tn : tree_nodes_) {
            if (nodes_[tn].label != NodeLabel::Outer) continue;
            scratch_duals2_.clear();
            collect_vertex_duals(tn, 0, scratch_duals2_);
            for (auto& [u, du] : scratch_duals2_) {
                if (ensure_radius(u, du + delta)) {
                    stats_.explorations += 1;
                    explored = true;
                }
            }
        }
        return explored;
    }

    void dual_adjust(Weight delta) {
        for (int32_t tn : tree_nodes_)
            dual_add(tn, nodes_[tn].label == NodeLabel::Outer ? delta : -delta);
        stats_.dual_adjusts += 1;
        if (options_.invariant_monitor) check_dual_feasibility();
        if (post_adjust_hook) post_adjust_hook(delta);
    }

    // -- tree operations --------------------------------------------------------

    /// Returns true when the tree augmented (and was torn down).
    bool dispatch_tight(const Scan& scan) {
        const MatchEdge& e = edges_[scan.edge];
        int32_t src = scan.src_vertex;
        int32_t far = e.u == src ? e.v : e.u;
        if (is_boundary_id(far)) {
            augment(scan.edge, src, kNoId);
            return true;
        }
        int32_t ft = top_of_vertex(far);
        NodeLabel fl = nodes_[ft].label;
        if (fl == NodeLabel::Outer) {
            form_blossom(scan.edge);
            return false;
        }
        if (fl == NodeLabel::Inner) {
            set_ignored(scan.edge, 1);
            ignore_push(scan.edge);
            stats_.ignores += 1;
            return false;
        }
        int32_t fmate = nodes_[ft].mate_edge;
        if (fmate == kNoId || is_boundary_id(edges_[fmate].v)) {
            // unmatched vertex, or one whose mate is a boundary: augmenting
            // through it strictly grows the matched set
            augment(scan.edge, src, ft);
            return true;
        }
        grow(scan.edge, ft, fmate);
        return false;
    }

    void grow(int32_t eid, int32_t far_top, int32_t mate_eid) {
        set_label(far_top, NodeLabel::Inner);
        set_tree_parent(far_top, eid);
        tree_push(far_top);
        const MatchEdge& me = edges_[mate_eid];
        int32_t inside = endpoint_in(me, far_top);
        int32_t other = me.u == inside ? me.v : me.u;
        int32_t partner = top_of_vertex(other);
        set_label(partner, NodeLabel::Outer);
        set_tree_parent(partner, mate_eid);
        tree_push(partner);
        stats_.grows += 1;
    }

    void augment(int32_t eid, int32_t src_vertex, int32_t far_top) {
        if (far_top != kNoId) set_mate(far_top, eid);
        int32_t cur = top_of_vertex(src_vertex);
        int32_t cur_mate = eid;
        while (true) {
            set_mate(cur, cur_mate);
            if (cur == tree_root_) break;
            int32_t pe = nodes_[cur].tree_parent_edge;
            const MatchEdge& pme = edges_[pe];
            int32_t inside = endpoint_in(pme, cur);
            int32_t inner = top_of_vertex(pme.u == inside ? pme.v : pme.u);
            int32_t ue = nodes_[inner].tree_parent_edge;
            set_mate(inner, ue);
            const MatchEdge& ume = edges_[ue];
            int32_t inner_side = endpoint_in(ume, inner);
            cur = top_of_vertex(ume.u == inner_side ? ume.v : ume.u);
            cur_mate = ue;
        }
        destroy_tree();
        stats_.augmentations += 1;
    }

    void destroy_tree() {
        for (int32_t tn : tree_nodes_) {
            set_label(tn, NodeLabel::Free);
            set_tree_parent(tn, kNoId);
        }
        for (int32_t e : tree_ignored_) set_ignored(e, 0);
        tree_snapshot();
        tree_nodes_.clear();
        ignore_snapshot();
        tree_ignored_.clear();
        set_root(kNoId);
    }

    void form_blossom(int32_t eid) {
        const MatchEdge& e = edges_[eid];
        int32_t u_top = top_of_vertex(e.u);
        int32_t v_top = top_of_vertex(e.v);
        if (u_top == v_top)
            throw Error(ErrorCode::NotSameTree, "cycle edge endpoints share a node");
        // paths to the root
        std::vector<int32_t> path_u;
        for (int32_t n = u_top;; n = tree_parent_node(n)) {
            path_u.push_back(n);
            if (n == tree_root_) break;
        }
        mark_scratch_.assign(nodes_.size(), 0);
        for (int32_t n : path_u) mark_scratch_[n] = 1;
        std::vector<int32_t> path_v;
        int32_t lca = kNoId;
        for (int32_t n = v_top;; n = tree_parent_node(n)) {
            if (mark_scratch_[n]) {
                lca = n;
                break;
            }
            path_v.push_back(n);
            if (n == tree_root_) break;
        }
        if (lca == kNoId) throw Error(ErrorCode::NotSameTree, "no common tree ancestor");
        size_t u_len = 0;
        while (path_u[u_len] != lca) ++u_len;  // path_u[0..u_len-1] strictly below lca

        std::vector<int32_t> children;
        std::vector<int32_t> cycle;
        children.push_back(lca);
        for (size_t i = u_len; i-- > 0;) {
            children.push_back(path_u[i]);
            cycle.push_back(nodes_[path_u[i]].tree_parent_edge);
        }
        cycle.push_back(eid);
        for (size_t i = 0; i < path_v.size(); ++i) {
            children.push_back(path_v[i]);
            // for the last entry this is the closing edge back to the lca
            cycle.push_back(nodes_[path_v[i]].tree_parent_edge);
        }
        if (children.size() % 2 == 0 || children.size() < 3)
            throw Error(ErrorCode::NotSameTree, "blossom cycle must have odd length >= 3");

        int32_t b = new_node();
        MatchNode& bn = nodes_[b];
        bn.is_blossom = true;
        bn.alive = true;
        bn.dual = 0;
        bn.parent_blossom = kNoId;
        bn.vertex = kNoId;
        bn.label = NodeLabel::Free;
        bn.mate_edge = kNoId;
        bn.tree_parent_edge = kNoId;
        bn.children = children;
        bn.cycle_edges = cycle;
        record(JOp::NewBlossom, b, 0);

        set_label(b, NodeLabel::Outer);
        set_mate(b, nodes_[lca].mate_edge);
        set_tree_parent(b, nodes_[lca].tree_parent_edge);
        for (int32_t c : children) {
            set_parent_blossom(c, b);
            set_label(c, NodeLabel::Free);
            set_tree_parent(c, kNoId);
        }
        tree_snapshot();
        std::vector<int32_t> rebuilt;
        rebuilt.reserve(tree_nodes_.size());
        for (int32_t tn : tree_nodes_)
            if (nodes_[tn].parent_blossom == kNoId) rebuilt.push_back(tn);
        rebuilt.push_back(b);
        tree_nodes_ = rebuilt;
        if (tree_root_ == lca) set_root(b);
        stats_.blossoms_formed += 1;
    }

    void expand_blossom(int32_t b) {
        MatchNode& bn = nodes_[b];
        if (!bn.is_blossom) throw Error(ErrorCode::ExpandOuter, "only blossoms expand");
        if (nodes_[b].label != NodeLabel::Inner)
            throw Error(ErrorCode::ExpandOuter, "only inner blossoms expand");
        if (bn.dual != 0)
            throw Error(ErrorCode::ExpandNonzeroY, "blossom dual must be zero to expand");
        const int n = static_cast<int>(bn.children.size());
        int32_t e_up = bn.tree_parent_edge;
        int32_t e_mate = bn.mate_edge;
        int32_t x_up = endpoint_in(edges_[e_up], b);
        int32_t x_mate = endpoint_in(edges_[e_mate], b);
        int32_t c_up = child_containing(b, x_up);
        int32_t c_base = child_containing(b, x_mate);
        int base_idx = 0, up_idx = 0;
        for (int i = 0; i < n; ++i) {
            if (bn.children[i] == c_base) base_idx = i;
            if (bn.children[i] == c_up) up_idx = i;
        }
        auto child_at = [&](int rel) { return bn.children[(base_idx + rel) % n]; };
        auto cycle_at = [&](int rel) { return bn.cycle_edges[(base_idx + rel) % n]; };

        // dissolve
        set_blossom_alive(b, false);
        for (int32_t c : bn.children) set_parent_blossom(c, kNoId);
        set_label(b, NodeLabel::Free);
        set_tree_parent(b, kNoId);
        set_mate(b, kNoId);

        // re-pair around the new base: pairs (1,2), (3,4), ... joined by the
        // cycle edge between them
        set_mate(c_base, e_mate);
        for (int rel = 1; rel + 1 < n; rel += 2) {
            int32_t eid = cycle_at(rel);
            set_mate(child_at(rel), eid);
            set_mate(child_at(rel + 1), eid);
        }

        // even-length alternating path from the entry child to the base stays
        // in the tree; everything else leaves as matched pairs
        int rel_up = (up_idx - base_idx + n) % n;
        std::vector<int32_t> path;
        if (rel_up % 2 == 0) {
            for (int r = rel_up; r >= 0; --r) path.push_back(child_at(r));
        } else {
            for (int r = rel_up; r <= n; ++r) path.push_back(child_at(r % n));
        }
        for (int32_t c : bn.children) {
            set_label(c, NodeLabel::Free);
            set_tree_parent(c, kNoId);
        }
        set_label(path[0], NodeLabel::Inner);
        set_tree_parent(path[0], e_up);
        for (size_t i = 1; i < path.size(); ++i) {
            set_label(path[i], i % 2 == 1 ? NodeLabel::Outer : NodeLabel::Inner);
            int rel_prev = rel_up % 2 == 0 ? rel_up - static_cast<int>(i) + 1
                                           : rel_up + static_cast<int>(i) - 1;
            int32_t joining = rel_up % 2 == 0 ? cycle_at(rel_prev - 1) : cycle_at(rel_prev);
            set_tree_parent(path[i], joining);
        }

        tree_snapshot();
        std::vector<int32_t> rebuilt;
        rebuilt.reserve(tree_nodes_.size() + path.size());
        for (int32_t tn : tree_nodes_)
            if (tn != b) rebuilt.push_back(tn);
        for (int32_t c : path) rebuilt.push_back(c);
        tree_nodes_ = rebuilt;
        stats_.expansions += 1;
    }

    // -- extraction ---------------------------------------------------------------

    void emit_match(int32_t eid, MatchResult& result, std::vector<uint8_t>& seen) const {
        const MatchEdge& e = edges_[eid];
        result.pairs.push_back({e.u, e.v, eid});
        result.total_doubled += e.w;
        resolve_internal(top_of_vertex(e.u), e.u, result, seen);
        if (!is_boundary_id(e.v)) resolve_internal(top_of_vertex(e.v), e.v, result, seen);
    }

    void resolve_internal(int32_t node, int32_t attach, MatchResult& result,
                          std::vector<uint8_t>& seen) const {
        const MatchNode& nd = nodes_[node];
        if (!nd.is_blossom) {
            if (seen[nd.vertex])
                throw Error(ErrorCode::GraphInfeasible, "vertex matched more than once");
            seen[nd.vertex] = 1;
            return;
        }
        int32_t base = child_containing(node, attach);
        const int n = static_cast<int>(nd.children.size());
        int base_idx = 0;
        for (int i = 0; i < n; ++i)
            if (nd.children[i] == base) base_idx = i;
        for (int rel = 1; rel + 1 < n; rel += 2) {
            int32_t eid = nd.cycle_edges[(base_idx + rel) % n];
            const MatchEdge& e = edges_[eid];
            result.pairs.push_back({e.u, e.v, eid});
            result.total_doubled += e.w;
            int32_t c1 = nd.children[(base_idx + rel) % n];
            int32_t c2 = nd.children[(base_idx + rel + 1) % n];
            int32_t in1 = node_contains_vertex_child(c1, e.u) ? e.u : e.v;
            int32_t in2 = in1 == e.u ? e.v : e.u;
            resolve_internal(c1, in1, result, seen);
            resolve_internal(c2, in2, result, seen);
        }
        resolve_internal(base, attach, result, seen);
    }

    bool node_contains_vertex_child(int32_t node, int32_t v) const {
        for (int32_t n = node_of_vertex_[v]; n != kNoId; n = nodes_[n].parent_blossom)
            if (n == node) return true;
        return false;
    }

    // -- state ------------------------------------------------------------------

    MatcherOptions options_;
    std::vector<MatchNode> nodes_;
    std::vector<int32_t> node_of_vertex_;
    std::vector<uint8_t> vertex_alive_;
    std::vector<MatchEdge> edges_;
    std::vector<std::vector<int32_t>> adj_;
    std::vector<uint8_t> edge_ignored_;
    std::vector<Weight> explored_radius_;
    std::vector<int32_t> tree_nodes_;
    std::vector<int32_t> tree_ignored_;
    int32_t tree_root_ = kNoId;
    std::vector<JournalOp> journal_;
    std::vector<std::vector<int32_t>> pool_;
    mutable MatcherStats stats_;
    std::vector<std::pair<int32_t, Weight>> scratch_duals_;
    std::vector<std::pair<int32_t, Weight>> scratch_duals2_;
    std::vector<uint8_t> mark_scratch_;
};

}  // namespace lb

#endif
