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

#ifndef LB_DECODER_HPP
#define LB_DECODER_HPP

#include <algorithm>
#include <cstdint>
#include <vector>

#include "lb/blossom.hpp"
#include "lb/common.hpp"
#include "lb/graph.hpp"
#include "lb/lattice.hpp"

namespace lb {

using Correction = ErrorState;

/// Flip data qubits along the minimal row-then-column path between two
/// checks. Any minimal path is homologically equivalent; the L-shape is a
/// fixed convention.
inline void apply_path_correction(Correction& c, CheckCoord a, CheckCoord b) {
    int r0 = std::min(a.row, b.row), r1 = std::max(a.row, b.row);
    for (int r = r0; r < r1; ++r) c.toggle_vertical(r + 1, a.col);
    int c0 = std::min(a.col, b.col), c1 = std::max(a.col, b.col);
    for (int j = c0; j < c1; ++j) c.toggle_horizontal(b.row, j);
}

/// Flip data qubits along the straight path from a check to a boundary.
inline void apply_boundary_correction(Correction& c, CheckCoord a, Boundary side) {
    if (side == Boundary::Top)
        for (int r = 0; r <= a.row; ++r) c.toggle_vertical(r, a.col);
    else
        for (int r = a.row + 1; r < c.d(); ++r) c.toggle_vertical(r, a.col);
}

inline Boundary boundary_from_id(int32_t id) {
    return id == kBoundaryTopId ? Boundary::Top : Boundary::Bottom;
}

struct Decode2DResult {
    Correction correction;
    MatchResult matching;
    SyndromeGraph graph;
};

inline Decode2DResult decode_2d(const Syndrome& syndrome, const LatticeConfig& cfg,
                                Pruning pruning, MatcherOptions opts = {}) {
    Decode2DResult out{Correction(cfg), {}, build_graph(syndrome, cfg, pruning)};
    BlossomMatcher matcher(opts);
    matcher.load(out.graph);
    out.matching = matcher.run_all();
    for (const VertexMatch& m : out.matching.pairs) {
        if (is_boundary_id(m.v))
            apply_boundary_correction(out.correction, out.graph.vertices[m.u],
                                      boundary_from_id(m.v));
        else
            apply_path_correction(out.correction, out.graph.vertices[m.u],
                                  out.graph.vertices[m.v]);
    }
    return out;
}

/// Apply the correction (without mutating the inputs) and read the logical
/// parity. Throws NonEmptySyndrome when the correction does not cancel the
/// syndrome.
inline int check_logical_failure(const ErrorState& state, const Correction& correction) {
    ErrorState combined = state;
    combined.xor_with(correction);
    return logical_x_parity(combined);
}

// ---------------------------------------------------------------------------
// 3-D space-time matching graph with bounded-radius on-demand exploration.
// ---------------------------------------------------------------------------

constexpr Weight kInitialExploreRadius = 4;  // doubled units: two lattice steps

struct LocalRegion {
    std::vector<std::pair<int32_t, SpaceTimeEvent>> vertices;
    std::vector<SyndromeGraph::Edge> edges;  // between region vertices, doubled weights
    std::vector<std::pair<int32_t, BoundaryDistance>> boundary_edges;
};

class SpaceTimeGraph {
  public:
    SpaceTimeGraph(const LatticeConfig& cfg, MatcherOptions opts) : cfg_(cfg), matcher_(opts) {
        matcher_.ensure_radius = [this](int32_t v, Weight needed) {
            return this->ensure_radius(v, needed);
        };
        matcher_.on_vertex_removed = [this](int32_t v) { this->vertex_removed(v); };
    }

    BlossomMatcher& matcher() { return matcher_; }
    const BlossomMatcher& matcher() const { return matcher_; }
    int32_t newest_round() const { return newest_round_; }
    void set_closed(bool closed) { closed_ = closed; }
    bool closed() const { return closed_; }

    void begin_round(int32_t t) {
        if (t != newest_round_ + 1)
            throw Error(ErrorCode::OutOfOrderRound, "rounds must be processed in order");
        newest_round_ = t;
    }

    int32_t add_event(CheckCoord c, int32_t t) {
        int32_t v = matcher_.add_vertex();
        coords_.push_back({c.row, c.col, t});
        matcher_.set_explored_radius(v, kInitialExploreRadius);
        BoundaryDistance nb = nearest_boundary(c.row, cfg_.d);
        matcher_.add_edge(v, nb.side == Boundary::Top ? kBoundaryTopId : kBoundaryBottomId,
                          2 * nb.distance);
        for (int32_t x : live_) {
            Weight w = 2 * manhattan(coords_[v], coords_[x]);
            if (w <= kInitialExploreRadius + matcher_.explored_radius(x) &&
                !matcher_.adjacent(v, x))
                matcher_.add_edge(x, v, w);
        }
        live_.push_back(v);
        return v;
    }

    SpaceTimeEvent coord(int32_t v) const { return coords_[v]; }

    /// Exploration hook for the matcher: a vertex needs candidate edges out
    /// to doubled radius `needed`. Throws FutureDataNeeded when the region
    /// would extend past the newest measured round of an open stream.
    bool ensure_radius(int32_t v, Weight needed) {
        if (!closed_ && needed >= 2 * (int64_t{newest_round_} + 1 - coords_[v].round))
            throw FutureDataNeeded(newest_round_ + 1);
        int32_t ball_bottom = coords_[v].round - static_cast<int32_t>(needed / 2);
        max_past_depth_ = std::max(max_past_depth_, int64_t{newest_round_} - ball_bottom);
        if (ball_bottom < trim_horizon_) trim_horizon_hits_ += 1;
        Weight r = matcher_.explored_radius(v);
        if (r >= needed) return false;
        Weight nr = std::max<Weight>(r, kInitialExploreRadius);
        while (nr < needed) nr *= 2;
        matcher_.set_explored_radius(v, nr);
        for (int32_t x : live_) {
            if (x == v) continue;
            Weight w = 2 * manhattan(coords_[v], coords_[x]);
            if (w <= nr + matcher_.explored_radius(x) && !matcher_.adjacent(v, x))
                matcher_.add_edge(v, x, w);
        }
        return true;
    }

    /// Query the local subgraph within L1 radius `r` (lattice steps) of a
    /// vertex: region vertices, edges among them, and their boundary edges
    /// that fit inside the radius.
    LocalRegion explore_region(int32_t v, int r) const {
        if (!closed_ && coords_[v].round + r > newest_round_)
            throw FutureDataNeeded(newest_round_ + 1);
        LocalRegion out;
        std::vector<int32_t> members;
        for (int32_t x : live_)
            if (manhattan(coords_[v], coords_[x]) <= r) members.push_back(x);
        for (int32_t x : members) {
            out.vertices.push_back({x, coords_[x]});
            BoundaryDistance nb = nearest_boundary(coords_[x].row, cfg_.d);
            if (nb.distance <= r) out.boundary_edges.push_back({x, nb});
        }
        for (size_t i = 0; i < members.size(); ++i)
            for (size_t j = i + 1; j < members.size(); ++j)
                out.edges.push_back({members[i], members[j],
                                     2 * manhattan(coords_[members[i]], coords_[members[j]])});
        return out;
    }

    void trim_vertex(int32_t v) {
        matcher_.trim_vertex(v);
        live_.erase(std::remove(live_.begin(), live_.end(), v), live_.end());
    }

    const std::vector<int32_t>& live_vertices() const { return live_; }
    int64_t max_past_depth() const { return max_past_depth_; }
    void set_max_past_depth(int64_t v) { max_past_depth_ = v; }
    int64_t trim_horizon_hits() const { return trim_horizon_hits_; }
    void set_trim_horizon(int32_t h) { trim_horizon_ = h; }
    int32_t trim_horizon() const { return trim_horizon_; }
    void set_newest_round(int32_t t) { newest_round_ = t; }

  private:
    void vertex_removed(int32_t v) {
        if (!live_.empty() && live_.back() == v) live_.pop_back();
        coords_.pop_back();
    }

    LatticeConfig cfg_;
    BlossomMatcher matcher_;
    std::vector<SpaceTimeEvent> coords_;  // indexed by vertex id
    std::vector<int32_t> live_;           // alive vertex ids, ascending
    int32_t newest_round_ = -1;
    bool closed_ = false;
    int64_t max_past_depth_ = 0;
    int64_t trim_horizon_hits_ = 0;
    int32_t trim_horizon_ = std::numeric_limits<int32_t>::min();
};

// ---------------------------------------------------------------------------
// Streaming decoder: rounds arrive one at a time; alternating trees whose
// dual growth would need unmeasured rounds are undone through the journal and
// their roots deferred; old finalized rounds are trimmed against a window
// derived from the deepest past traversal.
// ---------------------------------------------------------------------------

struct StreamOptions {
    int trim_multiple = 4;
    int w_min = 8;
    bool trimming = true;
    MatcherOptions matcher = {true, true, false};  // journal always on
};

struct VerifyResult {
    int failure_bit = 0;
    Correction correction;
    Weight total_doubled = 0;
};

struct StreamStats {
    int64_t deferrals = 0;
    int64_t trimmed_vertices = 0;
    int32_t rounds_discarded = 0;
    int32_t oldest_retained = 0;
};

class StreamDecoder {
  public:
    StreamDecoder(const LatticeConfig& cfg, StreamOptions opts = {})
        : cfg_(cfg), opts_(opts), graph_(cfg, force_journal(opts.matcher)),
          committed_(cfg), prev_bits_(cfg.check_count(), 0) {}

    int32_t rounds_seen() const { return rounds_seen_; }

    void process_round(int32_t t, const std::vector<uint8_t>& measured_bits) {
        if (t != rounds_seen_)
            throw Error(ErrorCode::OutOfOrderRound, "rounds must arrive in order");
        graph_.begin_round(t);
        const int d = cfg_.d;
        for (int i = 0; i < d - 1; ++i)
            for (int j = 0; j < d; ++j)
                if (measured_bits[i * d + j] ^ prev_bits_[i * d + j])
                    pending_.push_back(graph_.add_event(
                        {static_cast<int16_t>(i), static_cast<int16_t>(j)}, t));
        prev_bits_ = measured_bits;
        rounds_seen_ += 1;
        match_pending();
        graph_.matcher().clear_journal();
        if (opts_.trimming) trim_history();
    }

    /// Do/undo logical readout: append a noiseless closing round, match every
    /// remaining vertex, apply corrections virtually, read the top-boundary
    /// parity, then undo so the stream continues bit-identically.
    VerifyResult verify_logical(const std::vector<uint8_t>& true_bits,
                                const ErrorState& actual_state) {
        BlossomMatcher& m = graph_.matcher();
        BlossomMatcher::Mark mark = m.mark();
        size_t saved_pending_size = pending_.size();
        size_t saved_head = pending_head_;
        int32_t saved_round = graph_.newest_round();
        int64_t saved_depth = graph_.max_past_depth();
        bool saved_closed = graph_.closed();

        graph_.set_closed(true);
        graph_.begin_round(rounds_seen_);
        const int d = cfg_.d;
        for (int i = 0; i < d - 1; ++i)
            for (int j = 0; j < d; ++j)
                if (true_bits[i * d + j] ^ prev_bits_[i * d + j])
                    pending_.push_back(graph_.add_event(
                        {static_cast<int16_t>(i), static_cast<int16_t>(j)}, rounds_seen_));
        match_pending();

        VerifyResult out;
        MatchResult full = m.extract_matching();
        if (m.options().verify_certificate) m.verify_certificate(full);
        out.correction = committed_;
        apply_matching_corrections(full, out.correction);
        out.total_doubled = full.total_doubled;
        ErrorState residual = actual_state;
        residual.xor_with(out.correction);
        out.failure_bit = logical_x_parity(residual);

        m.undo_to(mark);
        pending_.resize(saved_pending_size);
        pending_head_ = saved_head;
        graph_.set_newest_round(saved_round);
        graph_.set_max_past_depth(saved_depth);
        graph_.set_closed(saved_closed);
        return out;
    }

    /// Discard rounds older than the retention window W = max(w_min,
    /// trim_multiple * deepest past traversal). Vertices that are unmatched,
    /// sit inside a blossom, or are matched to a vertex that must stay are
    /// never discarded; corrections of dropped pairs are committed first.
    size_t trim_history() {
        BlossomMatcher& m = graph_.matcher();
        int64_t window =
            std::max<int64_t>(opts_.w_min, opts_.trim_multiple * graph_.max_past_depth());
        int32_t horizon = rounds_seen_ - 1 - static_cast<int32_t>(window);
        graph_.set_trim_horizon(horizon);
        if (horizon <= oldest_retained_) return 0;
        std::vector<int32_t> drop;
        std::vector<int32_t> live = graph_.live_vertices();
        for (int32_t v : live) {
            if (graph_.coord(v).round >= horizon) continue;
            if (!m.is_vertex_alive(v)) continue;
            if (m.node(m.top_of_vertex(v)).is_blossom) continue;  // blossom pins its vertices
            int32_t e = m.mate_edge_of_vertex(v);
            if (e == kNoId) continue;  // deferred root
            const MatchEdge& me = m.edge(e);
            if (!is_boundary_id(me.v)) {
                int32_t partner = me.u == v ? me.v : me.u;
                if (graph_.coord(partner).round >= horizon) continue;
                if (m.node(m.top_of_vertex(partner)).is_blossom) continue;
                if (partner < v) continue;  // pair handled once, from the lower id
                commit_pair_correction(me);
                drop.push_back(v);
                drop.push_back(partner);
            } else {
                commit_pair_correction(me);
                drop.push_back(v);
            }
        }
        for (int32_t v : drop) graph_.trim_vertex(v);
        stats_.trimmed_vertices += static_cast<int64_t>(drop.size());
        int32_t oldest = rounds_seen_ - 1;
        for (int32_t v : graph_.live_vertices()) oldest = std::min(oldest, graph_.coord(v).round);
        stats_.rounds_discarded = std::max(stats_.rounds_discarded, horizon - oldest_retained_);
        oldest_retained_ = std::max(oldest_retained_, std::min(horizon, oldest));
        stats_.oldest_retained = oldest_retained_;
        return drop.size();
    }

    int32_t retained_rounds() const {
        int32_t oldest = rounds_seen_;
        for (int32_t v : graph_.live_vertices()) oldest = std::min(oldest, graph_.coord(v).round);
        oldest = std::min(oldest, std::max(oldest_retained_, 0));
        return rounds_seen_ - oldest;
    }

    const StreamStats& stats() const { return stats_; }
    SpaceTimeGraph& graph() { return graph_; }
    const SpaceTimeGraph& graph() const { return graph_; }
    size_t pending_count() const { return pending_.size() - pending_head_; }
    const Correction& committed_correction() const { return committed_; }

  private:
    static MatcherOptions force_journal(MatcherOptions o) {
        o.journal = true;
        return o;
    }

    /// Match deferred and new roots strictly in id order; the first root
    /// whose tree needs future data is rolled back and everything after it
    /// waits, so a later stream replays the exact batch event sequence.
    void match_pending() {
        BlossomMatcher& m = graph_.matcher();
        while (pending_head_ < pending_.size()) {
            int32_t v = pending_[pending_head_];
            if (!m.is_vertex_alive(v) || m.vertex_matched(v)) {
                pending_head_ += 1;
                continue;
            }
            BlossomMatcher::Mark mark = m.mark();
            try {
                m.grow_tree_from(v);
                pending_head_ += 1;
            } catch (const FutureDataNeeded&) {
                m.undo_to(mark);
                stats_.deferrals += 1;
                break;
            }
        }
        if (pending_head_ > 4096 && pending_head_ * 2 > pending_.size()) {
            pending_.erase(pending_.begin(), pending_.begin() + pending_head_);
            pending_head_ = 0;
        }
    }

    void commit_pair_correction(const MatchEdge& e) {
        SpaceTimeEvent a = graph_.coord(e.u);
        if (is_boundary_id(e.v))
            apply_boundary_correction(committed_, {a.row, a.col}, boundary_from_id(e.v));
        else {
            SpaceTimeEvent b = graph_.coord(e.v);
            apply_path_correction(committed_, {a.row, a.col}, {b.row, b.col});
        }
    }

    void apply_matching_corrections(const MatchResult& full, Correction& c) const {
        for (const VertexMatch& vm : full.pairs) {
            SpaceTimeEvent a = graph_.coord(vm.u);
            if (is_boundary_id(vm.v))
                apply_boundary_correction(c, {a.row, a.col}, boundary_from_id(vm.v));
            else {
                SpaceTimeEvent b = graph_.coord(vm.v);
                apply_path_correction(c, {a.row, a.col}, {b.row, b.col});
            }
        }
    }

    LatticeConfig cfg_;
    StreamOptions opts_;
    SpaceTimeGraph graph_;
    Correction committed_;
    std::vector<uint8_t> prev_bits_;
    std::vector<int32_t> pending_;
    size_t pending_head_ = 0;
    int32_t rounds_seen_ = 0;
    int32_t oldest_retained_ = 0;
    StreamStats stats_;
};

// ---------------------------------------------------------------------------
// Whole-record batch decode of a finite 3-D experiment.
// ---------------------------------------------------------------------------

struct Decode3DResult {
    int failure_bit = 0;
    Correction correction;
    Weight total_doubled = 0;
};

inline Decode3DResult batch_decode_3d(const PhenomenologicalRecord& record,
                                      MatcherOptions opts = {}) {
    const LatticeConfig& cfg = record.config();
    SpaceTimeGraph graph(cfg, opts);
    graph.set_closed(true);
    for (int32_t t = 0; t < record.rounds(); ++t) {
        graph.begin_round(t);
        for (CheckCoord c : record.events_at(t)) graph.add_event(c, t);
    }
    graph.begin_round(record.rounds());
    for (CheckCoord c : record.closure_events()) graph.add_event(c, record.rounds());

    MatchResult full = graph.matcher().run_all();
    Decode3DResult out{0, Correction(cfg), full.total_doubled};
    for (const VertexMatch& vm : full.pairs) {
        SpaceTimeEvent a = graph.coord(vm.u);
        if (is_boundary_id(vm.v))
            apply_boundary_correction(out.correction, {a.row, a.col}, boundary_from_id(vm.v));
        else {
            SpaceTimeEvent b = graph.coord(vm.v);
            apply_path_correction(out.correction, {a.row, a.col}, {b.row, b.col});
        }
    }
    ErrorState residual = record.final_state();
    residual.xor_with(out.correction);
    out.failure_bit = logical_x_parity(residual);
    return out;
}

}  // namespace lb

#endif
