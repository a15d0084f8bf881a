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

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "lb/decoder.hpp"
#include "lb/montecarlo.hpp"
#include "lb/oracle.hpp"

namespace {

int worker_threads() {
    if (const char* env = std::getenv("LB_THREADS")) {
        int v = std::atoi(env);
        if (v >= 1) return v;
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

std::vector<int> parse_int_list(const std::string& s) {
    std::vector<int> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) out.push_back(std::stoi(item));
    }
    return out;
}

// comma list ("0.08,0.1") or range ("0.08:0.12:0.01")
std::vector<double> parse_p_list(const std::string& s) {
    std::vector<double> out;
    if (s.find(':') != std::string::npos) {
        double lo, hi, step;
        char c1, c2;
        std::stringstream ss(s);
        if (!(ss >> lo >> c1 >> hi >> c2 >> step) || c1 != ':' || c2 != ':' || step <= 0)
            throw lb::Error(lb::ErrorCode::BadInput, "bad p range, expected lo:hi:step");
        int n = static_cast<int>(std::round((hi - lo) / step));
        for (int i = 0; i <= n; ++i) out.push_back(lo + i * step);
        return out;
    }
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) out.push_back(std::stod(item));
    }
    return out;
}

const char* boundary_name(int32_t id) { return id == lb::kBoundaryTopId ? "top" : "bottom"; }

struct DecodeArgs {
    std::string file;
    std::string errors_file;
    int d = 0;
    std::string pruning = "shadowed";
};

int cmd_decode(const DecodeArgs& args) {
    lb::LatticeConfig cfg{args.d, lb::SimMode::TwoD};
    cfg.validate();
    lb::Pruning pruning =
        args.pruning == "complete" ? lb::Pruning::Complete : lb::Pruning::Shadowed;

    std::ifstream in(args.file);
    if (!in) {
        std::cerr << "cannot open " << args.file << "\n";
        return 2;
    }
    lb::ParsedSyndrome parsed = lb::parse_syndrome_text(in);
    lb::validate_syndrome_bounds(parsed, cfg);

    if (parsed.three_d) {
        cfg.mode = lb::SimMode::ThreeD;
        lb::SpaceTimeGraph graph(cfg, {});
        graph.set_closed(true);
        std::vector<lb::SpaceTimeEvent> events = parsed.vertices_3d;
        std::sort(events.begin(), events.end());
        int32_t round = -1;
        for (const lb::SpaceTimeEvent& e : events) {
            while (round < e.round) graph.begin_round(++round);
            graph.add_event({e.row, e.col}, e.round);
        }
        lb::MatchResult res = graph.matcher().run_all();
        std::cout << events.size() << " vertices, weight " << res.weight() << "\n";
        lb::Correction corr(cfg);
        for (const lb::VertexMatch& m : res.pairs) {
            lb::SpaceTimeEvent a = graph.coord(m.u);
            if (lb::is_boundary_id(m.v)) {
                std::cout << "match " << a.row << " " << a.col << " " << a.round << " -- "
                          << boundary_name(m.v) << "\n";
                lb::apply_boundary_correction(corr, {a.row, a.col}, lb::boundary_from_id(m.v));
            } else {
                lb::SpaceTimeEvent b = graph.coord(m.v);
                std::cout << "match " << a.row << " " << a.col << " " << a.round << " -- "
                          << b.row << " " << b.col << " " << b.round << "\n";
                lb::apply_path_correction(corr, {a.row, a.col}, {b.row, b.col});
            }
        }
        for (lb::DataQubit q : corr.flipped())
            std::cout << "flip " << q.row << " " << q.col << "\n";
        return 0;
    }

    lb::Syndrome syndrome;
    syndrome.vertices = parsed.vertices_2d;
    std::sort(syndrome.vertices.begin(), syndrome.vertices.end());
    lb::Decode2DResult dec = lb::decode_2d(syndrome, cfg, pruning);
    std::cout << syndrome.vertices.size() << " vertices, weight " << dec.matching.weight()
              << "\n";
    for (const lb::VertexMatch& m : dec.matching.pairs) {
        lb::CheckCoord a = dec.graph.vertices[m.u];
        if (lb::is_boundary_id(m.v))
            std::cout << "match " << a.row << " " << a.col << " -- " << boundary_name(m.v)
                      << "\n";
        else {
            lb::CheckCoord b = dec.graph.vertices[m.v];
            std::cout << "match " << a.row << " " << a.col << " -- " << b.row << " " << b.col
                      << "\n";
        }
    }
    for (lb::DataQubit q : dec.correction.flipped())
        std::cout << "flip " << q.row << " " << q.col << "\n";

    if (!args.errors_file.empty()) {
        std::ifstream ef(args.errors_file);
        if (!ef) {
            std::cerr << "cannot open " << args.errors_file << "\n";
            return 2;
        }
        lb::ErrorState state(cfg);
        std::string line;
        int lineno = 0;
        while (std::getline(ef, line)) {
            ++lineno;
            size_t hash = line.find('#');
            if (hash != std::string::npos) line.resize(hash);
            std::stringstream ls(line);
            int r, c;
            if (ls >> r) {
                if (!(ls >> c) || (r + c) % 2 != 0 || r < 0 || c < 0 || r > cfg.n() - 1 ||
                    c > cfg.n() - 1)
                    throw lb::Error(lb::ErrorCode::BadInput,
                                    "error record parse error at line " + std::to_string(lineno));
                state.toggle({static_cast<int16_t>(r), static_cast<int16_t>(c)});
            }
        }
        lb::Syndrome check = lb::measure_z_stabilizers(state);
        if (!(check.vertices == syndrome.vertices))
            throw lb::Error(lb::ErrorCode::GraphInfeasible,
                            "error record does not reproduce the given syndrome");
        std::cout << "failure " << lb::check_logical_failure(state, dec.correction) << "\n";
    }
    return 0;
}

struct SweepArgs {
    std::string mode = "2d";
    std::string d_list = "3";
    std::string p_list = "0.1";
    double q = -1.0;
    std::string pruning = "shadowed";
    uint64_t trials = 0;
    uint64_t failures = 0;
    uint64_t seed = 1;
    std::string out;
    int verify_every = 10;

    lb::SweepSpec to_spec() const {
        lb::SweepSpec spec;
        spec.mode = mode == "3d" ? lb::SimMode::ThreeD : lb::SimMode::TwoD;
        spec.distances = parse_int_list(d_list);
        spec.p_values = parse_p_list(p_list);
        spec.q_scale = q;
        spec.pruning = pruning == "complete" ? lb::Pruning::Complete : lb::Pruning::Shadowed;
        if (failures > 0)
            spec.stop = {lb::StopRule::Kind::FixedFailures, failures};
        else
            spec.stop = {lb::StopRule::Kind::FixedTrials, trials > 0 ? trials : 10000};
        spec.seed = seed;
        spec.verify_every = verify_every;
        return spec;
    }
};

std::vector<lb::TrialStats> run_sweep_with_progress(const lb::SweepSpec& spec, int threads) {
    std::vector<lb::TrialStats> stats;
    size_t total = spec.distances.size() * spec.p_values.size();
    size_t done = 0;
    for (int d : spec.distances) {
        for (double p : spec.p_values) {
            lb::LatticeConfig cfg{d, spec.mode};
            lb::NoiseParams params;
            params.p = p;
            params.q =
                spec.mode == lb::SimMode::ThreeD ? (spec.q_scale < 0 ? p : spec.q_scale) : 0.0;
            lb::TrialStats s = lb::run_point(cfg, params, spec.pruning, spec.stop, spec.seed,
                                             threads, spec.verify_every);
            stats.push_back(s);
            ++done;
            std::cerr << "[" << done << "/" << total << "] d=" << d << " p=" << p
                      << " failures=" << s.failures << "\n";
        }
    }
    return stats;
}

void write_csv(std::ostream& os, const std::vector<lb::TrialStats>& stats) {
    os << lb::csv_header() << "\n";
    for (const lb::TrialStats& s : stats) os << lb::csv_row(s) << "\n";
}

int cmd_sim(const SweepArgs& args) {
    lb::SweepSpec spec = args.to_spec();
    spec.validate();
    std::vector<lb::TrialStats> stats = run_sweep_with_progress(spec, worker_threads());
    if (args.out.empty()) {
        write_csv(std::cout, stats);
    } else {
        std::ofstream os(args.out, std::ios::binary);
        if (!os) {
            std::cerr << "cannot open " << args.out << "\n";
            return 2;
        }
        write_csv(os, stats);
    }
    return 0;
}

int cmd_threshold(const SweepArgs& args) {
    lb::SweepSpec spec = args.to_spec();
    spec.validate();
    if (spec.distances.size() < 2) {
        std::cerr << "threshold estimation needs at least two distances\n";
        return 2;
    }
    std::vector<lb::TrialStats> stats = run_sweep_with_progress(spec, worker_threads());
    if (!args.out.empty()) {
        std::ofstream os(args.out, std::ios::binary);
        if (!os) {
            std::cerr << "cannot open " << args.out << "\n";
            return 2;
        }
        write_csv(os, stats);
    }
    lb::ThresholdEstimate est = lb::estimate_threshold(stats);
    std::cout << "threshold " << lb::format_double(est.p_th) << " +/- "
              << lb::format_double(est.error) << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"latblossom: boundary-aware minimum-weight matching decoder for the surface code"};
    app.require_subcommand(1);

    DecodeArgs dargs;
    CLI::App* decode = app.add_subcommand("decode", "decode a syndrome file");
    decode->add_option("file", dargs.file, "syndrome text file")->required();
    decode->add_option("--d", dargs.d, "code distance (odd, >= 3)")->required();
    decode->add_option("--pruning", dargs.pruning, "complete|shadowed")
        ->check(CLI::IsMember({"complete", "shadowed"}));
    decode->add_option("--errors", dargs.errors_file,
                       "data-qubit flip record; enables the logical-failure check");

    SweepArgs sargs;
    CLI::App* sim = app.add_subcommand("sim", "Monte-Carlo logical error rates, CSV output");
    CLI::App* threshold =
        app.add_subcommand("threshold", "estimate the threshold error rate from a sweep");
    for (CLI::App* sub : {sim, threshold}) {
        sub->add_option("--mode", sargs.mode, "2d|3d")->check(CLI::IsMember({"2d", "3d"}));
        sub->add_option("--d", sargs.d_list, "comma list of code distances");
        sub->add_option("--p", sargs.p_list, "comma list or lo:hi:step");
        sub->add_option("--q", sargs.q, "3-D measurement flip probability (default: q = p)");
        sub->add_option("--pruning", sargs.pruning, "complete|shadowed")
            ->check(CLI::IsMember({"complete", "shadowed"}));
        sub->add_option("--trials", sargs.trials, "trials (2-D) or rounds (3-D) per point");
        sub->add_option("--failures", sargs.failures, "run until this many logical failures");
        sub->add_option("--seed", sargs.seed, "master seed");
        sub->add_option("--out", sargs.out, "CSV output path (default: stdout for sim)");
        sub->add_option("--verify-every", sargs.verify_every,
                        "3-D: rounds between logical-error checks");
    }

    try {
        app.parse(argc, argv);
        if (decode->parsed()) return cmd_decode(dargs);
        if (sim->parsed()) return cmd_sim(sargs);
        if (threshold->parsed()) return cmd_threshold(sargs);
        return 2;
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return 2;
    } catch (const lb::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        switch (e.code()) {
            case lb::ErrorCode::BadInput: return 2;
            case lb::ErrorCode::GraphInfeasible: return 3;
            case lb::ErrorCode::NoCrossing: return 4;
            default: return 1;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
