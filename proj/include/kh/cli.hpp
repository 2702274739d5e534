#pragma once

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "kh/corpus.hpp"
#include "kh/homology.hpp"
#include "kh/oracle.hpp"
#include "kh/scan.hpp"
#include "kh/verify.hpp"

namespace kh {

class LimitError : public std::runtime_error {
  public:
    explicit LimitError(const std::string& msg) : std::runtime_error(msg) {}
};

namespace cli_detail {

using json = nlohmann::ordered_json;

inline int log_level() {
    const char* v = std::getenv("KH_LOG");
    if (!v) return 0;
    std::string s = v;
    if (s == "debug") return 2;
    if (s == "info") return 1;
    return 0;
}

inline Diagram read_diagram(const std::string& pd_text, const std::string& file) {
    std::string text = pd_text;
    if (!file.empty()) {
        std::ifstream in(file);
        if (!in) throw ParseError("cannot open input file: " + file);
        std::ostringstream buf;
        buf << in.rdbuf();
        text = buf.str();
    }
    // strip leading whitespace to sniff the format
    std::size_t i = 0;
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    if (i < text.size() && text[i] == '{') {
        json j = json::parse(text, nullptr, true);
        std::vector<Crossing> crossings;
        for (const auto& row : j.at("crossings")) {
            if (row.size() != 4) throw ParseError("JSON crossing rows must have 4 labels");
            Crossing c;
            for (int k = 0; k < 4; ++k) c.edges[k] = row[k].get<int>();
            crossings.push_back(c);
        }
        return finalize_diagram(std::move(crossings), j.value("unknots", 0));
    }
    return parse_pd(text);
}

inline json table_to_json(const HomologyTable& t) {
    json rows = json::array();
    for (const auto& [rq, grp] : t.entries) {
        auto [r, q] = rq;
        json row;
        row["r"] = r;
        row["j"] = q - 2 * r;
        row["q"] = q;
        row["free"] = grp.free.str();
        json tor = json::array();
        for (const Int& d : grp.torsion) tor.push_back(d.str());
        row["torsion"] = tor;
        rows.push_back(std::move(row));
    }
    return rows;
}

inline RingSpec parse_ring(const std::string& ring, unsigned p) {
    if (ring == "z") return RingSpec::z();
    if (ring == "q") return RingSpec::q();
    if (ring == "fp") return RingSpec::fp(p);
    throw ParseError("unknown ring: " + ring);
}

struct StageDumper {
    std::string dir;
    int step = 0;
    template <class R>
    void dump(const std::string& phase, const FormalComplex<R>& c) {
        if (dir.empty()) return;
        json j;
        j["step"] = step;
        j["phase"] = phase;
        json cols = json::object();
        for (const auto& [h, col] : c.columns) {
            json objs = json::array();
            for (const auto& [id, s] : col) objs.push_back(s.str());
            cols[std::to_string(h)] = std::move(objs);
        }
        j["objects"] = std::move(cols);
        json entries = json::array();
        for (const auto& [h, mat] : c.diffs)
            for (const auto& [rc, m] : mat.entries()) {
                json e;
                e["height"] = h;
                e["from"] = rc.second;
                e["to"] = rc.first;
                e["morphism"] = m.str();
                entries.push_back(std::move(e));
            }
        j["entries"] = std::move(entries);
        std::ofstream out(dir + "/stage-" + std::to_string(step) + ".json");
        out << j.dump(2) << "\n";
        ++step;
    }
};

template <class R>
HomologyTable run_scan(const Diagram& d, OrderStrategy strategy, ScanStats* stats,
                       double timeout_sec, StageDumper* dumper) {
    const auto t0 = std::chrono::steady_clock::now();
    ScanOptions opts;
    opts.progress = [&](int done, int objects) {
        if (log_level() >= 1)
            std::cerr << "[kh] crossing " << done << "/" << d.size() << " objects=" << objects
                      << "\n";
        if (timeout_sec > 0) {
            const double el = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                                  .count();
            if (el > timeout_sec) throw LimitError("scan exceeded the time limit");
        }
    };
    ScanOrder order = order_crossings(d, strategy);
    ScanState<R> state;
    for (int k = 0; k < d.unknots; ++k)
        state.islands.push_back({FormalComplex<R>::single(Smoothing::empty(0, 1)), {}});
    for (int idx : order.perm) {
        scan_step(state, d.crossings.at(idx), opts);
        if (dumper && !state.islands.empty())
            dumper->dump("crossing-" + std::to_string(idx), state.islands.back().complex);
    }
    auto [complex, circle] = scan_finish(state, opts);
    if (!circle.empty()) throw std::logic_error("scan: diagram did not close up");
    if (dumper) dumper->dump("final", complex);
    if (stats) *stats = state.stats;
    RingSpec ring = RingSpec::z();
    if constexpr (std::is_same_v<R, Rational>) ring = RingSpec::q();
    if constexpr (std::is_same_v<R, Fp>) ring = RingSpec::fp(Fp::current_modulus());
    return scan_homology(complex, ring);
}

}  // namespace cli_detail

/// Command-line front end; returns the process exit code.
/// Subcommands: compute, oracle, verify, bench.
inline int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    using cli_detail::json;
    CLI::App app{"Khovanov homology by tangle scanning"};
    app.require_subcommand(1);

    std::string pd_text, file, ring = "z", order = "given", dump_dir, cut_spec;
    unsigned prime = 2;
    bool as_json = false, stats_flag = false, bracket = false;
    double timeout_sec = 3600;
    int max_crossings = kOracleDefaultLimit;
    int threads = 0;

    auto add_input = [&](CLI::App* cmd) {
        cmd->add_option("--pd", pd_text, "planar diagram code, e.g. PD[X[1,4,2,5],...]");
        cmd->add_option("--file", file, "read the PD code (text or JSON) from a file");
        cmd->add_flag("--json", as_json, "machine-readable JSON output");
        cmd->add_option("--threads", threads, "worker threads (0 = hardware)");
    };

    CLI::App* compute = app.add_subcommand("compute", "homology via the scanning algorithm");
    add_input(compute);
    compute->add_option("--ring", ring, "coefficients: z, q or fp")
        ->check(CLI::IsMember({"z", "q", "fp"}));
    compute->add_option("--p", prime, "prime for --ring fp");
    compute->add_option("--order", order, "crossing order: given or greedy")
        ->check(CLI::IsMember({"given", "greedy"}));
    compute->add_option("--timeout", timeout_sec, "wall-clock limit in seconds (0 = none)");
    compute->add_option("--dump-stages", dump_dir, "write per-stage JSON dumps to this directory");
    compute->add_flag("--stats", stats_flag, "print scan statistics");

    CLI::App* oracle = app.add_subcommand("oracle", "homology via the full-cube oracle");
    add_input(oracle);
    oracle->add_option("--ring", ring, "coefficients: z, q or fp")
        ->check(CLI::IsMember({"z", "q", "fp"}));
    oracle->add_option("--p", prime, "prime for --ring fp");
    oracle->add_option("--max-crossings", max_crossings, "crossing-count limit");
    oracle->add_flag("--bracket", bracket, "also print the Kauffman bracket");

    CLI::App* verify = app.add_subcommand("verify", "mechanical Reidemeister-move checks");
    verify->add_flag("--json", as_json, "machine-readable JSON output");
    verify->add_option("--threads", threads, "worker threads (0 = hardware)");

    CLI::App* bench = app.add_subcommand("bench", "peak-size and timing report");
    add_input(bench);
    bench->add_option("--cut", cut_spec,
                      "comma-separated crossing indices: also run divide-and-conquer");
    bench->add_option("--timeout", timeout_sec, "wall-clock limit in seconds (0 = none)");

    try {
        std::vector<const char*> argv;
        std::string prog = "kh";
        argv.push_back(prog.c_str());
        for (const auto& a : args) argv.push_back(a.c_str());
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {  // --help
            out << app.help();
            return 0;
        }
        err << "error: " << e.what() << "\n";
        return 2;
    }

    try {
        if (compute->parsed()) {
            Diagram d = cli_detail::read_diagram(pd_text, file);
            OrderStrategy strategy =
                order == "greedy" ? OrderStrategy::Greedy : OrderStrategy::Given;
            cli_detail::StageDumper dumper{dump_dir};
            ScanStats stats;
            HomologyTable table;
            if (ring == "z")
                table = cli_detail::run_scan<Int>(d, strategy, &stats, timeout_sec, &dumper);
            else if (ring == "q")
                table = cli_detail::run_scan<Rational>(d, strategy, &stats, timeout_sec, &dumper);
            else {
                FpScope scope(prime);
                table = cli_detail::run_scan<Fp>(d, strategy, &stats, timeout_sec, &dumper);
            }
            if (as_json) {
                json j;
                j["ring"] = cli_detail::parse_ring(ring, prime).name();
                j["homology"] = cli_detail::table_to_json(table);
                if (stats_flag) {
                    j["peak_objects"] = stats.peak_objects;
                    j["eliminations"] = stats.eliminations;
                    j["deloops"] = stats.deloops;
                }
                out << j.dump(2) << "\n";
            } else {
                out << "Khovanov homology over " << cli_detail::parse_ring(ring, prime).name()
                    << " (cell at (r, j) is the q = 2r + j part of H^r)\n";
                out << table_to_text(table);
                if (stats_flag)
                    out << "peak objects: " << stats.peak_objects
                        << ", eliminations: " << stats.eliminations
                        << ", deloops: " << stats.deloops << "\n";
            }
            return 0;
        }
        if (oracle->parsed()) {
            Diagram d = cli_detail::read_diagram(pd_text, file);
            GradedIntegerComplex cube = cube_complex(d, max_crossings);
            HomologyTable table = homology(cube, cli_detail::parse_ring(ring, prime));
            if (as_json) {
                json j;
                j["ring"] = cli_detail::parse_ring(ring, prime).name();
                j["homology"] = cli_detail::table_to_json(table);
                if (bracket) j["kauffman_bracket"] = kauffman_bracket(d, max_crossings).str();
                out << j.dump(2) << "\n";
            } else {
                out << "cube-oracle homology over " << cli_detail::parse_ring(ring, prime).name()
                    << "\n"
                    << table_to_text(table);
                if (bracket)
                    out << "Kauffman bracket: " << kauffman_bracket(d, max_crossings).str()
                        << "\n";
            }
            return 0;
        }
        if (verify->parsed()) {
            auto futs = std::vector<std::future<MoveReport>>{};
            futs.push_back(std::async(std::launch::async, check_r1));
            futs.push_back(std::async(std::launch::async, check_r2));
            futs.push_back(std::async(std::launch::async, check_r3));
            bool all = true;
            json rows = json::array();
            for (auto& f : futs) {
                MoveReport rep = f.get();
                all = all && rep.pass;
                if (as_json) {
                    json r;
                    r["move"] = rep.name;
                    r["pass"] = rep.pass;
                    r["objects_before"] = rep.objects_before;
                    r["objects_after"] = rep.objects_after;
                    r["detail"] = rep.detail;
                    rows.push_back(std::move(r));
                } else {
                    out << rep.name << ": " << (rep.pass ? "pass" : "FAIL") << " ("
                        << rep.objects_before << " -> " << rep.objects_after << " objects) "
                        << rep.detail << "\n";
                }
            }
            if (as_json) {
                json j;
                j["pass"] = all;
                j["moves"] = std::move(rows);
                out << j.dump(2) << "\n";
            }
            return all ? 0 : 1;
        }
        if (bench->parsed()) {
            Diagram d = cli_detail::read_diagram(pd_text, file);
            json j;
            j["crossings"] = d.size();
            j["naive_cube_objects"] = Int(Int(1) << d.size()).str();
            for (auto strategy : {OrderStrategy::Given, OrderStrategy::Greedy}) {
                const char* name = strategy == OrderStrategy::Given ? "given" : "greedy";
                ScanOrder ord = order_crossings(d, strategy);
                const auto t0 = std::chrono::steady_clock::now();
                ScanStats stats;
                cli_detail::run_scan<Int>(d, strategy, &stats, timeout_sec, nullptr);
                const double ms =
                    std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                              t0)
                        .count();
                json r;
                r["max_width"] = ord.max_width();
                r["width_profile"] = ord.width_profile;
                r["peak_objects"] = stats.peak_objects;
                r["eliminations"] = stats.eliminations;
                r["deloops"] = stats.deloops;
                r["wall_ms"] = ms;
                j[name] = std::move(r);
            }
            if (!cut_spec.empty()) {
                std::vector<int> cut;
                std::stringstream ss(cut_spec);
                for (std::string tok; std::getline(ss, tok, ',');) cut.push_back(std::stoi(tok));
                DivideStats ds;
                const auto t0 = std::chrono::steady_clock::now();
                divide_and_conquer<Int>(d, cut, &ds);
                const double ms =
                    std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                              t0)
                        .count();
                json r;
                r["tensor_objects"] = ds.tensor_objects;
                r["wall_ms"] = ms;
                j["divide_and_conquer"] = std::move(r);
            }
            out << j.dump(2) << "\n";
            return 0;
        }
    } catch (const ParseError& e) {
        err << "parse error: " << e.what() << "\n";
        return 2;
    } catch (const PlanarityError& e) {
        err << "planarity error: " << e.what() << "\n";
        return 2;
    } catch (const LimitError& e) {
        err << "limit exceeded: " << e.what() << "\n";
        return 3;
    } catch (const std::invalid_argument& e) {
        // size-limit rejections from the oracle land here
        err << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}

}  // namespace kh
