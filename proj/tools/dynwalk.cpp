// Copyright (c) 2026 dynwalk contributors
// SPDX-License-Identifier: Apache-2.0
//
// Batch front door. Subcommands generate step timelines, print schedules,
// solve lattice hitting problems, run Monte Carlo estimators, sweep [0,1]
// for predicate intervals and run the forbidden-set avoidance experiment.
// All outputs are deterministic in (binary version, args, seed) and carry a
// provenance header; `--workers` never changes the bytes produced.
//
// Exit codes: 0 ok, 2 usage error, 3 numerical failure, 4 resource cap.

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "dynwalk/dynwalk.hpp"

namespace {

using namespace dynwalk;

struct CommonOpts {
    std::uint64_t seed = 1;
    bool seed_given = false;
    std::string format = "csv";
    std::string out_path;  // empty = stdout
    unsigned workers = 1;
    std::string config_path;
    std::string canonical_args;
};

Point parse_point(const std::string& s) {
    const auto comma = s.find(',');
    if (comma == std::string::npos)
        throw std::invalid_argument("expected a lattice point as x,y: '" + s + "'");
    return {std::stoll(s.substr(0, comma)), std::stoll(s.substr(comma + 1))};
}

std::vector<std::uint64_t> parse_grid(const std::string& s) {
    std::uint64_t a = 0, b = 0, step = 1;
    char c1 = 0, c2 = 0;
    std::istringstream in(s);
    if (!(in >> a >> c1 >> b >> c2 >> step) || c1 != ':' || c2 != ':' || step == 0 || b < a)
        throw std::invalid_argument("expected a grid as first:last:step, got '" + s + "'");
    std::vector<std::uint64_t> grid;
    for (std::uint64_t n = a; n <= b; n += step) grid.push_back(n);
    return grid;
}

ParamSchedule load_schedule(const std::string& source) {
    if (source == "tiny" || source == "small") return demo_schedule(source);
    if (source.rfind("paper", 0) == 0) {
        std::uint32_t kmax = 4;
        const auto colon = source.find(':');
        if (colon != std::string::npos) kmax = static_cast<std::uint32_t>(std::stoul(source.substr(colon + 1)));
        return ParamSchedule::paper(kmax);
    }
    std::ifstream in(source);
    if (!in) throw std::invalid_argument("cannot open schedule file '" + source + "'");
    nlohmann::json doc;
    in >> doc;
    return ParamSchedule::from_json(doc);
}

StartSpec parse_start(const std::string& s) {
    if (s.rfind("fixed:", 0) == 0) return StartSpec::fixed(parse_point(s.substr(6)));
    if (s.rfind("annulus:", 0) == 0)
        return StartSpec::annulus(static_cast<std::uint32_t>(std::stoul(s.substr(8))));
    throw std::invalid_argument("expected start as fixed:x,y or annulus:k, got '" + s + "'");
}

GRange parse_grange(const std::string& s) {
    if (s == "through-next") return GRange::through_next;
    if (s == "within") return GRange::within;
    throw std::invalid_argument("expected grange through-next|within, got '" + s + "'");
}

/// Canonical argument string for provenance: execution details (--workers,
/// --out and their values) are dropped so they never change output bytes.
std::string canonical_args(int argc, char** argv) {
    std::string out;
    for (int i = 1; i < argc; ++i) {
        const std::string a = argv[i];
        if (a == "--workers" || a == "-w" || a == "--out" || a == "-o") {
            ++i;
            continue;
        }
        if (a.rfind("--workers=", 0) == 0 || a.rfind("--out=", 0) == 0) continue;
        if (!out.empty()) out += ' ';
        out += a;
    }
    return out;
}

class Output {
  public:
    explicit Output(const CommonOpts& opts) : opts_(opts) {
        if (!opts.out_path.empty()) {
            file_.open(opts.out_path, std::ios::binary);
            if (!file_) throw std::invalid_argument("cannot open output file '" + opts.out_path + "'");
        }
    }
    std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }
    bool json() const { return opts_.format == "json"; }

  private:
    const CommonOpts& opts_;
    std::ofstream file_;
};

void add_common(CLI::App* sub, CommonOpts& opts) {
    sub->add_option("--seed", opts.seed, "master seed")->each([&opts](const std::string&) {
        opts.seed_given = true;
    });
    sub->add_option("--format", opts.format, "output format")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--out,-o", opts.out_path, "output file (default stdout)");
    sub->add_option("--workers,-w", opts.workers, "worker threads (never changes results)");
    sub->add_option("--config", opts.config_path, "JSON config with defaults");
}

/// Seed precedence: explicit --seed, then DYNWALK_SEED, then config file.
void resolve_common(CommonOpts& opts, const CLI::App* sub) {
    nlohmann::json cfg;
    if (!opts.config_path.empty()) {
        std::ifstream in(opts.config_path);
        if (!in) throw std::invalid_argument("cannot open config file '" + opts.config_path + "'");
        in >> cfg;
    }
    if (!opts.seed_given) {
        if (const char* env = std::getenv("DYNWALK_SEED")) {
            opts.seed = std::strtoull(env, nullptr, 10);
        } else if (cfg.contains("seed")) {
            opts.seed = cfg["seed"].get<std::uint64_t>();
        }
    }
    if (sub->count("--format") == 0 && cfg.contains("format"))
        opts.format = cfg["format"].get<std::string>();
    if (sub->count("--workers") == 0 && cfg.contains("workers"))
        opts.workers = cfg["workers"].get<unsigned>();
}

Provenance make_provenance(const std::string& subcommand, const CommonOpts& opts) {
    return Provenance{subcommand, opts.seed, opts.canonical_args};
}

// ---------------------------------------------------------------------------
// schedule

struct ScheduleArgs {
    CommonOpts common;
    bool paper = false;
    std::uint32_t kmax = 4;
    std::string desk_path;
    std::string builtin;
    std::int32_t beta_k = -1;
    double k_time = -1.0;
};

int run_schedule(const ScheduleArgs& args) {
    Output out(args.common);
    const Provenance prov = make_provenance("schedule", args.common);
    auto& os = out.stream();

    if (args.beta_k >= 0) {
        const BigRat b = beta(static_cast<std::uint32_t>(args.beta_k));
        const double dec = b.convert_to<double>();
        if (out.json()) {
            nlohmann::json doc;
            doc["meta"] = provenance_json(prov);
            doc["k"] = args.beta_k;
            doc["beta"] = BigRat(b).str();
            doc["beta_decimal"] = dec;
            os << doc.dump(2) << "\n";
        } else {
            write_csv_provenance(os, prov);
            os << "k,beta,beta_decimal\n";
            os << args.beta_k << "," << BigRat(b).str() << "," << format_double(dec) << "\n";
        }
        return 0;
    }

    if (args.k_time >= 0.0) {
        const int k = K_of(args.k_time);
        const int kp = K_prime_of(args.k_time);
        if (out.json()) {
            nlohmann::json doc;
            doc["meta"] = provenance_json(prov);
            doc["t"] = args.k_time;
            doc["K"] = k;
            doc["K_prime"] = kp;
            os << doc.dump(2) << "\n";
        } else {
            write_csv_provenance(os, prov);
            os << "t,K,K_prime\n";
            os << format_double(args.k_time) << "," << k << "," << kp << "\n";
        }
        return 0;
    }

    ParamSchedule sched = [&] {
        if (args.paper) {
            if (args.kmax < 1 || args.kmax > 16)
                throw std::invalid_argument("paper schedule printing requires 1 <= kmax <= 16");
            return ParamSchedule::paper(args.kmax);
        }
        if (!args.desk_path.empty()) return load_schedule(args.desk_path);
        if (!args.builtin.empty()) return demo_schedule(args.builtin);
        throw std::invalid_argument("schedule: pick --paper, --desk FILE or --builtin NAME");
    }();

    if (out.json()) {
        nlohmann::json doc;
        doc["meta"] = provenance_json(prov);
        doc["schedule"] = sched.to_json();
        nlohmann::json betas = nlohmann::json::array();
        for (std::uint32_t k = 1; k <= sched.k_max(); ++k) {
            const BigRat b = beta(k);
            betas.push_back({{"k", k}, {"beta", b.str()}, {"beta_decimal", b.convert_to<double>()}});
        }
        doc["beta"] = betas;
        os << doc.dump(2) << "\n";
    } else {
        write_csv_provenance(os, prov);
        os << "k,s,inner,outer,beta,beta_decimal\n";
        os << "0," << sched.boundary(0).str() << ",,,,\n";
        for (std::uint32_t k = 1; k <= sched.k_max(); ++k) {
            const BigRat b = beta(k);
            os << k << "," << sched.boundary(k).str() << "," << sched.inner_radius(k).str() << ","
               << sched.outer_radius(k).str() << "," << b.str() << ","
               << format_double(b.convert_to<double>()) << "\n";
        }
    }
    return 0;
}

// ---------------------------------------------------------------------------
// oracle

struct OracleArgs {
    CommonOpts common;
    int n = 2;
    std::string query;
    std::string dump_path;
    bool band = false;
    bool fit_escape = false;
    int nmax = 512;
    double tol = 1e-12;
};

int run_oracle(const OracleArgs& args) {
    Output out(args.common);
    const Provenance prov = make_provenance("oracle", args.common);
    auto& os = out.stream();

    if (args.fit_escape) {
        std::vector<double> ln_n, inv_escape, escapes;
        std::vector<int> radii;
        for (int n = 8; n <= args.nmax; n *= 2) {
            const double esc = escape_probability(solve_hit_before_exit(n, {kOrigin}, args.tol));
            radii.push_back(n);
            escapes.push_back(esc);
            ln_n.push_back(std::log(static_cast<double>(n)));
            inv_escape.push_back(1.0 / esc);
        }
        const LinearFit fit = fit_line(ln_n, inv_escape);
        const double reference = 2.0 / std::numbers::pi;
        if (out.json()) {
            nlohmann::json doc;
            doc["meta"] = provenance_json(prov);
            nlohmann::json rows = nlohmann::json::array();
            for (std::size_t i = 0; i < radii.size(); ++i)
                rows.push_back({{"n", radii[i]},
                                {"escape", escapes[i]},
                                {"inv_escape", inv_escape[i]},
                                {"ln_n", ln_n[i]}});
            doc["rows"] = rows;
            doc["fit"] = {{"slope", fit.slope},
                          {"intercept", fit.intercept},
                          {"r2", fit.r2},
                          {"reference_slope", reference}};
            os << doc.dump(2) << "\n";
        } else {
            write_csv_provenance(os, prov);
            os << "# fit slope=" << format_double(fit.slope)
               << " intercept=" << format_double(fit.intercept) << " r2=" << format_double(fit.r2)
               << " reference_slope=" << format_double(reference) << "\n";
            os << "n,escape,inv_escape,ln_n\n";
            for (std::size_t i = 0; i < radii.size(); ++i)
                os << radii[i] << "," << format_double(escapes[i]) << ","
                   << format_double(inv_escape[i]) << "," << format_double(ln_n[i]) << "\n";
        }
        return 0;
    }

    const HitProbField field = solve_hit_before_exit(args.n, {kOrigin}, args.tol);

    if (!args.dump_path.empty()) {
        std::ofstream dump(args.dump_path, std::ios::binary);
        if (!dump) throw std::invalid_argument("cannot open dump file");
        write_csv_provenance(dump, prov);
        dump << "x,y,value\n";
        field.for_each_interior([&](Point p, double v) {
            dump << p.x << "," << p.y << "," << format_double(v) << "\n";
        });
    }

    if (args.band) {
        const LogBandReport rep = log_band_report(field);
        if (out.json()) {
            nlohmann::json doc;
            doc["meta"] = provenance_json(prov);
            doc["n"] = rep.radius;
            doc["min_constant"] = rep.min_constant;
            doc["witness"] = {rep.witness.x, rep.witness.y};
            doc["residual"] = field.max_residual();
            os << doc.dump(2) << "\n";
        } else {
            write_csv_provenance(os, prov);
            os << "n,min_constant,witness_x,witness_y,residual\n";
            os << rep.radius << "," << format_double(rep.min_constant) << "," << rep.witness.x
               << "," << rep.witness.y << "," << format_double(field.max_residual()) << "\n";
        }
        return 0;
    }

    if (!args.query.empty()) {
        const Point q = parse_point(args.query);
        const double v = field.value(q);
        if (out.json()) {
            nlohmann::json doc;
            doc["meta"] = provenance_json(prov);
            doc["n"] = args.n;
            doc["query"] = {q.x, q.y};
            doc["value"] = v;
            doc["residual"] = field.max_residual();
            os << doc.dump(2) << "\n";
        } else {
            write_csv_provenance(os, prov);
            os << "n,x,y,value,residual\n";
            os << args.n << "," << q.x << "," << q.y << "," << format_double(v) << ","
               << format_double(field.max_residual()) << "\n";
        }
    }
    return 0;
}

// ---------------------------------------------------------------------------
// estimate

struct EstimateArgs {
    CommonOpts common;
    std::string lemma;
    std::uint64_t trials = 10'000;
    std::string x;
    int n = 2;
    std::string schedule = "small";
    std::uint32_t j = 2;
    std::uint32_t k = 1;
    double t = 0.5;
    std::string start = "fixed:2,0";
    std::string grange = "through-next";
    std::uint64_t window = 512;
    std::uint64_t subset = 0;
    std::uint32_t m_levels = 1;
    double floor = 1e-3;
    std::string outcomes_path;
};

void emit_estimates(Output& out, const Provenance& prov,
                    const std::vector<std::pair<std::string, McEstimate>>& rows,
                    const std::vector<std::pair<std::string, RatioEstimate>>& ratios,
                    const std::string& params) {
    auto& os = out.stream();
    if (out.json()) {
        nlohmann::json doc;
        doc["meta"] = provenance_json(prov);
        doc["params"] = params;
        nlohmann::json data = nlohmann::json::object();
        for (const auto& [name, est] : rows) data[name] = to_json(est);
        for (const auto& [name, ratio] : ratios) data[name] = to_json(ratio);
        doc["estimates"] = data;
        os << doc.dump(2) << "\n";
    } else {
        write_csv_provenance(os, prov);
        for (const auto& [name, ratio] : ratios)
            os << "# " << name << " ratio=" << format_double(ratio.ratio)
               << " ci_low=" << format_double(ratio.ci_low)
               << " ci_high=" << format_double(ratio.ci_high) << "\n";
        os << kEstimateCsvHeader << "\n";
        for (const auto& [name, est] : rows) os << estimate_csv_row(name, params, est) << "\n";
    }
}

/// Per-trial detector outcome rows (seed, t, segment/super index, flags).
/// Uses the same trial functions and derived seeds as the estimators, so the
/// dumped flags aggregate to exactly the reported counts.
void emit_outcomes(const std::string& path, const ExperimentSpec& spec, const Provenance& prov) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::invalid_argument("cannot open outcome file '" + path + "'");
    write_csv_provenance(os, prov);
    const ParamSchedule& sched = *spec.schedule;
    if (spec.lemma == "segment") {
        const StartSampler sampler(sched, spec.start);
        const std::uint64_t L = sched.segment_length_u64(spec.j);
        os << "trial,seed,t,j,hit,hit_origin,end_in_annulus\n";
        for (std::uint64_t i = 0; i < spec.plan.trials; ++i) {
            const std::uint64_t seed = derive_stream(spec.plan.master_seed, stream_tag::trial, i);
            const SegmentTrialFlags f = segment_trial(sched, spec.j, L, sampler, seed);
            os << i << "," << seed << ",0," << spec.j << "," << f.hit_disc << ","
               << f.hit_origin << "," << f.end_in_annulus << "\n";
        }
        return;
    }
    if (spec.lemma == "joint-segment") {
        const StartSampler sampler(sched, spec.start);
        const std::uint64_t L = sched.segment_length_u64(spec.j);
        const double horizon = std::max(1.0, spec.t);
        os << "trial,seed,t,j,hit,hit_origin,end_in_annulus\n";
        for (std::uint64_t i = 0; i < spec.plan.trials; ++i) {
            const std::uint64_t seed = derive_stream(spec.plan.master_seed, stream_tag::trial, i);
            const JointSegmentTrialFlags f =
                joint_segment_trial(sched, spec.j, L, spec.t, horizon, sampler, seed);
            os << i << "," << seed << ",0," << spec.j << "," << f.at0.hit_disc << ","
               << f.at0.hit_origin << "," << f.at0.end_in_annulus << "\n";
            os << i << "," << seed << "," << format_double(spec.t) << "," << spec.j << ","
               << f.att.hit_disc << "," << f.att.hit_origin << "," << f.att.end_in_annulus
               << "\n";
        }
        return;
    }
    if (spec.lemma == "joint-super") {
        const StartSampler sampler(sched, spec.start);
        const double horizon = std::max(1.0, spec.t);
        os << "trial,seed,t,k,holds\n";
        for (std::uint64_t i = 0; i < spec.plan.trials; ++i) {
            const std::uint64_t seed = derive_stream(spec.plan.master_seed, stream_tag::trial, i);
            const JointSuperTrialFlags f =
                joint_super_trial(sched, spec.k, spec.t, horizon, spec.grange, sampler, seed);
            os << i << "," << seed << ",0," << spec.k << "," << f.holds_at0 << "\n";
            os << i << "," << seed << "," << format_double(spec.t) << "," << spec.k << ","
               << f.holds_att << "\n";
        }
        return;
    }
    throw std::invalid_argument("--emit-outcomes supports segment, joint-segment and joint-super");
}

int run_estimate(const EstimateArgs& args) {
    Output out(args.common);
    const Provenance prov = make_provenance("estimate", args.common);

    ExperimentSpec spec;
    spec.lemma = args.lemma;
    spec.plan = TrialPlan{args.trials, args.common.seed, args.common.workers};
    spec.j = args.j;
    spec.k = args.k;
    spec.m_levels = args.m_levels;
    spec.t = args.t;
    spec.grange = parse_grange(args.grange);
    spec.radius = args.n;
    spec.n = static_cast<std::uint64_t>(args.n);
    spec.window_end = args.window;
    spec.subset_size = args.subset;
    spec.floor = args.floor;
    if (!args.x.empty()) spec.x = parse_point(args.x);
    if (args.lemma != "hit-before-exit" && args.lemma != "resample-decorrelation") {
        spec.schedule = load_schedule(args.schedule);
        spec.start = parse_start(args.start);
    }

    const ExperimentReport rep = run_experiment(spec);
    const std::string params = "schedule=" + args.schedule + ";" + rep.params;
    emit_estimates(out, prov, rep.estimates, rep.ratios,
                   spec.schedule ? params : rep.params);
    if (!args.outcomes_path.empty()) {
        if (!spec.schedule)
            throw std::invalid_argument("--emit-outcomes needs a schedule-based lemma");
        emit_outcomes(args.outcomes_path, spec, prov);
    }
    return 0;
}

// ---------------------------------------------------------------------------
// sweep

struct SweepArgs {
    CommonOpts common;
    std::uint64_t n = 100;
    std::string pred = "true";
    std::uint64_t m0 = 0;
    std::uint64_t hits = 0;
    std::uint32_t m_levels = 1;
    std::string schedule = "small";
    std::string grange = "through-next";
};

int run_sweep(const SweepArgs& args) {
    Output out(args.common);
    const Provenance prov = make_provenance("sweep", args.common);
    WalkConfig cfg{args.common.seed, 1.0, std::max<std::uint64_t>(args.n, 1)};

    SweepResult res;
    if (args.pred == "true") {
        res = sweep(cfg, args.n, [](const PathView&) { return true; });
    } else if (args.pred == "no-origin") {
        res = sweep(cfg, args.n, [](const PathView& p) {
            for (std::size_t m = 1; m < p.positions.size(); ++m)
                if (p.positions[m] == kOrigin) return false;
            return true;
        });
    } else if (args.pred == "exceptional") {
        res = exceptional_demo(cfg, args.n, args.m0, args.hits);
    } else if (args.pred == "se") {
        const ParamSchedule sched = load_schedule(args.schedule);
        const GRange grange = parse_grange(args.grange);
        // the walk length is dictated by the schedule, not --n
        if (args.m_levels > 0)
            cfg.n_max = std::max(cfg.n_max, super_required_steps(sched, args.m_levels, grange));
        res = nested_intersection(cfg, sched, args.m_levels, grange);
    } else {
        throw std::invalid_argument("unknown predicate '" + args.pred + "'");
    }

    auto& os = out.stream();
    if (out.json()) {
        nlohmann::json doc;
        doc["meta"] = provenance_json(prov);
        doc["sweep"] = to_json(res);
        os << doc.dump(2) << "\n";
    } else {
        write_csv_provenance(os, prov);
        os << "# n=" << res.n << " total_measure=" << format_double(res.total_measure)
           << " event_count=" << res.event_count << "\n";
        os << "interval_start,interval_end\n";
        for (const auto& [a, b] : res.intervals)
            os << format_double(a) << "," << format_double(b) << "\n";
    }
    return 0;
}

// ---------------------------------------------------------------------------
// avoid

struct AvoidArgs {
    CommonOpts common;
    std::string forbidden = "odd-rows";
    std::string ngrid = "8:48:8";
    std::uint64_t seeds = 2000;
};

int run_avoid(const AvoidArgs& args) {
    Output out(args.common);
    const Provenance prov = make_provenance("avoid", args.common);

    AvoidanceSpec spec;
    spec.n_grid = parse_grid(args.ngrid);
    spec.seeds = args.seeds;
    spec.master_seed = args.common.seed;
    spec.workers = args.common.workers;
    if (args.forbidden == "none") {
        spec.forbidden = [](Point) { return false; };
    } else if (args.forbidden == "even-rows") {
        spec.forbidden = [](Point p) { return ((p.y % 2) + 2) % 2 == 0; };
    } else if (args.forbidden == "odd-rows") {
        spec.forbidden = [](Point p) { return ((p.y % 2) + 2) % 2 == 1; };
        spec.escape_witness = std::vector<Direction>{{1, 0}, {1, 0}, {-1, 0}};
    } else if (args.forbidden == "odd-cols") {
        spec.forbidden = [](Point p) { return ((p.x % 2) + 2) % 2 == 1; };
        spec.escape_witness = std::vector<Direction>{{0, 1}, {0, 1}, {0, -1}};
    } else if (args.forbidden.rfind("rows-mod:", 0) == 0) {
        const std::string body = args.forbidden.substr(9);
        const auto comma = body.find(',');
        if (comma == std::string::npos)
            throw std::invalid_argument("expected rows-mod:m,r");
        const std::int64_t m = std::stoll(body.substr(0, comma));
        const std::int64_t r = std::stoll(body.substr(comma + 1));
        if (m < 2 || r < 0 || r >= m) throw std::invalid_argument("rows-mod needs 0 <= r < m, m >= 2");
        spec.forbidden = [m, r](Point p) { return ((p.y % m) + m) % m == r; };
        if (r != 0) spec.escape_witness = std::vector<Direction>{{1, 0}, {-1, 0}};
    } else {
        throw std::invalid_argument("unknown forbidden set '" + args.forbidden + "'");
    }

    const AvoidanceReport rep = run_avoidance(spec);
    auto& os = out.stream();
    if (out.json()) {
        nlohmann::json doc;
        doc["meta"] = provenance_json(prov);
        nlohmann::json rows = nlohmann::json::array();
        for (const auto& row : rep.rows)
            rows.push_back({{"n", row.n}, {"fraction", row.fraction}, {"nonempty", row.nonempty}});
        doc["rows"] = rows;
        doc["seeds"] = rep.seeds;
        doc["fit"] = {{"slope", rep.fit.slope},
                      {"intercept", rep.fit.intercept},
                      {"r2", rep.fit.r2},
                      {"points", rep.fit.points}};
        os << doc.dump(2) << "\n";
    } else {
        write_csv_provenance(os, prov);
        os << "# fit slope=" << format_double(rep.fit.slope) << " r2=" << format_double(rep.fit.r2)
           << " points=" << rep.fit.points << "\n";
        os << "n,fraction,seeds,nonempty\n";
        for (const auto& row : rep.rows)
            os << row.n << "," << format_double(row.fraction) << "," << rep.seeds << ","
               << row.nonempty << "\n";
    }
    return 0;
}

// ---------------------------------------------------------------------------
// gen

struct GenArgs {
    CommonOpts common;
    std::uint64_t count = 10;
    double horizon = 1.0;
};

int run_gen(const GenArgs& args) {
    Output out(args.common);
    const Provenance prov = make_provenance("gen", args.common);
    auto& os = out.stream();
    if (out.json()) {
        // JSON lines: provenance first, then one timeline per line.
        nlohmann::json meta;
        meta["meta"] = provenance_json(prov);
        os << meta.dump() << "\n";
        for (std::uint64_t i = 1; i <= args.count; ++i)
            os << to_json(make_timeline(args.common.seed, i, args.horizon)).dump() << "\n";
    } else {
        write_csv_provenance(os, prov);
        os << "index,kind,time,dx,dy\n";
        for (std::uint64_t i = 1; i <= args.count; ++i) {
            const StepTimeline tl = make_timeline(args.common.seed, i, args.horizon);
            os << tl.index << ",initial,0," << tl.initial.dx << "," << tl.initial.dy << "\n";
            for (const TimedValue& ev : tl.events)
                os << tl.index << ",ring," << format_double(ev.time) << "," << ev.value.dx << ","
                   << ev.value.dy << "\n";
        }
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"dynwalk: dynamical simple random walk laboratory on Z^2"};
    app.require_subcommand(1);

    ScheduleArgs schedule_args;
    auto* sched_cmd = app.add_subcommand("schedule", "print segment schedules, beta values and time scales");
    add_common(sched_cmd, schedule_args.common);
    sched_cmd->add_flag("--paper", schedule_args.paper, "use the exact reference schedule");
    sched_cmd->add_option("--kmax", schedule_args.kmax, "largest k to print");
    sched_cmd->add_option("--desk", schedule_args.desk_path, "desk schedule JSON file");
    sched_cmd->add_option("--builtin", schedule_args.builtin, "built-in desk schedule (tiny|small)");
    sched_cmd->add_option("--beta", schedule_args.beta_k, "print the exact beta value for one k");
    sched_cmd->add_option("--K", schedule_args.k_time, "print K(t) and K'(t) for this t");

    OracleArgs oracle_args;
    auto* oracle_cmd = app.add_subcommand("oracle", "exact hitting-before-exit solver");
    add_common(oracle_cmd, oracle_args.common);
    oracle_cmd->add_option("--n", oracle_args.n, "exit radius");
    oracle_cmd->add_option("--query", oracle_args.query, "lattice point x,y to report");
    oracle_cmd->add_option("--dump", oracle_args.dump_path, "write the whole field as CSV");
    oracle_cmd->add_flag("--band", oracle_args.band, "report the minimal log-band constant");
    oracle_cmd->add_flag("--fit-escape", oracle_args.fit_escape,
                         "regress 1/escape probability against ln n");
    oracle_cmd->add_option("--nmax", oracle_args.nmax, "largest radius for --fit-escape");
    oracle_cmd->add_option("--tol", oracle_args.tol, "solver residual tolerance");

    EstimateArgs est_args;
    auto* est_cmd = app.add_subcommand("estimate", "Monte Carlo estimators with references");
    add_common(est_cmd, est_args.common);
    est_cmd->add_option("--lemma", est_args.lemma,
                        "hit-before-exit|segment|joint-segment|joint-super|"
                        "resample-decorrelation|fmt-ratio")
        ->required();
    est_cmd->add_option("--trials", est_args.trials, "Monte Carlo trials");
    est_cmd->add_option("--x", est_args.x, "start point x,y");
    est_cmd->add_option("--n", est_args.n, "radius (hit-before-exit) or prefix length");
    est_cmd->add_option("--schedule", est_args.schedule, "paper[:kmax] | tiny | small | file.json");
    est_cmd->add_option("--j", est_args.j, "segment index");
    est_cmd->add_option("--k", est_args.k, "super-segment index");
    est_cmd->add_option("--t", est_args.t, "second dynamical time");
    est_cmd->add_option("--start", est_args.start, "fixed:x,y or annulus:k");
    est_cmd->add_option("--grange", est_args.grange, "annulus-pin range: through-next|within");
    est_cmd->add_option("--window", est_args.window, "trailing window end (decorrelation)");
    est_cmd->add_option("--subset", est_args.subset, "resampled subset size (decorrelation)");
    est_cmd->add_option("--M", est_args.m_levels, "number of nested super-segment levels");
    est_cmd->add_option("--floor", est_args.floor, "refusal floor for fmt-ratio");
    est_cmd->add_option("--emit-outcomes", est_args.outcomes_path,
                        "also write per-trial detector outcome rows to this CSV file");

    SweepArgs sweep_args;
    auto* sweep_cmd = app.add_subcommand("sweep", "maximal predicate intervals over t in [0,1]");
    add_common(sweep_cmd, sweep_args.common);
    sweep_cmd->add_option("--n", sweep_args.n, "walk prefix length");
    sweep_cmd->add_option("--pred", sweep_args.pred, "true|no-origin|exceptional|se");
    sweep_cmd->add_option("--m0", sweep_args.m0, "origin-free tail start (exceptional)");
    sweep_cmd->add_option("--hits", sweep_args.hits, "required circle visits (exceptional)");
    sweep_cmd->add_option("--M", sweep_args.m_levels, "nested levels (se)");
    sweep_cmd->add_option("--schedule", sweep_args.schedule, "schedule for se predicate");
    sweep_cmd->add_option("--grange", sweep_args.grange, "through-next|within");

    AvoidArgs avoid_args;
    auto* avoid_cmd = app.add_subcommand("avoid", "forbidden-set avoidance decay experiment");
    add_common(avoid_cmd, avoid_args.common);
    avoid_cmd->add_option("--L", avoid_args.forbidden,
                          "none|even-rows|odd-rows|odd-cols|rows-mod:m,r");
    avoid_cmd->add_option("--ngrid", avoid_args.ngrid, "prefix lengths as first:last:step");
    avoid_cmd->add_option("--seeds", avoid_args.seeds, "number of independent walks");

    GenArgs gen_args;
    gen_args.common.format = "json";  // JSON lines is the native dump format
    auto* gen_cmd = app.add_subcommand("gen", "dump step timelines (JSON lines or CSV)");
    add_common(gen_cmd, gen_args.common);
    gen_cmd->add_option("--count", gen_args.count, "number of step indices");
    gen_cmd->add_option("--horizon", gen_args.horizon, "timeline horizon");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    const std::string canon = canonical_args(argc, argv);
    try {
        if (sched_cmd->parsed()) {
            schedule_args.common.canonical_args = canon;
            resolve_common(schedule_args.common, sched_cmd);
            return run_schedule(schedule_args);
        }
        if (oracle_cmd->parsed()) {
            oracle_args.common.canonical_args = canon;
            resolve_common(oracle_args.common, oracle_cmd);
            return run_oracle(oracle_args);
        }
        if (est_cmd->parsed()) {
            est_args.common.canonical_args = canon;
            resolve_common(est_args.common, est_cmd);
            return run_estimate(est_args);
        }
        if (sweep_cmd->parsed()) {
            sweep_args.common.canonical_args = canon;
            resolve_common(sweep_args.common, sweep_cmd);
            return run_sweep(sweep_args);
        }
        if (avoid_cmd->parsed()) {
            avoid_args.common.canonical_args = canon;
            resolve_common(avoid_args.common, avoid_cmd);
            return run_avoid(avoid_args);
        }
        if (gen_cmd->parsed()) {
            gen_args.common.canonical_args = canon;
            resolve_common(gen_args.common, gen_cmd);
            return run_gen(gen_args);
        }
    } catch (const ResourceError& e) {
        std::cerr << "resource error: " << e.what() << "\n";
        return 4;
    } catch (const ConvergenceError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    } catch (const RefusalError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::out_of_range& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
