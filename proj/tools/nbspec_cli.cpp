#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "nbspec/json.hpp"
#include "nbspec/nbspec.hpp"

using json = nlohmann::json;
using namespace nbspec;

namespace {

enum class Exit { ok = 0, failed = 1, usage = 2 };

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Options shared by every subcommand.
struct RunConfig {
    std::string command;
    std::string input;
    std::string named;
    std::string er;
    std::string ba;
    bool prune = false;
    std::optional<std::uint64_t> seed_flag;
    std::uint64_t seed = 0;
    std::string format = "json";
    std::string output;
    Tolerances tol{};

    std::string source() const {
        if (!input.empty()) return "file:" + input;
        if (!named.empty()) return "named:" + named;
        if (!er.empty()) return "er:" + er;
        if (!ba.empty()) return "ba:" + ba;
        return "";
    }

    json to_json() const {
        return {{"command", command},
                {"source", source()},
                {"prune", prune},
                {"seed", seed},
                {"format", format},
                {"output", output},
                {"tolerances",
                 {{"eigen", tol.eigen_residual}, {"root", tol.root_residual}, {"det", tol.determinant}}}};
    }
};

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) out.push_back(item);
    return out;
}

template <class T>
T parse_number(const std::string& s, const char* what) {
    std::istringstream in(s);
    T v{};
    in >> v;
    if (!in || !in.eof()) throw UsageError(std::string("bad ") + what + " '" + s + "'");
    return v;
}

void resolve_seed(RunConfig& cfg) {
    if (cfg.seed_flag) {
        cfg.seed = *cfg.seed_flag;
    } else if (const char* env = std::getenv("NBSPEC_SEED"); env && *env) {
        cfg.seed = parse_number<std::uint64_t>(env, "NBSPEC_SEED");
    }
}

// "n,p[,seed]" for ER, "n,k[,seed]" for BA; missing seed falls back to the run seed.
GeneratorSpec parse_generator(const std::string& text, GeneratorKind kind, std::uint64_t seed) {
    const auto f = split(text, ',');
    if (f.size() != 2 && f.size() != 3) throw UsageError("generator spec must be n,param[,seed]: '" + text + "'");
    GeneratorSpec g;
    g.kind = kind;
    g.n = parse_number<std::size_t>(f[0], "node count");
    if (kind == GeneratorKind::erdos_renyi)
        g.p = parse_number<double>(f[1], "edge probability");
    else
        g.attachments = parse_number<std::size_t>(f[1], "attachment count");
    g.seed = f.size() == 3 ? parse_number<std::uint64_t>(f[2], "seed") : seed;
    return g;
}

Graph load_graph(const RunConfig& cfg) {
    const int sources = !cfg.input.empty() + !cfg.named.empty() + !cfg.er.empty() + !cfg.ba.empty();
    if (sources != 1) throw UsageError("give exactly one graph source: FILE, --named, --er or --ba");
    Graph g;
    if (!cfg.input.empty())
        g = load_edge_list_file(cfg.input);
    else if (!cfg.named.empty())
        g = named_graph(cfg.named);
    else if (!cfg.er.empty())
        g = generate(parse_generator(cfg.er, GeneratorKind::erdos_renyi, cfg.seed));
    else
        g = generate(parse_generator(cfg.ba, GeneratorKind::barabasi_albert, cfg.seed));
    return cfg.prune ? prune_two_core(g) : g;
}

// Node labels, falling back to positions for unlabelled integers.
std::vector<NodeId> parse_nodes(const Graph& g, const std::string& text) {
    std::vector<NodeId> out;
    for (const auto& raw : split(text, ',')) {
        const std::string_view tok = detail::trim(raw);
        if (tok.empty()) continue;
        if (auto id = g.find(tok)) {
            out.push_back(*id);
            continue;
        }
        throw UsageError("unknown node '" + std::string(tok) + "'");
    }
    if (out.empty()) throw UsageError("empty node list");
    return out;
}

std::vector<std::string> labels_of(const Graph& g, const std::vector<NodeId>& ids) {
    std::vector<std::string> out;
    for (NodeId v : ids) out.push_back(g.label(v));
    return out;
}

// Writes to --output when given, stdout otherwise.
class Sink {
  public:
    explicit Sink(const std::string& path) {
        if (!path.empty()) {
            file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
            if (!*file_) throw UsageError("cannot write '" + path + "'");
        }
    }
    std::ostream& out() { return file_ ? *file_ : std::cout; }

  private:
    std::unique_ptr<std::ofstream> file_;
};

void write_json(const RunConfig& cfg, json body) {
    body["config"] = cfg.to_json();
    Sink sink(cfg.output);
    sink.out() << body.dump(2) << '\n';
}

std::ofstream open_file(const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw UsageError("cannot write '" + path + "'");
    f << std::setprecision(17);
    return f;
}

// ---------------------------------------------------------------- info

Exit cmd_info(const RunConfig& cfg) {
    const Graph g = load_graph(cfg);
    const auto report = validate(g);
    json j = to_json(report);
    j["n"] = g.node_count();
    j["m"] = g.edge_count();
    j["bipartite"] = is_bipartite(g);
    write_json(cfg, j);
    return Exit::ok;
}

// ---------------------------------------------------------------- spectrum

struct SpectrumFlags {
    bool full = false;
    bool perron = false;
    bool ihara = false;
    std::string dump;
};

json values_json(const std::vector<Complex>& vals) {
    json arr = json::array();
    for (const auto& z : vals) arr.push_back(to_json(z));
    return arr;
}

Exit cmd_spectrum(const RunConfig& cfg, const SpectrumFlags& flags) {
    const Graph g = load_graph(cfg);
    const NbMatrix nb(g);
    if (!flags.dump.empty()) {
        auto f = open_file(flags.dump);
        write_coordinate_dump(f, nb.integer());
    }
    const int modes = flags.full + flags.perron + flags.ihara;
    if (modes > 1) throw UsageError("choose one of --full, --perron, --ihara");

    json j;
    std::vector<Complex> values;
    if (flags.perron) {
        const auto pp = perron(nb, cfg.tol);
        j["mode"] = "perron";
        j["lambda1"] = pp.lambda1;
        j["iterations"] = pp.iterations;
        j["residual"] = pp.residual;
        values = {pp.lambda1};
    } else if (flags.ihara) {
        values = ihara_spectrum(g);
        j["mode"] = "ihara";
        j["count"] = values.size();
        j["eigenvalues"] = values_json(values);
    } else {
        const auto sys = full_eigensystem(nb, cfg.tol);
        values = sys.values();
        std::size_t plus = 0, minus = 0;
        for (const auto& z : values) {
            if (std::abs(z - 1.0) < cfg.tol.cluster) ++plus;
            if (std::abs(z + 1.0) < cfg.tol.cluster) ++minus;
        }
        j["mode"] = "full";
        j["count"] = values.size();
        j["plus_one"] = plus;
        j["minus_one"] = minus;
        j["m_minus_n"] = static_cast<long long>(g.edge_count()) - static_cast<long long>(g.node_count());
        j["eigen_residual"] = sys.eigen_residual;
        j["inverse_residual"] = sys.inverse_residual;
        j["near_defective"] = sys.near_defective;
        j["eigenvalues"] = values_json(values);
    }

    if (cfg.format == "csv") {
        Sink sink(cfg.output);
        auto& out = sink.out();
        out << "# config " << cfg.to_json().dump() << '\n' << "index,re,im\n" << std::setprecision(17);
        for (std::size_t i = 0; i < values.size(); ++i) out << i << ',' << values[i].real() << ',' << values[i].imag() << '\n';
        return Exit::ok;
    }
    write_json(cfg, j);
    return Exit::ok;
}

// ---------------------------------------------------------------- perturb

struct PerturbFlags {
    std::string add;
    std::string remove;
    std::string curve_out;
    std::optional<double> disks_t;
    std::string disks_out = "disks.csv";
};

json disk_summary(const std::vector<GershgorinDisk>& disks, double t) {
    json j;
    j["t"] = t;
    j["count"] = disks.size();
    const auto overlap = first_overlap(disks, 0);
    j["d1_disjoint"] = !overlap.has_value();
    j["d1_real_below_minus_t2"] = !disks.empty() && real_points_below(disks[0], -t * t);
    bool above = true;
    for (const auto& d : disks) above = above && lies_above(d, -t * t);
    j["all_above_minus_t2"] = above;
    return j;
}

void write_disks(const std::string& path, const std::vector<GershgorinDisk>& disks, double t) {
    auto f = open_file(path);
    f << "t,j,center_re,center_im,radius,disjoint_from_d1,real_min,real_max\n";
    for (std::size_t i = 0; i < disks.size(); ++i) {
        const auto& d = disks[i];
        const auto iv = d.real_interval();
        f << t << ',' << i << ',' << d.center.real() << ',' << d.center.imag() + 0.0 << ',' << d.radius << ','
          << (i == 0 ? "" : (d.disjoint(disks[0]) ? "1" : "0")) << ',';
        if (iv) f << iv->first << ',' << iv->second;
        else f << ',';
        f << '\n';
    }
}

Exit cmd_perturb(const RunConfig& cfg, const PerturbFlags& flags) {
    if (flags.add.empty() == flags.remove.empty()) throw UsageError("give exactly one of --add or --remove");
    const Graph g = load_graph(cfg);
    AnalysisOptions opts;
    opts.tol = cfg.tol;

    AdditionAnalysis a;
    Graph base_graph = g;
    if (!flags.add.empty()) {
        a = analyze_addition(g, parse_nodes(g, flags.add), opts);
    } else {
        const auto c = parse_nodes(g, flags.remove);
        if (c.size() != 1) throw UsageError("--remove takes a single node");
        a = analyze_removal(g, c[0], opts);
        base_graph = remove_node(g, c[0]);
    }

    json j = to_json(a);
    j["neighbors"] = labels_of(base_graph, a.neighbors);

    if (!flags.curve_out.empty()) {
        auto f = open_file(flags.curve_out);
        f << "t,y,g\n";
        for (const auto& [t, y] : a.y_samples) f << t << ',' << y << ',' << y + t * t << '\n';
        j["curve_out"] = flags.curve_out;
    }
    if (flags.disks_t) {
        const double t = *flags.disks_t;
        const auto base = prepare_base(base_graph, opts);
        if (!base.eigensystem) throw UsageError("no P-normalized eigenbasis for this graph; disks unavailable");
        const Eigen::MatrixXd x = x_from_formula(base_graph, a.neighbors).cast<double>();
        const auto disks = gershgorin_disks(h_matrix(*base.eigensystem, x, t));
        write_disks(flags.disks_out, disks, t);
        j["disks"] = disk_summary(disks, t);
        j["disks"]["path"] = flags.disks_out;
    }
    write_json(cfg, j);
    return Exit::ok;
}

// ---------------------------------------------------------------- verify

struct VerifyFlags {
    std::string suite = "all";
    std::string attach;
};

json check(bool pass, json detail) {
    detail["pass"] = pass;
    return detail;
}

Exit cmd_verify(const RunConfig& cfg, const VerifyFlags& flags) {
    static const std::vector<std::string> suites{"ihara", "walks", "schur", "eq5", "pm1", "bounds"};
    std::vector<std::string> run;
    if (flags.suite == "all") run = suites;
    else if (std::find(suites.begin(), suites.end(), flags.suite) != suites.end()) run = {flags.suite};
    else throw UsageError("unknown suite '" + flags.suite + "'");

    const Graph g = load_graph(cfg);
    if (g.node_count() < 2) throw UsageError("graph needs at least two nodes");
    const std::vector<NodeId> attach =
        flags.attach.empty() ? std::vector<NodeId>{0, 1} : parse_nodes(g, flags.attach);
    const NbMatrix nb(g);
    const auto p = build_reversal(g);
    const auto report = validate(g);

    std::optional<EigenSystem> sys;
    auto eigensystem = [&]() -> const EigenSystem& {
        if (!sys) sys = full_eigensystem(nb, cfg.tol);
        return *sys;
    };

    json results;
    bool all_pass = true;
    for (const auto& name : run) {
        json r;
        try {
            if (name == "ihara") {
                const auto rep = verify_ihara(g, default_ihara_samples(g, 20, cfg.seed, cfg.tol));
                r = check(rep.max_residual <= cfg.tol.determinant,
                          {{"max_residual", rep.max_residual}, {"samples", rep.samples.size()}});
            } else if (name == "walks") {
                if (2 * g.edge_count() > 60) {
                    r = {{"pass", true}, {"skipped", "2m > 60"}};
                } else {
                    r = to_json(oracle::verify_walk_powers(g, nb.integer(), 4));
                }
            } else if (name == "schur") {
                const double l1 = spectral_radius(nb, cfg.tol);
                std::vector<double> ts;
                for (int i = 1; i <= 10; ++i) ts.push_back(l1 + 0.1 + 0.3 * i);
                const auto rep = oracle::verify_schur(g, attach, ts);
                const auto blocks = block_decompose(g, attach);
                const bool structure = (blocks.f_block * blocks.f_block).isZero() &&
                                       (blocks.d_block * blocks.e_block).isZero() &&
                                       blocks.x == blocks.d_block * blocks.f_block * blocks.e_block &&
                                       blocks.x == x_from_formula(g, attach);
                r = check(rep.used > 0 && rep.max_residual <= cfg.tol.determinant && structure,
                          {{"max_residual", rep.max_residual}, {"used", rep.used}, {"block_identities", structure}});
            } else if (name == "eq5") {
                const auto normalized = p_normalize(eigensystem(), p, cfg.tol);
                r = check(normalized.p_residual <= cfg.tol.p_normalization, {{"p_residual", normalized.p_residual}});
            } else if (name == "pm1") {
                r = to_json(check_pm1(eigensystem(), p, g, cfg.tol));
            } else if (name == "bounds") {
                if (!report.perron_applicable) {
                    r = {{"pass", true}, {"skipped", "base graph is not Perron-applicable"}};
                } else {
                    AnalysisOptions opts;
                    opts.tol = cfg.tol;
                    opts.curve_samples = 0;
                    const auto a = analyze_addition(g, attach, opts);
                    bool ok = a.lambda_c > a.lambda1 || a.d == 1;
                    json bounds = json::array();
                    for (const auto& b : a.bounds) {
                        ok = ok && b.bound_holds() && b.prop1_holds;
                        bounds.push_back(to_json(b));
                    }
                    r = check(ok && !a.bounds.empty(), {{"epsilon_c", a.epsilon_c}, {"bounds", bounds}});
                }
            }
        } catch (const Error& e) {
            r = {{"pass", false}, {"error", e.what()}};
        }
        all_pass = all_pass && r.value("pass", false);
        results[name] = r;
    }
    write_json(cfg, {{"suite", flags.suite}, {"attach", labels_of(g, attach)}, {"results", results}, {"pass", all_pass}});
    return all_pass ? Exit::ok : Exit::failed;
}

// ---------------------------------------------------------------- sweep

struct SweepFlags {
    std::string er;
    std::size_t trials = 10;
    std::size_t attach_degree = 3;
    std::size_t jobs = 1;
};

Exit cmd_sweep(RunConfig cfg, const SweepFlags& flags) {
    if (flags.er.empty()) throw UsageError("sweep needs --er n,p");
    const auto f = split(flags.er, ',');
    if (f.size() != 2) throw UsageError("sweep --er takes n,p (seed comes from --seed)");
    SweepSpec spec;
    spec.n = parse_number<std::size_t>(f[0], "node count");
    spec.p = parse_number<double>(f[1], "edge probability");
    spec.trials = flags.trials;
    spec.attach_degree = flags.attach_degree;
    spec.seed = cfg.seed;
    spec.jobs = flags.jobs;
    spec.tol = cfg.tol;
    cfg.er = flags.er;
    cfg.format = "csv";

    const auto rows = run_sweep(spec);
    Sink sink(cfg.output);
    auto& out = sink.out();
    json conf = cfg.to_json();
    conf["trials"] = spec.trials;
    conf["attach_degree"] = spec.attach_degree;
    out << "# config " << conf.dump() << '\n';
    out << "trial,seed,n,m,neighbors,lambda1,lambda_c,eps,alpha11_over_lambda1_sq,abs_error,rel_error,gamma,"
           "lxr_norm2,bound_p1,bound_p2,bound_pinf,bounds_hold\n";
    out << std::setprecision(17);
    for (const auto& r : rows) {
        out << r.trial << ',' << r.seed << ',' << r.n << ',' << r.m << ',';
        for (std::size_t i = 0; i < r.neighbors.size(); ++i) out << (i ? " " : "") << r.neighbors[i];
        out << ',' << r.lambda1 << ',' << r.lambda_c << ',' << r.eps << ',' << r.alpha11_scaled << ',' << r.abs_error
            << ',' << r.rel_error << ',' << r.gamma << ',' << r.lxr_norm2 << ',' << r.bound1 << ',' << r.bound2 << ','
            << r.bound_inf << ',' << (r.bounds_hold ? 1 : 0) << '\n';
    }
    return Exit::ok;
}

// ---------------------------------------------------------------- generate

Exit cmd_generate(const RunConfig& cfg) {
    const Graph g = load_graph(cfg);
    Sink sink(cfg.output);
    sink.out() << "# " << cfg.to_json().dump() << '\n';
    write_edge_list(sink.out(), g);
    return Exit::ok;
}

void add_source_options(CLI::App* app, RunConfig& cfg) {
    app->add_option("input", cfg.input, "edge list file");
    app->add_option("--named", cfg.named, "named graph, e.g. complete:4, cycle:5, petersen");
    app->add_option("--er", cfg.er, "Erdos-Renyi n,p[,seed]");
    app->add_option("--ba", cfg.ba, "Barabasi-Albert n,k[,seed]");
    app->add_flag("--prune", cfg.prune, "keep the largest component of the 2-core");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Non-backtracking spectra and node perturbations"};
    app.require_subcommand(1);

    RunConfig cfg;
    std::uint64_t seed_value = 0;
    auto* seed_opt = app.add_option("--seed", seed_value, "seed (falls back to NBSPEC_SEED)");
    app.add_option("--format", cfg.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    app.add_option("-o,--output", cfg.output, "output path (default stdout)");
    app.add_option("--tol-eigen", cfg.tol.eigen_residual, "eigen residual tolerance");
    app.add_option("--tol-root", cfg.tol.root_residual, "root residual tolerance");
    app.add_option("--tol-det", cfg.tol.determinant, "determinant identity tolerance");
    app.fallthrough();

    auto* info = app.add_subcommand("info", "validation report and basic stats");
    add_source_options(info, cfg);

    SpectrumFlags spectrum_flags;
    auto* spectrum = app.add_subcommand("spectrum", "Perron value, full or Ihara spectrum");
    add_source_options(spectrum, cfg);
    spectrum->add_flag("--full", spectrum_flags.full, "dense eigendecomposition (default)");
    spectrum->add_flag("--perron", spectrum_flags.perron, "Perron eigenvalue only");
    spectrum->add_flag("--ihara", spectrum_flags.ihara, "spectrum of the 2n x 2n companion matrix");
    spectrum->add_option("--dump", spectrum_flags.dump, "write B as 'row col value' triples");

    PerturbFlags perturb_flags;
    auto* perturb = app.add_subcommand("perturb", "add or remove a node");
    add_source_options(perturb, cfg);
    perturb->add_option("--add", perturb_flags.add, "comma-separated neighbours of the new node");
    perturb->add_option("--remove", perturb_flags.remove, "node to remove");
    perturb->add_option("--emit-curve", perturb_flags.curve_out, "CSV of t, y(t), y(t)+t^2");
    perturb->add_option("--emit-disks", perturb_flags.disks_t, "Gershgorin disks of H(t) at this t");
    perturb->add_option("--disks-out", perturb_flags.disks_out, "disk CSV path");

    VerifyFlags verify_flags;
    auto* verify = app.add_subcommand("verify", "identity and bound checks");
    add_source_options(verify, cfg);
    verify->add_option("--suite", verify_flags.suite, "ihara|walks|schur|eq5|pm1|bounds|all");
    verify->add_option("--attach", verify_flags.attach, "neighbours for schur/bounds (default: first two nodes)");

    SweepFlags sweep_flags;
    auto* sweep = app.add_subcommand("sweep", "random attachment ensemble");
    sweep->add_option("--er", sweep_flags.er, "n,p")->required();
    sweep->add_option("--trials", sweep_flags.trials)->check(CLI::PositiveNumber);
    sweep->add_option("--attach-degree", sweep_flags.attach_degree)->check(CLI::PositiveNumber);
    sweep->add_option("--jobs", sweep_flags.jobs, "worker threads")->check(CLI::PositiveNumber);

    auto* gen = app.add_subcommand("generate", "write an edge list");
    add_source_options(gen, cfg);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : static_cast<int>(Exit::usage);
    }
    if (seed_opt->count() > 0) cfg.seed_flag = seed_value;

    try {
        resolve_seed(cfg);
        Exit code = Exit::ok;
        if (*info) {
            cfg.command = "info";
            code = cmd_info(cfg);
        } else if (*spectrum) {
            cfg.command = "spectrum";
            code = cmd_spectrum(cfg, spectrum_flags);
        } else if (*perturb) {
            cfg.command = "perturb";
            code = cmd_perturb(cfg, perturb_flags);
        } else if (*verify) {
            cfg.command = "verify";
            code = cmd_verify(cfg, verify_flags);
        } else if (*sweep) {
            cfg.command = "sweep";
            code = cmd_sweep(cfg, sweep_flags);
        } else if (*gen) {
            cfg.command = "generate";
            code = cmd_generate(cfg);
        }
        return static_cast<int>(code);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
    }
    return static_cast<int>(Exit::usage);
}
