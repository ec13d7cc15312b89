#include "cli.hpp"

#include "slbi/conditions.hpp"
#include "slbi/designs.hpp"
#include "slbi/errors.hpp"
#include "slbi/estimators.hpp"
#include "slbi/io.hpp"
#include "slbi/metrics.hpp"
#include "slbi/split_iss.hpp"
#include "slbi/split_lbi.hpp"

#include <CLI11.hpp>
#include <omp.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>

namespace slbi::cli {

namespace {

namespace fs = std::filesystem;

struct Common {
    std::string out_dir = ".";
    std::string format = "csv";
    int threads = 0;
};

std::vector<double> parse_list(const std::string& text, const char* what) {
    std::vector<double> values;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            values.push_back(io::parse_double(item, 0));
        } catch (const ParseError&) {
            throw InvalidHyperparam(std::string("bad value '") + item + "' in --" + what);
        }
    }
    if (values.empty()) throw InvalidHyperparam(std::string("--") + what + " is empty");
    return values;
}

// "lo:hi:count" for a log-spaced grid, otherwise a comma list.
std::vector<double> parse_grid(const std::string& text) {
    if (text.find(':') == std::string::npos) return parse_list(text, "nu-grid");
    std::vector<std::string> parts;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ':')) parts.push_back(item);
    if (parts.size() != 3) throw InvalidHyperparam("--nu-grid expects lo:hi:count");
    const double lo = io::parse_double(parts[0], 0);
    const double hi = io::parse_double(parts[1], 0);
    const int count = std::atoi(parts[2].c_str());
    if (!(lo > 0.0) || !(hi > lo) || count < 1) throw InvalidHyperparam("--nu-grid needs 0 < lo < hi and count >= 1");
    std::vector<double> grid;
    for (int i = 0; i < count; ++i) {
        const double f = count == 1 ? 0.0 : static_cast<double>(i) / (count - 1);
        grid.push_back(std::exp(std::log(lo) + f * (std::log(hi) - std::log(lo))));
    }
    return grid;
}

IndexSet parse_one_based(const std::string& text, Index size, const char* what) {
    IndexSet s;
    if (text.empty()) return s;
    for (double v : parse_list(text, what)) {
        if (v != std::floor(v) || v < 1 || v > static_cast<double>(size))
            throw InvalidDimension(std::string("--") + what + " entries must be integers in 1.." + std::to_string(size));
        s.push_back(static_cast<Index>(v) - 1);
    }
    std::sort(s.begin(), s.end());
    if (std::adjacent_find(s.begin(), s.end()) != s.end())
        throw InvalidDimension(std::string("--") + what + " has duplicates");
    return s;
}

void apply_threads(int threads) {
    if (threads <= 0) {
        if (const char* env = std::getenv("SPLIT_LBI_THREADS")) threads = std::atoi(env);
    }
    if (threads > 0) omp_set_num_threads(threads);
}

void check_format(const std::string& format) {
    if (format != "csv" && format != "json") throw InvalidHyperparam("--format must be csv or json");
}

fs::path prepare_out(const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) throw IoError("cannot create output directory " + dir);
    return fs::path(dir);
}

Problem load_problem(const std::string& file, const std::string& dir) {
    if (!file.empty() && !dir.empty()) throw InvalidHyperparam("give either --problem or --problem-dir");
    if (!file.empty()) return io::read_problem_json(file);
    if (!dir.empty()) return io::read_problem_dir(dir);
    throw InvalidHyperparam("a problem is required (--problem FILE.json or --problem-dir DIR)");
}

std::string fixed(double v, int digits) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(digits) << v;
    return os.str();
}

// ---------------------------------------------------------------- simulate

struct SimulateArgs {
    std::string design = "lasso";
    std::string nu = "1,5,10";
    std::string kappa = "200";
    std::size_t reps = 100;
    std::uint64_t seed = 1;
    Index n = 50;
    Index p = 50;
    double sigma = 1.0;
    double horizon = 50.0;
    bool full_horizon = false;
    bool per_replicate = false;
};

int cmd_simulate(const SimulateArgs& a, const Common& c, std::ostream& out) {
    check_format(c.format);
    SimulationSpec spec;
    spec.design = parse_design(a.design);
    spec.n = a.n;
    spec.p = a.p;
    spec.sigma = a.sigma;
    spec.time_horizon = a.horizon;
    spec.early_stop = !a.full_horizon;

    std::vector<HarnessHyper> hypers;
    const auto kappas = parse_list(a.kappa, "kappa");
    for (double kappa : kappas)
        for (double nu : parse_list(a.nu, "nu")) hypers.push_back({nu, kappa});
    for (const HarnessHyper& h : hypers)
        if (!(h.nu > 0.0) || !(h.kappa > 0.0)) throw InvalidHyperparam("--nu and --kappa values must be positive");
    if (a.reps < 1) throw InvalidHyperparam("--reps must be >= 1");

    const HarnessResult result = replicate_harness(spec, a.seed, a.reps, hypers);
    const fs::path dir = prepare_out(c.out_dir);
    if (c.format == "csv") {
        std::ostringstream os;
        io::write_summary_csv(os, result.summary);
        io::write_text((dir / "summary.csv").string(), os.str());
    } else {
        io::write_text((dir / "summary.json").string(), io::summary_to_json(result.summary).dump(1) + "\n");
    }
    if (a.per_replicate) {
        std::ostringstream os;
        io::write_replicates_csv(os, to_string(spec.design), result, hypers);
        io::write_text((dir / "replicates.csv").string(), os.str());
    }

    out << "design    nu      kappa   alpha      AUC mean (sd)      failed\n";
    for (const SummaryRow& r : result.summary) {
        out << std::left << std::setw(10) << r.design << std::setw(8) << io::format_double(r.nu) << std::setw(8)
            << io::format_double(r.kappa) << std::setw(11) << fixed(r.alpha, 6) << fixed(r.mean_auc, 4) << " ("
            << fixed(r.sd_auc, 4) << ")    " << r.n_failed << "/" << r.n_replicates << '\n';
    }
    return kOk;
}

// -------------------------------------------------------------------- path

struct PathArgs {
    std::string problem;
    std::string problem_dir;
    std::string solver = "lbi";
    double nu = 1.0;
    double kappa = 100.0;
    std::optional<double> alpha;
    std::optional<std::size_t> k_max;
    std::optional<double> t_max;
    std::size_t stride = 1;
    std::size_t samples = 101;
};

int cmd_path(const PathArgs& a, const Common& c, std::ostream& out) {
    check_format(c.format);
    const Problem problem = load_problem(a.problem, a.problem_dir);
    const fs::path dir = prepare_out(c.out_dir);
    std::vector<PathPoint> points;
    EntryTimes entry;
    Hyperparams hyper{a.nu, a.kappa, a.alpha};
    const Hyperparams* hyper_ptr = nullptr;

    if (a.solver == "lbi") {
        hyper = resolve(problem, hyper);
        hyper_ptr = &hyper;
        std::size_t k_max = 1000;
        if (a.k_max && a.t_max) throw InvalidHyperparam("give either --k-max or --t-max");
        if (a.k_max) k_max = *a.k_max;
        if (a.t_max) {
            if (!(*a.t_max >= 0.0)) throw InvalidHyperparam("--t-max must be >= 0");
            k_max = static_cast<std::size_t>(std::ceil(*a.t_max / *hyper.alpha));
        }
        const Path path = run(problem, hyper, k_max, a.stride);
        entry = entry_times(path);
        points = path.points;
        out << "split LBI: nu=" << io::format_double(hyper.nu) << " kappa=" << io::format_double(hyper.kappa)
            << " alpha=" << io::format_double(*hyper.alpha) << " steps=" << k_max << " recorded=" << points.size()
            << '\n';
    } else if (a.solver == "iss") {
        if (a.k_max) throw InvalidHyperparam("--k-max applies to the lbi solver only");
        const double t_max = a.t_max.value_or(10.0);
        if (a.samples < 2) throw InvalidHyperparam("--samples must be >= 2");
        const auto segments = solve_path(problem, a.nu, t_max);
        const double horizon = std::isfinite(segments.back().t_end) ? segments.back().t_end : t_max;
        std::vector<double> grid;
        for (std::size_t i = 0; i < a.samples; ++i)
            grid.push_back(horizon * static_cast<double>(i) / static_cast<double>(a.samples - 1));
        points = sample_path(problem, a.nu, segments, grid);
        entry = entry_times(segments);
        io::write_text((dir / "segments.json").string(), io::segments_to_json(segments).dump(1) + "\n");
        out << "split ISS: nu=" << io::format_double(a.nu) << " segments=" << segments.size()
            << " horizon=" << io::format_double(horizon) << '\n';
    } else {
        throw InvalidHyperparam("--solver must be lbi or iss");
    }

    if (c.format == "csv") {
        std::ostringstream os;
        io::write_path_csv(os, points);
        io::write_text((dir / "path.csv").string(), os.str());
        std::ostringstream es;
        io::write_entry_times_csv(es, entry);
        io::write_text((dir / "entry_times.csv").string(), es.str());
    } else {
        io::write_text((dir / "path.json").string(), io::path_to_json(points, hyper_ptr).dump(1) + "\n");
        io::write_text((dir / "entry_times.json").string(), io::entry_times_to_json(entry).dump(1) + "\n");
    }
    return kOk;
}

// ---------------------------------------------------------------- diagnose

struct DiagnoseArgs {
    std::string problem;
    std::string problem_dir;
    std::string support;
    std::string signs;
    double nu = 1.0;
    std::string nu_grid = "1e-2:1e2:41";
};

int cmd_diagnose(const DiagnoseArgs& a, const Common& c, std::ostream& out) {
    check_format(c.format);
    const Problem problem = load_problem(a.problem, a.problem_dir);
    IndexSet support;
    std::vector<int> signs;
    if (!a.support.empty()) {
        support = parse_one_based(a.support, problem.m(), "support");
        if (a.signs.empty()) {
            if (!problem.truth()) throw InvalidHyperparam("--signs is required when the problem has no truth");
            const Vector g = problem.D() * problem.truth()->beta;
            for (Index j : support) signs.push_back(g(j) >= 0.0 ? 1 : -1);
        }
    } else {
        if (!problem.truth()) throw InvalidHyperparam("give --support (and --signs) or a problem with truth");
        support = problem.truth()->support;
        signs = truth_sign_pattern(problem);
    }
    if (!a.signs.empty()) {
        signs.clear();
        for (double v : parse_list(a.signs, "signs")) signs.push_back(v > 0 ? 1 : -1);
    }

    std::vector<double> grid = parse_grid(a.nu_grid);
    const ConditionReport report = condition_report(problem, support, a.nu, {a.nu}, signs);
    const IrrCurve curve = irr_curve(problem, support, grid, signs);

    const fs::path dir = prepare_out(c.out_dir);
    io::Json rj = io::report_to_json(report);
    io::write_text((dir / "report.json").string(), rj.dump(1) + "\n");
    if (c.format == "csv") {
        std::ostringstream os;
        io::write_irr_curve_csv(os, curve);
        io::write_text((dir / "irr_curve.csv").string(), os.str());
    } else {
        io::write_text((dir / "irr_curve.json").string(), io::irr_curve_to_json(curve).dump(1) + "\n");
    }

    out << "lambda_rsc " << io::format_double(report.lambda_rsc) << (report.rsc_nontrivial ? "" : " (trivial L∩M)")
        << "\nlambda_h(" << io::format_double(a.nu) << ") " << io::format_double(report.lambda_h) << "\nic0 "
        << io::format_double(report.ic0) << "\nic1 " << io::format_double(report.ic1) << "\nr' " << report.r_prime
        << '\n';
    if (!report.irr.empty()) out << "irr(" << io::format_double(a.nu) << ") " << io::format_double(report.irr.begin()->second) << '\n';
    std::size_t singular = 0;
    for (const IrrCurveRow& row : curve.rows) singular += row.irr ? 0 : 1;
    if (singular) out << "warning: " << singular << " grid points with singular Sigma_SS\n";
    if (curve.first_below_one)
        out << "irr < 1 from nu = " << io::format_double(curve.rows[*curve.first_below_one].nu) << '\n';
    else
        out << "irr >= 1 on the whole grid\n";
    return kOk;
}

// -------------------------------------------------------------------- rank

struct RankArgs {
    std::string comparisons;
    Index p = 0;
    double nu = 1.0;
    double kappa = 100.0;
    std::optional<double> t;
    std::optional<std::size_t> k;
    bool auto_stop = false;
    double eta = 0.0;
    double sigma = 0.0;
    double tol = 1e-9;
};

int cmd_rank(const RankArgs& a, const Common& c, std::ostream& out, std::ostream& err) {
    check_format(c.format);
    const auto records = ingest_comparisons_csv(a.comparisons);
    if (records.empty()) {
        err << "warning: " << a.comparisons << " has no comparisons\n";
        throw InvalidRecord("no comparison records");
    }
    Index p = a.p;
    for (const ComparisonRecord& r : records) p = std::max({p, r.i, r.j});

    const auto comps = comparison_components(records, p);
    if (comps.size() > 1) {
        err << "warning: comparison graph has " << comps.size() << " components:";
        for (const IndexSet& comp : comps) {
            err << " {";
            for (std::size_t i = 0; i < comp.size(); ++i) err << (i ? "," : "") << comp[i] + 1;
            err << "}";
        }
        err << '\n';
    }

    PairwiseDesign design = build_pairwise(records, p, true);
    const Problem problem(design.X, design.y, design.D);
    const Hyperparams hyper = resolve(problem, {a.nu, a.kappa, std::nullopt});
    const double alpha = *hyper.alpha;

    const int chosen = (a.t ? 1 : 0) + (a.k ? 1 : 0) + (a.auto_stop ? 1 : 0);
    if (chosen != 1) throw InvalidHyperparam("choose exactly one of --t, --k, --auto-stop");
    std::size_t k = 0;
    if (a.t) {
        if (!(*a.t >= 0.0)) throw InvalidHyperparam("--t must be >= 0");
        k = static_cast<std::size_t>(std::llround(*a.t / alpha));
    } else if (a.k) {
        k = *a.k;
    } else {
        const StoppingRule rule =
            stopping_rule(a.eta, a.sigma, spectral_bounds(problem.X(), problem.D(), {}), problem.n(), problem.m(), alpha);
        k = rule.k_bar;
        out << "auto-stop: tau_bar=" << io::format_double(rule.tau_bar) << " k_bar=" << k << '\n';
    }

    const Path path = run(problem, hyper, k, std::max<std::size_t>(k, 1));
    const PathPoint& at = path.points.back();
    const Vector projected = projection_estimator(problem, at.beta, support_of(at.gamma));
    const Grouping g = extract_groups(projected, a.tol);

    const fs::path dir = prepare_out(c.out_dir);
    if (c.format == "csv") {
        std::ostringstream os;
        os << "item,group,value\n";
        for (std::size_t gi = 0; gi < g.groups.size(); ++gi)
            for (Index v : g.groups[gi]) os << v + 1 << ',' << gi + 1 << ',' << io::format_double(projected(v)) << '\n';
        io::write_text((dir / "groups.csv").string(), os.str());
        std::ostringstream es;
        es << "from,to\n";
        for (const auto& [i, j] : g.edges) es << i + 1 << ',' << j + 1 << '\n';
        io::write_text((dir / "edges.csv").string(), es.str());
    } else {
        io::Json groups = io::Json::array();
        for (std::size_t gi = 0; gi < g.groups.size(); ++gi) {
            io::Json members = io::Json::array();
            for (Index v : g.groups[gi]) members.push_back(v + 1);
            groups.push_back({{"items", members}, {"value", g.values[gi]}});
        }
        io::Json edges = io::Json::array();
        for (const auto& [i, j] : g.edges) edges.push_back({i + 1, j + 1});
        io::Json j = {{"k", at.k}, {"t", at.t}, {"groups", groups}, {"edges", edges}};
        io::write_text((dir / "groups.json").string(), j.dump(1) + "\n");
    }

    out << "k=" << at.k << " t=" << io::format_double(at.t) << " groups=" << g.groups.size() << '\n';
    for (std::size_t gi = 0; gi < g.groups.size(); ++gi) {
        out << "  " << gi + 1 << " [" << fixed(g.values[gi], 4) << "]:";
        for (Index v : g.groups[gi]) out << ' ' << v + 1;
        out << '\n';
    }
    return kOk;
}

// ----------------------------------------------------------------- denoise

struct DenoiseArgs {
    std::vector<std::string> channels;
    double nu = 1.0;
    double kappa = 100.0;
    std::string t = "1";
    bool scale_to_unit_d = false;
};

int cmd_denoise(const DenoiseArgs& a, const Common& c, std::ostream& out) {
    check_format(c.format);
    if (a.channels.empty()) throw InvalidHyperparam("--channels needs at least one CSV file");
    std::vector<Matrix> images;
    for (const std::string& f : a.channels) images.push_back(io::read_matrix_csv(f));
    const Index h = images.front().rows();
    const Index w = images.front().cols();
    for (std::size_t i = 1; i < images.size(); ++i)
        if (images[i].rows() != h || images[i].cols() != w)
            throw InvalidDimension("channel " + std::to_string(i + 1) + " is " + std::to_string(images[i].rows()) + "x" +
                                   std::to_string(images[i].cols()) + ", expected " + std::to_string(h) + "x" +
                                   std::to_string(w));
    const Index ch = static_cast<Index>(images.size());
    const Index pixels = h * w;
    if (pixels * ch < 2) throw InvalidDimension("image needs at least two pixels");

    Vector y(ch * pixels);
    for (Index c2 = 0; c2 < ch; ++c2)
        for (Index r = 0; r < h; ++r)
            for (Index col = 0; col < w; ++col) y(c2 * pixels + r * w + col) = images[static_cast<std::size_t>(c2)](r, col);
    Matrix d = build_grid_gradient(h, w, ch);
    if (a.scale_to_unit_d) d = scale_to_unit(d);
    // X = I with n = |V|: the 1/n of the loss is kept as written.
    const Problem problem(Matrix::Identity(ch * pixels, ch * pixels), y, d);
    const Hyperparams hyper = resolve(problem, {a.nu, a.kappa, std::nullopt});
    const double alpha = *hyper.alpha;

    std::vector<double> times = parse_list(a.t, "t");
    std::sort(times.begin(), times.end());
    for (double t : times)
        if (!(t >= 0.0)) throw InvalidHyperparam("--t values must be >= 0");

    const fs::path dir = prepare_out(c.out_dir);
    const LbiStepper stepper(problem, hyper);
    PathPoint state = initial_point(problem, hyper.nu);
    for (double t : times) {
        const auto k = static_cast<std::size_t>(std::llround(t / alpha));
        while (state.k < k) stepper.advance(state);
        const Vector projected = projection_estimator(problem, state.beta, support_of(state.gamma));
        for (Index c2 = 0; c2 < ch; ++c2) {
            Matrix img(h, w);
            for (Index r = 0; r < h; ++r)
                for (Index col = 0; col < w; ++col) img(r, col) = projected(c2 * pixels + r * w + col);
            const std::string name = "denoise_t" + io::format_double(t) + "_ch" + std::to_string(c2 + 1) + ".csv";
            io::write_matrix_csv((dir / name).string(), img);
        }
        out << "t=" << io::format_double(t) << " k=" << state.k << " active edges=" << support_of(state.gamma).size()
            << '\n';
    }
    return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Split LBI: structural sparsity paths, conditions and simulations", "split_lbi"};
    app.require_subcommand(1);
    Common common;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--out", common.out_dir, "Output directory")->capture_default_str();
        sub->add_option("--format", common.format, "csv or json")->capture_default_str();
        sub->add_option("--threads", common.threads, "Worker threads (default: SPLIT_LBI_THREADS or all)");
    };

    SimulateArgs sim;
    auto* s_sim = app.add_subcommand("simulate", "Seeded AUC simulation over nu (and kappa) values");
    s_sim->add_option("--design", sim.design, "lasso or fused1d")->capture_default_str();
    s_sim->add_option("--nu", sim.nu, "Comma-separated nu values")->capture_default_str();
    s_sim->add_option("--kappa", sim.kappa, "Comma-separated kappa values")->capture_default_str();
    s_sim->add_option("--reps", sim.reps, "Replicates")->capture_default_str();
    s_sim->add_option("--seed", sim.seed, "Master seed")->capture_default_str();
    s_sim->add_option("--n", sim.n, "Observations")->capture_default_str();
    s_sim->add_option("--p", sim.p, "Coefficients")->capture_default_str();
    s_sim->add_option("--sigma", sim.sigma, "Noise scale")->capture_default_str();
    s_sim->add_option("--horizon", sim.horizon, "Time horizon t of each run")->capture_default_str();
    s_sim->add_flag("--full-horizon", sim.full_horizon, "Do not stop once all true coordinates entered");
    s_sim->add_flag("--per-replicate", sim.per_replicate, "Also write replicates.csv");
    add_common(s_sim);

    PathArgs pa;
    auto* s_path = app.add_subcommand("path", "Split LBI or Split ISS path for one problem");
    s_path->add_option("--problem", pa.problem, "Problem JSON");
    s_path->add_option("--problem-dir", pa.problem_dir, "Directory with X.csv, y.csv, D.csv [, truth.csv]");
    s_path->add_option("--solver", pa.solver, "lbi or iss")->capture_default_str();
    s_path->add_option("--nu", pa.nu)->capture_default_str();
    s_path->add_option("--kappa", pa.kappa)->capture_default_str();
    s_path->add_option("--alpha", pa.alpha, "Step size (default from nu, kappa)");
    s_path->add_option("--k-max", pa.k_max, "Iterations (lbi, default 1000)");
    s_path->add_option("--t-max", pa.t_max, "Time horizon (iss default 10)");
    s_path->add_option("--stride", pa.stride, "Record every stride-th iterate (lbi)")->capture_default_str();
    s_path->add_option("--samples", pa.samples, "Sample count on [0, horizon] (iss)")->capture_default_str();
    add_common(s_path);

    DiagnoseArgs da;
    auto* s_diag = app.add_subcommand("diagnose", "Condition report and irr(nu) curve");
    s_diag->add_option("--problem", da.problem, "Problem JSON");
    s_diag->add_option("--problem-dir", da.problem_dir, "Problem CSV directory");
    s_diag->add_option("--support", da.support, "1-based rows of D (default: truth support)");
    s_diag->add_option("--signs", da.signs, "Sign pattern on the support (default: from truth)");
    s_diag->add_option("--nu", da.nu, "nu for lambda_h and the reported irr")->capture_default_str();
    s_diag->add_option("--nu-grid", da.nu_grid, "lo:hi:count (log-spaced) or a comma list")->capture_default_str();
    add_common(s_diag);

    RankArgs ra;
    auto* s_rank = app.add_subcommand("rank", "Partial-order ranking from pairwise comparisons");
    s_rank->add_option("--comparisons", ra.comparisons, "CSV with header i,j,y")->required();
    s_rank->add_option("--p", ra.p, "Number of items (default: largest index)");
    s_rank->add_option("--nu", ra.nu)->capture_default_str();
    s_rank->add_option("--kappa", ra.kappa)->capture_default_str();
    s_rank->add_option("--t", ra.t, "Path time");
    s_rank->add_option("--k", ra.k, "Path iteration");
    s_rank->add_flag("--auto-stop", ra.auto_stop, "Stop at k_bar from --eta and --sigma");
    s_rank->add_option("--eta", ra.eta, "Irrepresentability margin for --auto-stop");
    s_rank->add_option("--sigma", ra.sigma, "Noise scale for --auto-stop");
    s_rank->add_option("--tol", ra.tol, "Grouping tolerance")->capture_default_str();
    add_common(s_rank);

    DenoiseArgs dn;
    auto* s_den = app.add_subcommand("denoise", "Grid-graph TV path snapshots for CSV image channels");
    s_den->add_option("--channels", dn.channels, "One CSV matrix per channel")->required()->delimiter(',');
    s_den->add_option("--nu", dn.nu)->capture_default_str();
    s_den->add_option("--kappa", dn.kappa)->capture_default_str();
    s_den->add_option("--t", dn.t, "Comma-separated snapshot times")->capture_default_str();
    s_den->add_flag("--scale-to-unit", dn.scale_to_unit_d, "Rescale D to unit smallest singular value");
    add_common(s_den);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kConfigError;
    }

    try {
        apply_threads(common.threads);
        if (s_sim->parsed()) return cmd_simulate(sim, common, out);
        if (s_path->parsed()) return cmd_path(pa, common, out);
        if (s_diag->parsed()) return cmd_diagnose(da, common, out);
        if (s_rank->parsed()) return cmd_rank(ra, common, out, err);
        if (s_den->parsed()) return cmd_denoise(dn, common, out);
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << '\n';
        return kConfigError;
    } catch (const NumericError& e) {
        err << "numeric failure: " << e.what() << '\n';
        return kNumericError;
    }
    return kConfigError;
}

}  // namespace slbi::cli
