#include <chrono>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "freedec/driver.hpp"
#include "freedec/io.hpp"
#include "freedec/spectra.hpp"

namespace fs = std::filesystem;
using freedec::NoiseParameter;
using json = nlohmann::ordered_json;

namespace {

struct CommonOpts {
    std::uint64_t seed = 1;
    bool quiet = false;
};

NoiseParameter::Kind parse_model(const std::string& model)
{
    if (model == "additive") return NoiseParameter::Kind::AdditiveSigma;
    if (model == "multiplicative") return NoiseParameter::Kind::MultiplicativeQ;
    throw freedec::invalid_argument("--model must be 'additive' or 'multiplicative'");
}

std::pair<double, double> parse_range(const std::string& text)
{
    const auto comma = text.find(',');
    if (comma == std::string::npos) {
        throw freedec::invalid_argument("--range expects 'lo,hi'");
    }
    try {
        const double lo = std::stod(text.substr(0, comma));
        const double hi = std::stod(text.substr(comma + 1));
        if (!(lo < hi)) throw freedec::invalid_argument("--range needs lo < hi");
        return {lo, hi};
    } catch (const std::logic_error&) {
        throw freedec::invalid_argument("--range expects 'lo,hi' with numeric bounds");
    }
}

json measure_json(const freedec::SparseMeasure& m)
{
    return json{{"atoms", m.atoms}, {"weights", m.weights}};
}

json landscape_json(const freedec::LossLandscape& l)
{
    json grid = json::array();
    json losses = json::array();
    for (std::size_t i = 0; i < l.parameter_grid.size(); ++i) {
        grid.push_back(l.parameter_grid[i]);
        if (std::isfinite(l.loss_values[i])) {
            losses.push_back(l.loss_values[i]);
        } else {
            losses.push_back(nullptr);
        }
    }
    return json{{"parameter_grid", grid}, {"loss_values", losses}};
}

json estimate_json(const freedec::NoiseEstimate& e)
{
    return json{{"estimate", e.estimate},
                {"initial_guess", e.initial_guess},
                {"loss_at_estimate", e.loss_at_estimate},
                {"refine_iterations", e.refine_iterations},
                {"landscape", landscape_json(e.landscape)}};
}

json diagnostics_json(const freedec::RecoveryResult& r)
{
    return json{{"singular_values", r.diagnostics.singular_values},
                {"n_used", r.diagnostics.n_used},
                {"esprit_max_imag", r.diagnostics.esprit_max_imag},
                {"weight_residual", r.weight_residual},
                {"eigen_residual", r.eigen_residual},
                {"operator_norm", r.operator_norm},
                {"rank_kept", r.rank_kept},
                {"truncation_level", r.truncation_level}};
}

json run_config_json(const freedec::RunConfig& cfg, const freedec::PreparedProblem& prob)
{
    return json{
        {"model", cfg.kind == NoiseParameter::Kind::AdditiveSigma ? "additive" : "multiplicative"},
        {"n", cfg.n},
        {"contour",
         json{{"nz", prob.contour.n_z},
              {"margin", prob.contour.margin},
              {"aspect", prob.contour.aspect},
              {"min_semi_axis", prob.contour.min_semi_axis}}},
        {"eigenmatrix",
         json{{"interval", {prob.em.x_lo, prob.em.x_hi}},
              {"nc", prob.em.n_c},
              {"nl", prob.em.n_l},
              {"norm_cap", prob.em.norm_cap},
              {"svd_floor", prob.em.svd_floor}}},
        {"hull", {prob.hull.first, prob.hull.second}},
        {"range", {prob.range.first, prob.range.second}},
        {"grid", cfg.n_grid}};
}

void write_json_file(const fs::path& path, const json& doc)
{
    std::ofstream out(path);
    if (!out) throw freedec::invalid_argument("cannot open output file " + path.string());
    out << doc.dump(2) << '\n';
}

struct SourceOpts {
    std::string spectrum_file;
    std::string oracle_measure_file;
    double oracle_noise = 0.0;
    bool oracle_noise_set = false;
};

void add_source_flags(CLI::App* sub, SourceOpts& src)
{
    sub->add_option("--spectrum", src.spectrum_file, "spectrum file, one eigenvalue per line");
    sub->add_option("--oracle-measure", src.oracle_measure_file,
                    "measure JSON; sample the large-N limit oracle instead of a spectrum");
    sub->add_option("--oracle-noise", src.oracle_noise, "noise level used by the oracle source")
        ->check([&src](const std::string&) {
            src.oracle_noise_set = true;
            return std::string{};
        });
}

struct SolverOpts {
    int nz = 64;
    double margin = 0.0;
    double aspect = 0.0;
    double min_axis = 1.0;
    int nc = 0;
    int nl = 0;
    double norm_cap = 10.0;
    double svd_floor = 1e-12;
};

void add_solver_flags(CLI::App* sub, SolverOpts& s)
{
    sub->add_option("--nz", s.nz, "contour sample count (even)")->capture_default_str();
    sub->add_option("--margin", s.margin, "relative contour enlargement (0 = model default)");
    sub->add_option("--aspect", s.aspect, "ellipse aspect ratio (0 = model default)");
    sub->add_option("--min-axis", s.min_axis, "minimum horizontal semi-axis")
        ->capture_default_str();
    sub->add_option("--nc", s.nc, "Chebyshev grid size (0 = auto)")->capture_default_str();
    sub->add_option("--nl", s.nl, "Krylov depth (0 = auto)")->capture_default_str();
    sub->add_option("--norm-cap", s.norm_cap, "bound on the eigenmatrix norm")
        ->capture_default_str();
    sub->add_option("--svd-floor", s.svd_floor, "relative SVD cutoff floor")
        ->capture_default_str();
}

freedec::RunConfig make_run_config(NoiseParameter::Kind kind, int n, const SolverOpts& s,
                                   const std::optional<std::pair<double, double>>& range,
                                   int grid)
{
    freedec::RunConfig cfg;
    cfg.kind = kind;
    cfg.n = n;
    cfg.contour.n_z = s.nz;
    cfg.contour.margin = s.margin;
    cfg.contour.aspect = s.aspect;
    cfg.contour.min_semi_axis = s.min_axis;
    cfg.n_c = s.nc;
    cfg.n_l = s.nl;
    cfg.norm_cap = s.norm_cap;
    cfg.svd_floor = s.svd_floor;
    if (range) cfg.noise_range = *range;
    cfg.n_grid = grid;
    return cfg;
}

struct PreparedSource {
    freedec::PreparedProblem problem;
    json source_echo;
    std::vector<std::string> argv_source;
};

PreparedSource prepare_source(const SourceOpts& src, NoiseParameter::Kind kind,
                              const freedec::RunConfig& cfg)
{
    const bool have_spectrum = !src.spectrum_file.empty();
    const bool have_oracle = !src.oracle_measure_file.empty();
    if (have_spectrum == have_oracle) {
        throw freedec::invalid_argument(
            "exactly one input source required: --spectrum or --oracle-measure");
    }
    PreparedSource out;
    if (have_spectrum) {
        const freedec::Spectrum spectrum = freedec::read_spectrum_file(src.spectrum_file);
        out.problem = freedec::prepare_from_spectrum(spectrum, cfg);
        out.source_echo = json{{"spectrum_file", src.spectrum_file}};
        out.argv_source = {"--spectrum", src.spectrum_file};
    } else {
        if (!src.oracle_noise_set) {
            throw freedec::invalid_argument("--oracle-measure requires --oracle-noise");
        }
        const freedec::SparseMeasure measure =
            freedec::read_measure_file(src.oracle_measure_file);
        const NoiseParameter noise{kind, src.oracle_noise};
        out.problem = freedec::prepare_from_oracle(measure, noise, cfg);
        out.source_echo = json{{"oracle_measure_file", src.oracle_measure_file},
                               {"oracle_noise", src.oracle_noise}};
        out.argv_source = {"--oracle-measure", src.oracle_measure_file, "--oracle-noise",
                           freedec::format_double(src.oracle_noise)};
    }
    return out;
}

std::vector<std::string> solver_argv(const SolverOpts& s, const freedec::PreparedProblem& p)
{
    using freedec::format_double;
    return {"--nz",        std::to_string(s.nz),
            "--margin",    format_double(p.contour.margin),
            "--aspect",    format_double(p.contour.aspect),
            "--min-axis",  format_double(s.min_axis),
            "--nc",        std::to_string(p.em.n_c),
            "--nl",        std::to_string(p.em.n_l),
            "--norm-cap",  format_double(s.norm_cap),
            "--svd-floor", format_double(s.svd_floor)};
}

struct ExampleSpec {
    NoiseParameter::Kind kind;
    double noise;
    freedec::SparseMeasure measure;
    int n;
    int N;
};

ExampleSpec paper_example(const std::string& id)
{
    const freedec::SparseMeasure additive{{-1.0, 0.2, 1.0}, {0.25, 0.5, 0.25}};
    const freedec::SparseMeasure multiplicative{{0.2, 0.6, 1.0},
                                                {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0}};
    if (id == "a1") return {NoiseParameter::Kind::AdditiveSigma, 0.25, additive, 3, 1024};
    if (id == "a2") return {NoiseParameter::Kind::AdditiveSigma, 0.75, additive, 3, 1024};
    if (id == "a3") return {NoiseParameter::Kind::AdditiveSigma, 1.25, additive, 3, 1024};
    if (id == "m1") return {NoiseParameter::Kind::MultiplicativeQ, 0.25, multiplicative, 3, 1024};
    if (id == "m2") return {NoiseParameter::Kind::MultiplicativeQ, 0.5, multiplicative, 3, 1024};
    if (id == "m3") return {NoiseParameter::Kind::MultiplicativeQ, 0.75, multiplicative, 3, 1024};
    throw freedec::invalid_argument("unknown example id '" + id +
                                    "' (expected a1|a2|a3|m1|m2|m3)");
}

int run_simulate(const CommonOpts& common, const std::string& model,
                 const std::string& measure_file, int N, double noise, bool rotate,
                 const std::string& out)
{
    const NoiseParameter::Kind kind = parse_model(model);
    freedec::SimulationConfig cfg;
    cfg.N = N;
    cfg.seed = common.seed;
    cfg.measure = freedec::read_measure_file(measure_file);
    cfg.rotate = rotate;
    freedec::Spectrum spectrum;
    if (kind == NoiseParameter::Kind::AdditiveSigma) {
        spectrum = freedec::sample_additive_model(cfg, noise);
        if (!common.quiet) {
            std::cout << "model=additive N=" << N << " sigma=" << noise
                      << " seed=" << common.seed << "\n";
        }
    } else {
        spectrum = freedec::sample_multiplicative_model(cfg, noise);
        if (!common.quiet) {
            std::cout << "model=multiplicative N=" << N << " q=" << noise
                      << " realized_q=" << freedec::realized_ratio(N, noise)
                      << " T=" << freedec::wishart_sample_count(N, noise)
                      << " seed=" << common.seed << "\n";
        }
    }
    freedec::write_spectrum_file(out, spectrum);
    if (!common.quiet) std::cout << "wrote " << out << "\n";
    return 0;
}

int run_recover(const CommonOpts& common, const std::string& model, const SourceOpts& src,
                int n, std::optional<double> noise, bool estimate,
                const std::string& range_text, int grid, const SolverOpts& solver,
                const std::string& out)
{
    const auto t0 = std::chrono::steady_clock::now();
    if (noise.has_value() == estimate) {
        throw freedec::invalid_argument("exactly one of --noise or --estimate is required");
    }
    const NoiseParameter::Kind kind = parse_model(model);
    std::optional<std::pair<double, double>> range;
    if (!range_text.empty()) range = parse_range(range_text);

    const freedec::RunConfig cfg = make_run_config(kind, n, solver, range, grid);
    const PreparedSource source = prepare_source(src, kind, cfg);

    const freedec::PipelineResult result =
        estimate ? freedec::run_estimated(source.problem, cfg)
                 : freedec::run_known_noise(source.problem, *noise, cfg);

    std::vector<std::string> argv_echo = {"recover", "--model", model};
    argv_echo.insert(argv_echo.end(), source.argv_source.begin(), source.argv_source.end());
    argv_echo.insert(argv_echo.end(), {"--n", std::to_string(n)});
    if (estimate) {
        argv_echo.insert(argv_echo.end(),
                         {"--estimate", "--range",
                          freedec::format_double(source.problem.range.first) + "," +
                              freedec::format_double(source.problem.range.second),
                          "--grid", std::to_string(grid)});
    } else {
        argv_echo.insert(argv_echo.end(), {"--noise", freedec::format_double(*noise)});
    }
    const auto sargv = solver_argv(solver, source.problem);
    argv_echo.insert(argv_echo.end(), sargv.begin(), sargv.end());
    argv_echo.insert(argv_echo.end(), {"--out", out});

    json report;
    report["tool"] = "freedec";
    report["command"] = "recover";
    report["argv_echo"] = argv_echo;
    json config = run_config_json(cfg, source.problem);
    config.update(source.source_echo);
    if (!estimate) config["noise_value"] = *noise;
    config["noise_mode"] = estimate ? "estimate" : "known";
    report["config"] = config;
    if (result.estimate) report["noise_estimate"] = estimate_json(*result.estimate);
    report["noise_used"] = result.noise_used;
    report["recovered_measure"] = measure_json(result.recovery.measure);
    report["diagnostics"] = diagnostics_json(result.recovery);
    write_json_file(out, report);

    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!common.quiet) {
        std::cout << "noise_used=" << result.noise_used << "\n";
        std::cout << "atoms =";
        for (double a : result.recovery.measure.atoms) std::cout << ' ' << a;
        std::cout << "\nweights =";
        for (double w : result.recovery.measure.weights) std::cout << ' ' << w;
        std::cout << "\nwrote " << out << "\nwall_time_seconds: " << wall << "\n";
    }
    return 0;
}

int run_landscape(const CommonOpts& common, const std::string& model, const SourceOpts& src,
                  int n, const std::string& range_text, int grid, const SolverOpts& solver,
                  const std::string& out)
{
    const NoiseParameter::Kind kind = parse_model(model);
    std::optional<std::pair<double, double>> range;
    if (!range_text.empty()) range = parse_range(range_text);
    const freedec::RunConfig cfg = make_run_config(kind, n, solver, range, grid);
    const PreparedSource source = prepare_source(src, kind, cfg);

    const freedec::LossFn fn = [&](double theta) {
        return freedec::noise_loss(theta, kind, source.problem.base, n, source.problem.em);
    };
    const freedec::GridResult result = freedec::grid_search(fn, source.problem.range, grid);
    freedec::write_landscape_csv(out, result.landscape);
    if (!common.quiet) {
        std::cout << "grid_argmin=" << result.best << "\nwrote " << out << "\n";
    }
    return 0;
}

int run_reproduce(const CommonOpts& common, const std::string& id, const std::string& out_dir)
{
    const auto t0 = std::chrono::steady_clock::now();
    const ExampleSpec ex = paper_example(id);
    const fs::path dir = out_dir.empty() ? fs::path("reproduce_" + id) : fs::path(out_dir);
    fs::create_directories(dir);

    freedec::SimulationConfig sim;
    sim.N = ex.N;
    sim.seed = common.seed;
    sim.measure = ex.measure;
    const bool additive = ex.kind == NoiseParameter::Kind::AdditiveSigma;
    const freedec::Spectrum spectrum =
        additive ? freedec::sample_additive_model(sim, ex.noise)
                 : freedec::sample_multiplicative_model(sim, ex.noise);
    freedec::write_spectrum_file(dir / "spectrum.txt", spectrum);
    freedec::write_histogram_csv(dir / "histogram.csv",
                                 freedec::freedman_diaconis_histogram(spectrum));

    const SolverOpts solver;
    const freedec::RunConfig cfg = make_run_config(ex.kind, ex.n, solver, std::nullopt, 30);
    const freedec::PreparedProblem problem = freedec::prepare_from_spectrum(spectrum, cfg);
    const freedec::PipelineResult result = freedec::run_estimated(problem, cfg);
    freedec::write_landscape_csv(dir / "landscape.csv", result.estimate->landscape);

    const double truth =
        additive ? ex.noise : freedec::realized_ratio(ex.N, ex.noise);

    json report;
    report["tool"] = "freedec";
    report["command"] = "reproduce";
    report["argv_echo"] = std::vector<std::string>{
        "reproduce", id, "--seed", std::to_string(common.seed), "--out-dir", dir.string()};
    json config = run_config_json(cfg, problem);
    config["example"] = id;
    config["N"] = ex.N;
    config["seed"] = common.seed;
    config["true_noise"] = ex.noise;
    config["realized_noise"] = truth;
    config["true_measure"] = measure_json(ex.measure);
    report["config"] = config;
    report["noise_estimate"] = estimate_json(*result.estimate);
    report["noise_used"] = result.noise_used;
    report["recovered_measure"] = measure_json(result.recovery.measure);
    report["diagnostics"] = diagnostics_json(result.recovery);
    write_json_file(dir / "report.json", report);

    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!common.quiet) {
        std::cout << "example=" << id << " estimate=" << result.noise_used
                  << " truth=" << truth << "\n";
        std::cout << "atoms =";
        for (double a : result.recovery.measure.atoms) std::cout << ' ' << a;
        std::cout << "\nwrote " << (dir / "report.json").string()
                  << "\nwall_time_seconds: " << wall << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Sparse spectral measure recovery under unknown noise level"};
    app.require_subcommand(1);

    CommonOpts common;
    app.add_option("--seed", common.seed, "simulation seed")->capture_default_str();
    app.add_flag("--quiet", common.quiet, "suppress progress output");

    // simulate
    auto* sim = app.add_subcommand("simulate", "draw a finite-N deformed model spectrum");
    sim->fallthrough();
    std::string sim_model, sim_measure, sim_out = "spectrum.txt";
    int sim_n = 0;
    double sim_noise = 0.0;
    bool sim_rotate = false;
    sim->add_option("--model", sim_model, "additive | multiplicative")->required();
    sim->add_option("--measure", sim_measure, "signal measure JSON")->required();
    sim->add_option("--N", sim_n, "matrix dimension")->required();
    sim->add_option("--noise", sim_noise, "sigma (additive) or q (multiplicative)")->required();
    sim->add_flag("--rotate", sim_rotate, "conjugate the signal by a random rotation");
    sim->add_option("--out", sim_out, "output spectrum file")->capture_default_str();

    // recover
    auto* rec = app.add_subcommand("recover", "deconvolve and recover the sparse measure");
    rec->fallthrough();
    std::string rec_model, rec_range, rec_out = "report.json";
    SourceOpts rec_src;
    SolverOpts rec_solver;
    int rec_n = 0, rec_grid = 30;
    double rec_noise = 0.0;
    bool rec_estimate = false, rec_noise_set = false;
    rec->add_option("--model", rec_model, "additive | multiplicative")->required();
    add_source_flags(rec, rec_src);
    rec->add_option("--n", rec_n, "number of atoms to recover")->required();
    rec->add_option("--noise", rec_noise, "known noise level")
        ->check([&rec_noise_set](const std::string&) {
            rec_noise_set = true;
            return std::string{};
        });
    rec->add_flag("--estimate", rec_estimate, "estimate the noise level first");
    rec->add_option("--range", rec_range, "search range 'lo,hi' (default: automatic)");
    rec->add_option("--grid", rec_grid, "grid size for the coarse search")
        ->capture_default_str();
    add_solver_flags(rec, rec_solver);
    rec->add_option("--out", rec_out, "output report JSON")->capture_default_str();

    // landscape
    auto* land = app.add_subcommand("landscape", "emit the log singular value landscape");
    land->fallthrough();
    std::string land_model, land_range, land_out = "landscape.csv";
    SourceOpts land_src;
    SolverOpts land_solver;
    int land_n = 0, land_grid = 30;
    land->add_option("--model", land_model, "additive | multiplicative")->required();
    add_source_flags(land, land_src);
    land->add_option("--n", land_n, "number of atoms assumed")->required();
    land->add_option("--range", land_range, "grid range 'lo,hi' (default: automatic)");
    land->add_option("--grid", land_grid, "grid size")->capture_default_str();
    add_solver_flags(land, land_solver);
    land->add_option("--out", land_out, "output CSV")->capture_default_str();

    // reproduce
    auto* rep = app.add_subcommand("reproduce", "rerun a built-in example end to end");
    rep->fallthrough();
    std::string rep_id, rep_dir;
    rep->add_option("example", rep_id, "a1|a2|a3|m1|m2|m3")->required();
    rep->add_option("--out-dir", rep_dir, "output directory (default reproduce_<id>)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (sim->parsed()) {
            return run_simulate(common, sim_model, sim_measure, sim_n, sim_noise, sim_rotate,
                                sim_out);
        }
        if (rec->parsed()) {
            return run_recover(common, rec_model, rec_src, rec_n,
                               rec_noise_set ? std::optional<double>(rec_noise) : std::nullopt,
                               rec_estimate, rec_range, rec_grid, rec_solver, rec_out);
        }
        if (land->parsed()) {
            return run_landscape(common, land_model, land_src, land_n, land_range, land_grid,
                                 land_solver, land_out);
        }
        if (rep->parsed()) {
            return run_reproduce(common, rep_id, rep_dir);
        }
    } catch (const freedec::numerical_error& e) {
        std::cerr << "numerical failure in " << e.what() << "\n";
        return 3;
    } catch (const freedec::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
