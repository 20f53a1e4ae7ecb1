// Command-line front end: sampling, online quantization, the traffic
// pipeline, summary comparison and Frechet means, all seeded and emitting
// artifacts that embed their full configuration.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rquant/errors.hpp"
#include "rquant/io.hpp"
#include "rquant/manifold.hpp"
#include "rquant/quantization.hpp"
#include "rquant/sampling.hpp"
#include "rquant/synthetic.hpp"
#include "rquant/traffic.hpp"
#include "rquant/transport.hpp"
#include "rquant/version.hpp"

namespace {

using rquant::io::ConfigEcho;

struct ScheduleOpt {
    double gamma0 = 0.9;
    double b = 50.0;
};

void add_schedule_option(CLI::App* cmd, ScheduleOpt& s) {
    cmd->add_option_function<std::string>(
           "--schedule",
           [&s](const std::string& text) {
               const std::size_t comma = text.find(',');
               if (comma == std::string::npos) {
                   throw CLI::ValidationError(
                       "--schedule expects gamma0,b (e.g. 0.9,50)");
               }
               try {
                   s.gamma0 = std::stod(text.substr(0, comma));
                   s.b = std::stod(text.substr(comma + 1));
               } catch (const std::exception&) {
                   throw CLI::ValidationError(
                       "--schedule expects gamma0,b (e.g. 0.9,50)");
               }
           },
           "Step schedule gamma0,b for gamma_k = gamma0*b/(b+k)")
        ->default_str("0.9,50");
}

std::pair<double, double> parse_pair(const std::string& text, const char* what) {
    const std::size_t comma = text.find(',');
    if (comma == std::string::npos) {
        throw rquant::UsageError(std::string(what) + " expects two comma-separated values");
    }
    try {
        return {std::stod(text.substr(0, comma)), std::stod(text.substr(comma + 1))};
    } catch (const std::exception&) {
        throw rquant::UsageError(std::string(what) + " expects two numbers");
    }
}

ConfigEcho base_echo(const std::string& subcommand, std::uint64_t seed) {
    ConfigEcho echo;
    echo.emplace_back("tool", rquant::kToolName);
    echo.emplace_back("version", rquant::kVersion);
    echo.emplace_back("subcommand", subcommand);
    echo.emplace_back("seed", std::to_string(seed));
    echo.emplace_back("rng", std::string(rquant::Rng::kAlgorithm));
    return echo;
}

nlohmann::json report_header(const ConfigEcho& echo) {
    nlohmann::json j;
    j["tool"] = rquant::kToolName;
    j["version"] = rquant::kVersion;
    j["config"] = rquant::io::config_to_json(echo);
    return j;
}

// ---------------------------------------------------------------- sample --

struct SampleArgs {
    std::string manifold = "circle";
    std::string dist = "uniform";
    std::size_t count = 100;
    double kappa = 5.0;
    double sigma = 0.5;
    std::vector<double> center;
    std::uint64_t seed = 0;
    std::string out;
};

int run_sample(const SampleArgs& a) {
    rquant::Rng rng(a.seed);
    std::vector<rquant::ManifoldPoint> points;
    if (a.dist == "uniform") {
        points = rquant::sample_uniform(rquant::ManifoldId::from_tag(a.manifold, 0),
                                        a.count, rng);
    } else if (a.dist == "von-mises") {
        if (a.manifold != "circle") {
            throw rquant::UsageError("--dist von-mises requires --manifold circle");
        }
        const double center = a.center.empty() ? 0.0 : a.center.at(0);
        points = rquant::sample_von_mises(center, a.kappa, a.count, rng);
    } else if (a.dist == "vmf") {
        if (a.manifold != "sphere2") {
            throw rquant::UsageError("--dist vmf requires --manifold sphere2");
        }
        Eigen::Vector3d center(0.0, 0.0, 1.0);
        if (!a.center.empty()) {
            if (a.center.size() != 3) {
                throw rquant::UsageError("--center for sphere2 needs 3 components");
            }
            center << a.center[0], a.center[1], a.center[2];
        }
        points = rquant::sample_vmf_sphere(center, a.kappa, a.count, rng);
    } else if (a.dist == "gaussian") {
        if (a.manifold != "hyperbolic2" && a.manifold != "h2") {
            throw rquant::UsageError("--dist gaussian requires --manifold hyperbolic2");
        }
        Eigen::Vector2d center(0.0, 1.0);
        if (!a.center.empty()) {
            if (a.center.size() != 2) {
                throw rquant::UsageError("--center for hyperbolic2 needs 2 components");
            }
            center << a.center[0], a.center[1];
        }
        points = rquant::sample_gaussian_h2(center, a.sigma, a.count, rng);
    } else {
        throw rquant::UsageError("unknown distribution '" + a.dist +
                                 "' (uniform, von-mises, vmf, gaussian)");
    }

    ConfigEcho echo = base_echo("sample", a.seed);
    echo.emplace_back("manifold", a.manifold);
    echo.emplace_back("dist", a.dist);
    echo.emplace_back("count", std::to_string(a.count));
    if (a.dist == "von-mises" || a.dist == "vmf") {
        echo.emplace_back("kappa", rquant::io::format_double(a.kappa));
    }
    if (a.dist == "gaussian") {
        echo.emplace_back("sigma", rquant::io::format_double(a.sigma));
    }
    if (!a.center.empty()) {
        std::string c;
        for (double x : a.center) {
            c += (c.empty() ? "" : ",") + rquant::io::format_double(x);
        }
        echo.emplace_back("center", c);
    }
    rquant::io::atomic_write(a.out, rquant::io::points_to_csv(points, echo));
    return 0;
}

// -------------------------------------------------------------- quantize --

struct QuantizeArgs {
    std::string in;
    std::string out;
    std::string trace_csv;
    std::size_t n = 0;
    ScheduleOpt schedule;
    std::uint64_t repeat_m = 1;
    std::uint64_t epochs = 1;
    std::string init = "prefix";
    std::uint64_t checkpoint_every = 0;
    bool trace_w1 = false;
    double p = 2.0;
    std::uint64_t seed = 0;
};

int run_quantize(const QuantizeArgs& a) {
    if (a.n < 1) {
        throw rquant::UsageError("--n must be >= 1");
    }
    const std::vector<rquant::ManifoldPoint> data =
        rquant::io::read_points_file(a.in);

    rquant::ClrqOptions opt;
    opt.n = a.n;
    opt.schedule = {a.schedule.gamma0, a.schedule.b};
    opt.repeat_m = a.repeat_m;
    opt.epochs = a.epochs;
    opt.checkpoint_every = a.checkpoint_every;
    opt.trace_w1 = a.trace_w1;
    opt.distortion_p = a.p;
    if (a.init == "prefix") {
        opt.init = rquant::InitPolicy::prefix_distinct;
    } else if (a.init == "spread") {
        opt.init = rquant::InitPolicy::spread;
    } else {
        throw rquant::UsageError("--init must be prefix or spread");
    }

    rquant::Rng rng(a.seed);
    const rquant::RunReport report = rquant::clrq_run(data, opt, rng);

    ConfigEcho echo = base_echo("quantize", a.seed);
    echo.emplace_back("input", a.in);
    echo.emplace_back("manifold", data[0].manifold.tag());
    echo.emplace_back("n", std::to_string(a.n));
    echo.emplace_back("schedule_gamma0", rquant::io::format_double(a.schedule.gamma0));
    echo.emplace_back("schedule_b", rquant::io::format_double(a.schedule.b));
    echo.emplace_back("repeat_m", std::to_string(a.repeat_m));
    echo.emplace_back("epochs", std::to_string(a.epochs));
    echo.emplace_back("init", report.init_policy);
    echo.emplace_back("p", rquant::io::format_double(a.p));
    if (a.trace_w1) {
        echo.emplace_back("trace_w1", "true");
    }

    nlohmann::json j = report_header(echo);
    j["seed"] = report.seed;
    j["rng"] = report.rng_algorithm;
    j["n"] = report.n;
    j["schedule"] = {{"gamma0", report.schedule.gamma0}, {"b", report.schedule.b}};
    j["repeat_m"] = report.repeat_m;
    j["epochs"] = report.epochs;
    j["init"] = report.init_policy;
    j["steps_taken"] = report.steps_taken;
    j["cut_locus_skips"] = report.cut_locus_skips;
    j["checkpoints"] = nlohmann::json::array();
    for (const rquant::Checkpoint& cp : report.checkpoints) {
        nlohmann::json c;
        c["k"] = cp.k;
        c["distortion"] = cp.distortion;
        if (cp.w1_trace) {
            c["w1"] = *cp.w1_trace;
        }
        j["checkpoints"].push_back(c);
    }
    j["final_codebook"] = nlohmann::json::array();
    for (const rquant::ManifoldPoint& c : report.final_codebook.centers) {
        j["final_codebook"].push_back(rquant::io::point_to_json(c));
    }
    j["measure"] = rquant::io::measure_to_json(report.measure);
    rquant::io::atomic_write(a.out, j.dump(2) + "\n");

    if (!a.trace_csv.empty()) {
        std::string csv;
        for (const auto& [key, value] : echo) {
            csv += "# " + key + "=" + value + "\n";
        }
        csv += a.trace_w1 ? "k,distortion,w1\n" : "k,distortion\n";
        for (const rquant::Checkpoint& cp : report.checkpoints) {
            csv += std::to_string(cp.k) + "," +
                   rquant::io::format_double(cp.distortion);
            if (a.trace_w1) {
                csv += "," + rquant::io::format_double(cp.w1_trace.value_or(0.0));
            }
            csv += "\n";
        }
        rquant::io::atomic_write(a.trace_csv, csv);
    }
    return 0;
}

// --------------------------------------------------------------- traffic --

struct TrafficArgs {
    std::string in;
    std::string scenario;
    std::size_t scenario_count = 3000;
    std::string out;
    std::string labels;
    std::string svg;
    std::string ref;
    std::string window;
    std::size_t n = 3;
    double bandwidth = 0.0; // 0: default r/3
    double radius = 0.0;    // mandatory
    double ridge = 1e-8;
    ScheduleOpt schedule;
    std::uint64_t repeat_m = 1;
    std::uint64_t epochs = 1;
    std::uint64_t seed = 0;
};

int run_traffic(const TrafficArgs& a) {
    if (!(a.radius > 0.0)) {
        throw rquant::UsageError("--radius is mandatory and must be positive");
    }
    rquant::Rng rng(a.seed);

    std::vector<rquant::TrafficSample> samples;
    std::vector<std::string> diagnostics;
    if (!a.scenario.empty()) {
        rquant::Rng gen = rng.split(0x7363656eULL); // "scen"
        samples = rquant::synthetic_scenario(
            rquant::scenario_from_name(a.scenario), a.scenario_count, gen);
    } else if (!a.in.empty()) {
        rquant::IngestOptions iopt;
        if (!a.ref.empty()) {
            iopt.ref = parse_pair(a.ref, "--ref");
        }
        if (!a.window.empty()) {
            iopt.window = parse_pair(a.window, "--window");
        }
        samples = rquant::ingest_traffic_csv(a.in, iopt, &diagnostics);
    } else {
        throw rquant::UsageError("traffic needs --in FILE or --scenario NAME");
    }
    for (const std::string& d : diagnostics) {
        std::cerr << "W: " << d << "\n";
    }

    rquant::AtmOptions opt;
    opt.n = a.n;
    opt.kernel.r = a.radius;
    opt.kernel.h = a.bandwidth > 0.0 ? a.bandwidth : a.radius / 3.0;
    opt.ridge = a.ridge;
    opt.schedule = {a.schedule.gamma0, a.schedule.b};
    opt.repeat_m = a.repeat_m;
    opt.epochs = a.epochs;
    std::string warning;
    rquant::check_kernel(opt.kernel, &warning);
    if (!warning.empty()) {
        std::cerr << "W: " << warning << "\n";
    }

    rquant::Rng qrng = rng.split(0x7175616eULL); // "quan"
    const rquant::TrafficSummary summary = rquant::atm_quantize(samples, opt, qrng);

    ConfigEcho echo = base_echo("traffic", a.seed);
    if (!a.scenario.empty()) {
        echo.emplace_back("scenario", a.scenario);
        echo.emplace_back("scenario_count", std::to_string(a.scenario_count));
    } else {
        echo.emplace_back("input", a.in);
    }
    if (!a.ref.empty()) {
        echo.emplace_back("ref", a.ref);
    }
    if (!a.window.empty()) {
        echo.emplace_back("window", a.window);
    }
    echo.emplace_back("n", std::to_string(a.n));
    echo.emplace_back("bandwidth", rquant::io::format_double(opt.kernel.h));
    echo.emplace_back("radius", rquant::io::format_double(opt.kernel.r));
    echo.emplace_back("ridge", rquant::io::format_double(opt.ridge));
    echo.emplace_back("schedule_gamma0", rquant::io::format_double(a.schedule.gamma0));
    echo.emplace_back("schedule_b", rquant::io::format_double(a.schedule.b));
    echo.emplace_back("repeat_m", std::to_string(a.repeat_m));
    echo.emplace_back("epochs", std::to_string(a.epochs));
    echo.emplace_back("standardization", summary.standardization.convention);

    nlohmann::json j = report_header(echo);
    j["seed"] = a.seed;
    j["rng"] = std::string(rquant::Rng::kAlgorithm);
    j["n"] = summary.measure.codebook.size();
    j["sample_count"] = samples.size();
    j["measure"] = rquant::io::measure_to_json(summary.measure);
    j["loewner_order"] = summary.loewner_order;
    j["standardization"] = {
        {"convention", summary.standardization.convention},
        {"mean", {summary.standardization.mean[0], summary.standardization.mean[1]}},
        {"stddev",
         {summary.standardization.stddev[0], summary.standardization.stddev[1]}},
        {"degenerate_x", summary.standardization.degenerate_x},
        {"degenerate_y", summary.standardization.degenerate_y}};
    j["empty_kernel_skips"] = summary.empty_kernel_skips;
    j["cut_locus_skips"] = summary.cut_locus_skips;
    rquant::io::atomic_write(a.out, j.dump(2) + "\n");

    std::string labels_path = a.labels;
    if (labels_path.empty()) {
        std::filesystem::path p(a.out);
        p.replace_extension();
        labels_path = p.string() + "_labels.csv";
    }
    rquant::io::atomic_write(labels_path,
                             rquant::io::labels_to_csv(samples, summary.labels, echo));
    if (!a.svg.empty()) {
        rquant::io::atomic_write(
            a.svg, rquant::io::labels_to_svg(samples, summary.labels, a.n));
    }
    return 0;
}

// --------------------------------------------------------------- compare --

struct CompareArgs {
    std::vector<std::string> files;
    double p = 1.0;
    std::string out;
    std::string plan_out;
    std::uint64_t seed = 0;
};

int run_compare(const CompareArgs& a) {
    if (a.files.size() < 2) {
        throw rquant::UsageError("compare needs at least 2 summary files");
    }
    std::vector<rquant::QuantizedMeasure> measures;
    for (const std::string& f : a.files) {
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(rquant::io::read_file(f));
        } catch (const nlohmann::json::exception& e) {
            throw rquant::DataError("cannot parse '" + f + "': " + e.what());
        }
        if (!j.contains("measure")) {
            throw rquant::DataError("'" + f + "' holds no measure object");
        }
        try {
            measures.push_back(rquant::io::measure_from_json(j.at("measure")));
        } catch (const nlohmann::json::exception& e) {
            throw rquant::DataError("bad measure in '" + f + "': " + e.what());
        }
    }

    const Eigen::MatrixXd d = rquant::compare_summaries(measures, a.p);

    ConfigEcho echo = base_echo("compare", a.seed);
    echo.emplace_back("p", rquant::io::format_double(a.p));
    echo.emplace_back("ground_metric", measures[0].codebook.manifold.tag());
    for (std::size_t i = 0; i < a.files.size(); ++i) {
        echo.emplace_back("summary" + std::to_string(i), a.files[i]);
    }

    // Distance matrix CSV: first column and header row carry the summary
    // names, the body is the symmetric cost matrix.
    std::string csv;
    for (const auto& [key, value] : echo) {
        csv += "# " + key + "=" + value + "\n";
    }
    csv += "summary";
    for (const std::string& f : a.files) {
        csv += "," + std::filesystem::path(f).filename().string();
    }
    csv += "\n";
    for (Eigen::Index i = 0; i < d.rows(); ++i) {
        csv += std::filesystem::path(a.files[static_cast<std::size_t>(i)])
                   .filename()
                   .string();
        for (Eigen::Index jcol = 0; jcol < d.cols(); ++jcol) {
            csv += "," + rquant::io::format_double(d(i, jcol));
        }
        csv += "\n";
    }
    rquant::io::atomic_write(a.out, csv);

    if (!a.plan_out.empty()) {
        nlohmann::json j = report_header(echo);
        j["p"] = a.p;
        j["ground_metric"] = measures[0].codebook.manifold.tag();
        j["pairs"] = nlohmann::json::array();
        for (std::size_t i = 0; i < measures.size(); ++i) {
            for (std::size_t k = i + 1; k < measures.size(); ++k) {
                const rquant::TransportPlan plan =
                    rquant::discrete_wasserstein(measures[i], measures[k], a.p);
                nlohmann::json pj;
                pj["source"] = a.files[i];
                pj["target"] = a.files[k];
                pj["cost"] = plan.cost;
                pj["plan"] = nlohmann::json::array();
                for (Eigen::Index row = 0; row < plan.flows.rows(); ++row) {
                    nlohmann::json r = nlohmann::json::array();
                    for (Eigen::Index colj = 0; colj < plan.flows.cols(); ++colj) {
                        r.push_back(plan.flows(row, colj));
                    }
                    pj["plan"].push_back(r);
                }
                j["pairs"].push_back(pj);
            }
        }
        rquant::io::atomic_write(a.plan_out, j.dump(2) + "\n");
    }
    return 0;
}

// ------------------------------------------------------------------ mean --

struct MeanArgs {
    std::string in;
    std::string out;
    double tol = 1e-9;
    int max_iter = 200;
    std::uint64_t seed = 0;
};

int run_mean(const MeanArgs& a) {
    const std::vector<rquant::ManifoldPoint> data =
        rquant::io::read_points_file(a.in);
    const rquant::KarcherResult res = rquant::karcher_mean(data, a.tol, a.max_iter);

    ConfigEcho echo = base_echo("mean", a.seed);
    echo.emplace_back("input", a.in);
    echo.emplace_back("tol", rquant::io::format_double(a.tol));
    echo.emplace_back("max_iter", std::to_string(a.max_iter));

    nlohmann::json j = report_header(echo);
    j["mean"] = rquant::io::point_to_json(res.mean);
    j["converged"] = res.converged;
    j["iterations"] = res.iterations;
    j["grad_norm"] = res.grad_norm;
    rquant::io::atomic_write(a.out, j.dump(2) + "\n");
    if (!res.converged) {
        std::cerr << "W: Karcher flow stopped at max_iter with gradient norm "
                  << res.grad_norm << "\n";
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Online quantization on Riemannian manifolds"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(rquant::kToolName) + " " +
                                          rquant::kVersion);

    SampleArgs sa;
    CLI::App* sample = app.add_subcommand("sample", "Draw points from a distribution");
    sample->add_option("--manifold", sa.manifold,
                       "circle, sphere2 or hyperbolic2")
        ->default_str("circle");
    sample->add_option("--dist", sa.dist, "uniform, von-mises, vmf or gaussian")
        ->default_str("uniform");
    sample->add_option("--n", sa.count, "Number of points")->default_str("100");
    sample->add_option("--kappa", sa.kappa, "Concentration (von-mises, vmf)")
        ->default_str("5");
    sample->add_option("--sigma", sa.sigma, "Standard deviation (gaussian)")
        ->default_str("0.5");
    sample->add_option("--center", sa.center,
                       "Distribution center (angle, 3-vector or x,y)")
        ->delimiter(',');
    sample->add_option("--seed", sa.seed, "RNG seed")->default_str("0");
    sample->add_option("--out", sa.out, "Output CSV")->required();

    QuantizeArgs qa;
    CLI::App* quantize =
        app.add_subcommand("quantize", "Run online quantization over a point file");
    quantize->add_option("--in", qa.in, "Input points CSV")->required();
    quantize->add_option("--n", qa.n, "Codebook size")->required();
    add_schedule_option(quantize, qa.schedule);
    quantize->add_option("--repeat-m", qa.repeat_m, "Step repetition count")
        ->default_str("1");
    quantize->add_option("--epochs", qa.epochs, "Passes over the data")
        ->default_str("1");
    quantize->add_option("--init", qa.init, "prefix or spread")
        ->default_str("prefix");
    quantize->add_option("--checkpoint-every", qa.checkpoint_every,
                         "Checkpoint cadence in observations (0: about 20)")
        ->default_str("0");
    quantize->add_flag("--trace-w1", qa.trace_w1,
                       "Record the circle W1 to the empirical measure at "
                       "each checkpoint");
    quantize->add_option("--p", qa.p, "Distortion exponent")->default_str("2");
    quantize->add_option("--seed", qa.seed, "RNG seed")->default_str("0");
    quantize->add_option("--out", qa.out, "Report JSON")->required();
    quantize->add_option("--trace-csv", qa.trace_csv,
                         "Optional checkpoint trace CSV");

    TrafficArgs ta;
    CLI::App* traffic =
        app.add_subcommand("traffic", "Quantize the covariance field of a traffic scene");
    traffic->add_option("--in", ta.in, "Traffic CSV (x,y,vx,vy or lat,lon,vx,vy)");
    traffic->add_option("--scenario", ta.scenario,
                        "Built-in synthetic scene: parallel, crossing or multi");
    traffic->add_option("--scenario-count", ta.scenario_count,
                        "Sample count for --scenario")
        ->default_str("3000");
    traffic->add_option("--ref", ta.ref, "lat,lon projection reference");
    traffic->add_option("--window", ta.window, "start,end filter on the t column");
    traffic->add_option("--n", ta.n, "Number of complexity classes")
        ->default_str("3");
    traffic->add_option("--bandwidth", ta.bandwidth,
                        "Kernel bandwidth h (default radius/3)");
    traffic->add_option("--radius", ta.radius,
                        "Kernel truncation radius r (mandatory)");
    traffic->add_option("--ridge", ta.ridge, "Covariance ridge")
        ->default_str("1e-8");
    add_schedule_option(traffic, ta.schedule);
    traffic->add_option("--repeat-m", ta.repeat_m, "Step repetition count")
        ->default_str("1");
    traffic->add_option("--epochs", ta.epochs, "Passes over the data")
        ->default_str("1");
    traffic->add_option("--seed", ta.seed, "RNG seed")->default_str("0");
    traffic->add_option("--out", ta.out, "Summary JSON")->required();
    traffic->add_option("--labels", ta.labels,
                        "Labels CSV (default: derived from --out)");
    traffic->add_option("--svg", ta.svg, "Optional labeled scatter SVG");

    CompareArgs ca;
    CLI::App* compare =
        app.add_subcommand("compare", "Pairwise transport costs between summaries");
    compare->add_option("files", ca.files, "Summary JSON files (>= 2)")
        ->expected(-2);
    compare->add_option("--p", ca.p, "Transport exponent")->default_str("1");
    compare->add_option("--out", ca.out, "Distance matrix CSV")->required();
    compare->add_option("--plan-out", ca.plan_out, "Optional plans JSON");

    MeanArgs ma;
    CLI::App* mean = app.add_subcommand("mean", "Frechet mean of a point file");
    mean->add_option("--in", ma.in, "Input points CSV")->required();
    mean->add_option("--tol", ma.tol, "Gradient norm tolerance")
        ->default_str("1e-9");
    mean->add_option("--max-iter", ma.max_iter, "Iteration cap")
        ->default_str("200");
    mean->add_option("--out", ma.out, "Result JSON")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "E[usage]: " << e.what() << "\n";
        return 2;
    }

    try {
        if (sample->parsed()) {
            return run_sample(sa);
        }
        if (quantize->parsed()) {
            return run_quantize(qa);
        }
        if (traffic->parsed()) {
            return run_traffic(ta);
        }
        if (compare->parsed()) {
            return run_compare(ca);
        }
        if (mean->parsed()) {
            return run_mean(ma);
        }
        std::cerr << "E[usage]: no subcommand given\n";
        return 2;
    } catch (const rquant::UsageError& e) {
        std::cerr << "E[usage]: " << e.what() << "\n";
        return 2;
    } catch (const rquant::DataError& e) {
        std::cerr << "E[data]: " << e.what() << "\n";
        return 3;
    } catch (const rquant::NumericError& e) {
        std::cerr << "E[numeric]: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "E[internal]: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
