// tmvksc command line: generate / fit / predict / tune / report.

#include <CLI11.hpp>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <nlohmann/json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "tmvksc/data.hpp"
#include "tmvksc/errors.hpp"
#include "tmvksc/metrics.hpp"
#include "tmvksc/model.hpp"
#include "tmvksc/model_io.hpp"
#include "tmvksc/parallel.hpp"
#include "tmvksc/rng.hpp"

using namespace tmvksc;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

constexpr int kExitRuntime = 1;
constexpr int kExitConfig = 2;

double now_ms() {
    return std::chrono::duration<double, std::milli>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot write '" + path + "'");
    out << content;
    if (!out) throw ConfigError("failed writing '" + path + "'");
}

std::string checksum_hex(const std::string& bytes) {
    char hex[32];
    std::snprintf(hex, sizeof(hex), "%016llx",
                  static_cast<unsigned long long>(fnv1a64(bytes.data(), bytes.size())));
    return hex;
}

SynthKind parse_dataset(const std::string& name) {
    if (name == "synth1") return SynthKind::Synth1;
    if (name == "synth2") return SynthKind::Synth2;
    throw ConfigError("unknown dataset '" + name + "' (expected synth1 or synth2)");
}

Centering parse_centering(const std::string& name) {
    if (name == "plain") return Centering::Plain;
    if (name == "degree" || name == "degree_weighted") return Centering::DegreeWeighted;
    throw ConfigError("unknown centering '" + name + "' (expected plain or degree)");
}

Eigen::VectorXd to_vector(const std::vector<double>& values) {
    return Eigen::Map<const Eigen::VectorXd>(values.data(),
                                             static_cast<Eigen::Index>(values.size()));
}

// Everything a fit/tune run needs; assembled from a JSON config document
// and/or command-line flags (flags win).
struct RunConfig {
    std::optional<SynthSpec> synth;
    std::vector<std::string> view_paths;
    std::string label_path;
    bool header = false;

    std::vector<std::string> kernels;  // text form; one entry broadcasts
    std::string centering = "degree";
    int k = 2;
    int q = 0;
    double rho = 1.0;
    std::vector<double> kappa;
    std::vector<double> beta;
    double eta = 1.0;
    std::int64_t fixed_size = 0;  // 0 -> full fit
    std::uint64_t subset_seed = 0;
    std::string out;

    static RunConfig from_json(const json& j) {
        RunConfig cfg;
        if (j.contains("synth")) {
            const auto& s = j.at("synth");
            cfg.synth = SynthSpec{parse_dataset(s.at("dataset").get<std::string>()),
                                  s.value("n", std::int64_t{1000}),
                                  s.value("seed", std::uint64_t{42})};
        }
        cfg.view_paths = j.value("views", cfg.view_paths);
        cfg.label_path = j.value("labels", cfg.label_path);
        cfg.header = j.value("header", cfg.header);
        cfg.kernels = j.value("kernels", cfg.kernels);
        cfg.centering = j.value("centering", cfg.centering);
        cfg.k = j.value("k", cfg.k);
        cfg.q = j.value("q", cfg.q);
        cfg.rho = j.value("rho", cfg.rho);
        cfg.kappa = j.value("kappa", cfg.kappa);
        cfg.beta = j.value("beta", cfg.beta);
        cfg.eta = j.value("eta", cfg.eta);
        if (j.contains("fixed_size")) {
            cfg.fixed_size = j.at("fixed_size").value("m", std::int64_t{0});
            cfg.subset_seed = j.at("fixed_size").value("seed", std::uint64_t{0});
        }
        cfg.out = j.value("out", cfg.out);
        return cfg;
    }

    json to_json() const {
        json j;
        if (synth) {
            j["synth"] = {{"dataset", synth->which == SynthKind::Synth1 ? "synth1" : "synth2"},
                          {"n", synth->n},
                          {"seed", synth->seed}};
        }
        if (!view_paths.empty()) j["views"] = view_paths;
        if (!label_path.empty()) j["labels"] = label_path;
        j["header"] = header;
        j["kernels"] = kernels;
        j["centering"] = centering;
        j["k"] = k;
        if (q > 0) j["q"] = q;
        j["rho"] = rho;
        if (!kappa.empty()) j["kappa"] = kappa;
        if (!beta.empty()) j["beta"] = beta;
        j["eta"] = eta;
        if (fixed_size > 0) j["fixed_size"] = {{"m", fixed_size}, {"seed", subset_seed}};
        if (!out.empty()) j["out"] = out;
        return j;
    }

    ViewDataset load_data() const {
        if (synth) {
            if (!view_paths.empty()) {
                throw ConfigError("give either a synth spec or view files, not both");
            }
            return generate_synth(*synth);
        }
        if (view_paths.empty()) throw ConfigError("no input data: need --synth or --view files");
        return load_csv_views(view_paths, label_path, header);
    }

    std::vector<KernelSpec> kernel_specs(Eigen::Index views) const {
        if (kernels.empty()) {
            throw ConfigError("no kernel specs given (need --kernel per view, or one for all)");
        }
        std::vector<KernelSpec> specs;
        if (kernels.size() == 1) {
            specs.assign(static_cast<std::size_t>(views), KernelSpec::parse(kernels.front()));
        } else if (static_cast<Eigen::Index>(kernels.size()) == views) {
            for (const auto& text : kernels) specs.push_back(KernelSpec::parse(text));
        } else {
            throw ConfigError("have " + std::to_string(kernels.size()) + " kernel specs for " +
                              std::to_string(views) + " views (missing a --kernel for view " +
                              std::to_string(kernels.size() + 1) + ")");
        }
        return specs;
    }

    FitOptions fit_options() const {
        FitOptions opts;
        opts.k = k;
        opts.q = q;
        opts.centering = parse_centering(centering);
        opts.fusion.rho = rho;
        opts.fusion.eta = eta;
        if (!kappa.empty()) opts.fusion.kappa = to_vector(kappa);
        if (!beta.empty()) {
            Eigen::VectorXd b = to_vector(beta);
            const double total = b.sum();
            if (!(total > 0.0)) throw ConfigError("beta must have a positive sum");
            opts.beta = b / total;
        }
        return opts;
    }
};

// Shared dataset/config flags for fit, predict and tune.
struct CliDataArgs {
    std::string config_path;
    std::string dataset;
    std::int64_t n = 1000;
    std::uint64_t seed = 42;
    std::vector<std::string> views;
    std::string labels;
    bool header = false;
    std::vector<std::string> kernels;
    std::string centering;
    int k = 0;
    int q = -1;
    double rho = -1.0;
    std::string kappa_csv;
    std::string beta_csv;
    double eta = 0.0;
    bool has_model_params = false;

    void attach(CLI::App* cmd, bool with_model_params) {
        has_model_params = with_model_params;
        cmd->add_option("--config", config_path, "JSON run-config document");
        cmd->add_option("--synth", dataset, "synthetic dataset name (synth1|synth2)");
        cmd->add_option("--n", n, "synthetic sample count");
        cmd->add_option("--seed", seed, "synthetic generator seed");
        cmd->add_option("--view", views, "per-view CSV file (repeatable)");
        cmd->add_option("--labels", labels, "ground-truth label CSV");
        cmd->add_flag("--header", header, "skip one header row in CSV inputs");
        if (with_model_params) {
            cmd->add_option("--kernel", kernels,
                            "kernel per view: rbf:<s2> | linear | normpoly:<d>:<t>");
            cmd->add_option("--centering", centering, "plain | degree");
            cmd->add_option("--k", k, "number of clusters");
            cmd->add_option("--q", q, "latent components to compute (default k-1)");
            cmd->add_option("--rho", rho, "matrix/tensor mix in [0,1]");
            cmd->add_option("--kappa", kappa_csv, "comma-separated view weights");
            cmd->add_option("--beta", beta_csv, "comma-separated score weights");
            cmd->add_option("--eta", eta, "eigenvalue scale (default 1)");
        }
    }

    RunConfig merge(const CLI::App* cmd) const {
        RunConfig cfg;
        if (!config_path.empty()) {
            std::ifstream in(config_path);
            if (!in) throw ConfigError("cannot open config '" + config_path + "'");
            json j;
            try {
                in >> j;
            } catch (const json::exception& e) {
                throw ConfigError("bad config '" + config_path + "': " + e.what());
            }
            cfg = RunConfig::from_json(j);
        }
        if (cmd->count("--synth") > 0) cfg.synth = SynthSpec{parse_dataset(dataset), n, seed};
        if (cfg.synth && cmd->count("--n") > 0) cfg.synth->n = n;
        if (cfg.synth && cmd->count("--seed") > 0) cfg.synth->seed = seed;
        if (cmd->count("--view") > 0) cfg.view_paths = views;
        if (cmd->count("--labels") > 0) cfg.label_path = labels;
        if (cmd->count("--header") > 0) cfg.header = header;
        if (has_model_params) {
            if (cmd->count("--kernel") > 0) cfg.kernels = kernels;
            if (cmd->count("--centering") > 0) cfg.centering = centering;
            if (cmd->count("--k") > 0) cfg.k = k;
            if (cmd->count("--q") > 0) cfg.q = q;
            if (cmd->count("--rho") > 0) cfg.rho = rho;
            if (cmd->count("--kappa") > 0) cfg.kappa = parse_csv_doubles(kappa_csv);
            if (cmd->count("--beta") > 0) cfg.beta = parse_csv_doubles(beta_csv);
            if (cmd->count("--eta") > 0) cfg.eta = eta;
        }
        return cfg;
    }

    static std::vector<double> parse_csv_doubles(const std::string& text) {
        std::vector<double> out;
        std::size_t start = 0;
        while (start <= text.size()) {
            const auto comma = text.find(',', start);
            const auto cell = text.substr(start, comma == std::string::npos ? std::string::npos
                                                                            : comma - start);
            try {
                out.push_back(std::stod(cell));
            } catch (const std::exception&) {
                throw ConfigError("bad number '" + cell + "' in list '" + text + "'");
            }
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
        return out;
    }
};

json eigenvalues_json(const Eigen::VectorXd& lambdas) {
    json out = json::array();
    for (Eigen::Index i = 0; i < lambdas.size(); ++i) out.push_back(lambdas(i));
    return out;
}

// ---------------------------------------------------------------------------
// generate

int cmd_generate(const std::string& dataset, std::int64_t n, std::uint64_t seed,
                 const std::string& out_dir) {
    const SynthSpec spec{parse_dataset(dataset), n, seed};
    const ViewDataset data = generate_synth(spec);
    fs::create_directories(out_dir);

    json files = json::object();
    for (std::size_t v = 0; v < data.views.size(); ++v) {
        const std::string name = "view" + std::to_string(v + 1) + ".csv";
        const std::string csv = matrix_to_csv(data.views[v]);
        write_text_file((fs::path(out_dir) / name).string(), csv);
        files[name] = checksum_hex(csv);
    }
    const std::string labels_csv = labels_to_csv(data.labels);
    write_text_file((fs::path(out_dir) / "labels.csv").string(), labels_csv);
    files["labels.csv"] = checksum_hex(labels_csv);

    json summary = {{"dataset", dataset}, {"n", n}, {"seed", seed},
                    {"dir", out_dir},     {"files", files}};
    std::cout << summary.dump(2) << "\n";
    return 0;
}

// ---------------------------------------------------------------------------
// fit

int cmd_fit(const RunConfig& cfg, std::int64_t fixed_size, std::uint64_t subset_seed) {
    const double start = now_ms();
    const ViewDataset data = cfg.load_data();
    const auto specs = cfg.kernel_specs(data.view_count());
    const FitOptions opts = cfg.fit_options();

    Model model;
    ClusterAssignment train_labels;
    if (fixed_size > 0) {
        auto [m, labels] = fit_fixed_size(data, specs, opts, fixed_size, subset_seed);
        model = std::move(m);
        train_labels = std::move(labels);
    } else {
        model = fit(data, specs, opts);
        train_labels = predict(model, data);
    }
    const double wall = now_ms() - start;

    if (!cfg.out.empty()) save_model(model, cfg.out);

    json summary;
    summary["n"] = data.n();
    summary["v"] = data.view_count();
    summary["k"] = model.k;
    summary["eigenvalues"] = eigenvalues_json(model.lambdas);
    summary["objective_residual"] = objective_residual(model);
    summary["wall_time_ms"] = wall;
    if (fixed_size > 0) summary["subset_size"] = fixed_size;
    if (data.has_labels()) {
        summary["train_ari"] = ari(data.labels, train_labels.labels);
        summary["train_nmi"] = nmi(data.labels, train_labels.labels);
    }
    if (!cfg.out.empty()) summary["model"] = cfg.out;
    std::cout << summary.dump(2) << "\n";
    return 0;
}

// ---------------------------------------------------------------------------
// predict

int cmd_predict(const std::string& model_path, const RunConfig& cfg, const std::string& out_path,
                const std::string& scores_path) {
    const Model model = load_model(model_path);
    const ViewDataset data = cfg.load_data();
    const ClusterAssignment labels = predict(model, data);

    if (!out_path.empty()) {
        write_text_file(out_path, labels_to_csv(labels.labels));
    }
    if (!scores_path.empty()) {
        const ScoreBlock block = predict_scores(model, data);
        write_text_file(scores_path, matrix_to_csv(block.e_mean));
    }

    json summary;
    summary["n"] = data.n();
    if (!out_path.empty()) summary["labels_file"] = out_path;
    if (!scores_path.empty()) summary["scores_file"] = scores_path;
    if (data.has_labels()) {
        summary["ari"] = ari(data.labels, labels.labels);
        summary["nmi"] = nmi(data.labels, labels.labels);
    }
    std::cout << summary.dump(2) << "\n";
    return 0;
}

// ---------------------------------------------------------------------------
// tune

struct GridPoint {
    double sigma2 = 0.0;
    int degree = 0;
    double t = 0.0;
    double rho = 0.0;
    std::vector<double> kappa;
};

struct GridResult {
    GridPoint point;
    double ari_value = -2.0;
    double nmi_value = 0.0;
    double wall_time_ms = 0.0;
};

std::vector<KernelSpec> specialize(const std::vector<KernelSpec>& base, const GridPoint& point) {
    std::vector<KernelSpec> specs = base;
    for (auto& spec : specs) {
        if (spec.kind == KernelKind::Rbf && point.sigma2 > 0.0) spec.sigma2 = point.sigma2;
        if (spec.kind == KernelKind::NormalizedPoly && point.degree > 0) {
            spec.degree = point.degree;
            spec.t = point.t;
        }
    }
    return specs;
}

int cmd_tune(const RunConfig& cfg, std::vector<double> sigma2_grid, std::vector<int> degree_grid,
             std::vector<double> t_grid, std::vector<double> rho_grid,
             std::vector<double> kappa_grid, const std::string& best_out, int top) {
    const ViewDataset data = cfg.load_data();
    if (!data.has_labels()) throw ConfigError("tune needs ground-truth labels");
    const auto base_specs = cfg.kernel_specs(data.view_count());
    const auto views = static_cast<std::size_t>(data.view_count());

    const bool has_rbf = std::any_of(base_specs.begin(), base_specs.end(),
                                     [](const auto& s) { return s.kind == KernelKind::Rbf; });
    const bool has_poly =
        std::any_of(base_specs.begin(), base_specs.end(),
                    [](const auto& s) { return s.kind == KernelKind::NormalizedPoly; });

    if (sigma2_grid.empty()) {
        for (const double e : {-7.0, -5.0, -3.0, -1.0, 1.0, 3.0, 5.0, 7.0}) {
            sigma2_grid.push_back(std::exp(e));
        }
    }
    if (degree_grid.empty()) degree_grid = {1, 2};
    if (t_grid.empty()) {
        for (const double e : {-5.0, -2.5, 0.0, 2.5, 5.0}) t_grid.push_back(std::exp(e));
    }
    if (rho_grid.empty()) rho_grid = {0.0, 0.25, 0.5, 0.75, 1.0};
    if (kappa_grid.empty()) kappa_grid = {1.0};
    for (const double rho : rho_grid) {
        if (!(rho >= 0.0 && rho <= 1.0)) {
            throw ConfigError("rho grid value " + std::to_string(rho) + " outside [0, 1]");
        }
    }
    for (const double kappa : kappa_grid) {
        if (!(kappa > 0.0 && kappa <= 3.0)) {
            throw ConfigError("kappa grid value " + std::to_string(kappa) + " outside (0, 3]");
        }
    }
    if (!has_rbf) sigma2_grid = {0.0};
    if (!has_poly) {
        degree_grid = {0};
        t_grid = {0.0};
    }

    // Cartesian grid; kappa varies per view.
    std::vector<std::vector<double>> kappa_combos;
    {
        std::vector<double> combo(views, kappa_grid.front());
        std::vector<std::size_t> idx(views, 0);
        while (true) {
            for (std::size_t v = 0; v < views; ++v) combo[v] = kappa_grid[idx[v]];
            kappa_combos.push_back(combo);
            std::size_t v = 0;
            for (; v < views; ++v) {
                if (++idx[v] < kappa_grid.size()) break;
                idx[v] = 0;
            }
            if (v == views) break;
        }
    }

    std::vector<GridPoint> grid;
    for (const double sigma2 : sigma2_grid) {
        for (const int degree : degree_grid) {
            for (const double t : t_grid) {
                for (const double rho : rho_grid) {
                    for (const auto& kappa : kappa_combos) {
                        grid.push_back({sigma2, degree, t, rho, kappa});
                    }
                }
            }
        }
    }
    if (grid.empty()) throw ConfigError("empty tuning grid");

    std::vector<GridResult> results(grid.size());
    std::mutex error_mutex;
    std::string first_error;
    parallel_for_blocks(
        static_cast<std::int64_t>(grid.size()),
        [&](std::int64_t lo, std::int64_t hi) {
            for (std::int64_t g = lo; g < hi; ++g) {
                const auto& point = grid[static_cast<std::size_t>(g)];
                GridResult& result = results[static_cast<std::size_t>(g)];
                result.point = point;
                const double start = now_ms();
                try {
                    RunConfig local = cfg;
                    local.rho = point.rho;
                    local.kappa = point.kappa;
                    const FitOptions opts = local.fit_options();
                    const Model model = fit(data, specialize(base_specs, point), opts);
                    const ClusterAssignment labels = predict(model, data);
                    result.ari_value = ari(data.labels, labels.labels);
                    result.nmi_value = nmi(data.labels, labels.labels);
                } catch (const Error& e) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (first_error.empty()) first_error = e.what();
                    result.ari_value = -2.0;  // ranked last
                }
                result.wall_time_ms = now_ms() - start;
            }
        },
        1);

    std::vector<std::size_t> order(results.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return results[a].ari_value > results[b].ari_value;
    });

    auto point_json = [&](const GridResult& r) {
        json j;
        if (has_rbf) j["sigma2"] = r.point.sigma2;
        if (has_poly) {
            j["degree"] = r.point.degree;
            j["t"] = r.point.t;
        }
        j["rho"] = r.point.rho;
        j["kappa"] = r.point.kappa;
        j["ari"] = r.ari_value;
        j["nmi"] = r.nmi_value;
        j["wall_time_ms"] = r.wall_time_ms;
        return j;
    };

    json ranked = json::array();
    const std::size_t keep = top > 0 ? std::min<std::size_t>(order.size(), top) : order.size();
    for (std::size_t i = 0; i < keep; ++i) ranked.push_back(point_json(results[order[i]]));

    double best_nmi = 0.0;
    for (const auto& r : results) best_nmi = std::max(best_nmi, r.nmi_value);

    const GridResult& best = results[order.front()];
    RunConfig best_cfg = cfg;
    best_cfg.rho = best.point.rho;
    best_cfg.kappa = best.point.kappa;
    best_cfg.kernels.clear();
    for (const auto& spec : specialize(base_specs, best.point)) {
        best_cfg.kernels.push_back(spec.to_string());
    }

    json summary;
    summary["grid_size"] = grid.size();
    summary["results"] = ranked;
    summary["best"] = point_json(best);
    summary["best_nmi"] = best_nmi;
    summary["best_config"] = best_cfg.to_json();
    if (!first_error.empty()) summary["errors"] = first_error;
    if (!best_out.empty()) write_text_file(best_out, best_cfg.to_json().dump(2) + "\n");
    std::cout << summary.dump(2) << "\n";
    return 0;
}

// ---------------------------------------------------------------------------
// report

std::string svg_decay(const ExplainedVariance& ev) {
    const int w = 480, h = 320, pad = 40;
    const Eigen::Index q = ev.share.size();
    std::string svg = "<svg xmlns='http://www.w3.org/2000/svg' width='" + std::to_string(w) +
                      "' height='" + std::to_string(h) + "'>\n";
    svg += "<rect width='100%' height='100%' fill='white'/>\n";
    const double max_share = std::max(ev.share.maxCoeff(), 1e-12);
    for (Eigen::Index i = 0; i < q; ++i) {
        const double x = pad + (w - 2.0 * pad) * (q == 1 ? 0.5 : double(i) / double(q - 1));
        const double y = h - pad - (h - 2.0 * pad) * (ev.share(i) / max_share);
        svg += "<circle cx='" + std::to_string(x) + "' cy='" + std::to_string(y) +
               "' r='4' fill='steelblue'/>\n";
        if (i > 0) {
            const double px =
                pad + (w - 2.0 * pad) * (q == 1 ? 0.5 : double(i - 1) / double(q - 1));
            const double py = h - pad - (h - 2.0 * pad) * (ev.share(i - 1) / max_share);
            svg += "<line x1='" + std::to_string(px) + "' y1='" + std::to_string(py) + "' x2='" +
                   std::to_string(x) + "' y2='" + std::to_string(y) +
                   "' stroke='steelblue' stroke-width='2'/>\n";
        }
    }
    svg += "<text x='" + std::to_string(w / 2) + "' y='" + std::to_string(h - 8) +
           "' text-anchor='middle' font-size='12'>component</text>\n";
    svg += "</svg>\n";
    return svg;
}

std::string svg_scatter(const Eigen::MatrixXd& h, const std::vector<int>& labels) {
    static const char* palette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
                                    "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};
    const int w = 480, h_px = 480, pad = 30;
    const double x_min = h.col(0).minCoeff(), x_max = h.col(0).maxCoeff();
    const double y_min = h.col(1).minCoeff(), y_max = h.col(1).maxCoeff();
    const double x_span = std::max(x_max - x_min, 1e-12);
    const double y_span = std::max(y_max - y_min, 1e-12);
    std::string svg = "<svg xmlns='http://www.w3.org/2000/svg' width='" + std::to_string(w) +
                      "' height='" + std::to_string(h_px) + "'>\n";
    svg += "<rect width='100%' height='100%' fill='white'/>\n";
    for (Eigen::Index i = 0; i < h.rows(); ++i) {
        const double x = pad + (w - 2.0 * pad) * (h(i, 0) - x_min) / x_span;
        const double y = h_px - pad - (h_px - 2.0 * pad) * (h(i, 1) - y_min) / y_span;
        const int c = labels.empty() ? 0 : labels[static_cast<std::size_t>(i)] % 8;
        svg += "<circle cx='" + std::to_string(x) + "' cy='" + std::to_string(y) +
               "' r='2.5' fill='" + palette[c] + "' fill-opacity='0.7'/>\n";
    }
    svg += "</svg>\n";
    return svg;
}

int cmd_report(const std::string& model_path, const std::string& evr_path,
               const std::string& latent_path, const std::string& svg_dir) {
    const Model model = load_model(model_path);
    const ExplainedVariance ev = explained_variance(model);

    if (!evr_path.empty()) {
        std::string csv = "component,lambda,share,cumulative\n";
        for (Eigen::Index i = 0; i < ev.share.size(); ++i) {
            csv += std::to_string(i + 1) + "," + std::to_string(model.lambdas(i)) + "," +
                   std::to_string(ev.share(i)) + "," + std::to_string(ev.cumulative(i)) + "\n";
        }
        write_text_file(evr_path, csv);
    }

    // Latent variables of the training samples with their fitted labels.
    ViewDataset train;
    train.views = model.train_x;
    for (std::size_t v = 0; v < model.train_x.size(); ++v) {
        train.view_names.push_back("view" + std::to_string(v + 1));
    }
    const ClusterAssignment labels = predict(model, train);
    const int h_cols = static_cast<int>(std::min<Eigen::Index>(2, model.h.cols()));

    if (!latent_path.empty()) {
        std::string csv = h_cols == 1 ? "h1,label\n" : "h1,h2,label\n";
        for (Eigen::Index i = 0; i < model.h.rows(); ++i) {
            csv += std::to_string(model.h(i, 0));
            if (h_cols == 2) csv += "," + std::to_string(model.h(i, 1));
            csv += "," + std::to_string(labels.labels[static_cast<std::size_t>(i)]) + "\n";
        }
        write_text_file(latent_path, csv);
    }

    json summary;
    summary["components"] = ev.share.size();
    summary["share"] = eigenvalues_json(ev.share);
    summary["cumulative"] = eigenvalues_json(ev.cumulative);
    summary["negative_eigenvalues"] = ev.negative_count;

    if (!svg_dir.empty()) {
        fs::create_directories(svg_dir);
        write_text_file((fs::path(svg_dir) / "explained_variance.svg").string(), svg_decay(ev));
        if (h_cols >= 2) {
            write_text_file((fs::path(svg_dir) / "latent_scatter.svg").string(),
                            svg_scatter(model.h, labels.labels));
            summary["scatter"] = (fs::path(svg_dir) / "latent_scatter.svg").string();
        } else {
            std::cerr << "warning: scatter needs q >= 2 latent components, skipping\n";
        }
    }
    std::cout << summary.dump(2) << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"tensor-based multi-view kernel spectral clustering"};
    app.require_subcommand(1);

    // generate
    auto* generate = app.add_subcommand("generate", "write a synthetic dataset as CSV files");
    std::string gen_dataset;
    std::int64_t gen_n = 1000;
    std::uint64_t gen_seed = 42;
    std::string gen_out;
    generate->add_option("--dataset", gen_dataset, "synth1 | synth2")->required();
    generate->add_option("--n", gen_n, "sample count");
    generate->add_option("--seed", gen_seed, "generator seed");
    generate->add_option("--out", gen_out, "output directory")->required();

    // fit
    auto* fit_cmd = app.add_subcommand("fit", "fit a model and write the archive");
    CliDataArgs fit_args;
    fit_args.attach(fit_cmd, true);
    std::int64_t fixed_size = 0;
    std::uint64_t subset_seed = 0;
    std::string fit_out;
    fit_cmd->add_option("--fixed-size", fixed_size, "train on m uniformly drawn samples");
    fit_cmd->add_option("--subset-seed", subset_seed, "seed for the fixed-size subset");
    fit_cmd->add_option("--out", fit_out, "model archive path");

    // predict
    auto* predict_cmd = app.add_subcommand("predict", "assign clusters with a fitted model");
    CliDataArgs predict_args;
    predict_args.attach(predict_cmd, false);
    std::string predict_model, predict_out, predict_scores_path;
    predict_cmd->add_option("--model", predict_model, "model archive")->required();
    predict_cmd->add_option("--out", predict_out, "labels CSV to write");
    predict_cmd->add_option("--scores", predict_scores_path, "mean-score CSV to write");

    // tune
    auto* tune_cmd = app.add_subcommand("tune", "exhaustive grid search ranked by ARI");
    CliDataArgs tune_args;
    tune_args.attach(tune_cmd, true);
    std::string sigma2_csv, t_csv, rho_csv, kappa_csv, degree_csv, best_out;
    int top = 0;
    tune_cmd->add_option("--sigma2-grid", sigma2_csv, "comma-separated RBF sigma2 values");
    tune_cmd->add_option("--degree-grid", degree_csv, "comma-separated normpoly degrees");
    tune_cmd->add_option("--t-grid", t_csv, "comma-separated normpoly t values");
    tune_cmd->add_option("--rho-grid", rho_csv, "comma-separated rho values in [0,1]");
    tune_cmd->add_option("--kappa-grid", kappa_csv, "comma-separated kappa values in (0,3]");
    tune_cmd->add_option("--best-out", best_out, "write the best run config here");
    tune_cmd->add_option("--top", top, "limit the ranked table to the top T rows");

    // report
    auto* report_cmd = app.add_subcommand("report", "explained variance and latent exports");
    std::string report_model, evr_path, latent_path, svg_dir;
    report_cmd->add_option("--model", report_model, "model archive")->required();
    report_cmd->add_option("--evr", evr_path, "explained-variance CSV to write");
    report_cmd->add_option("--latent", latent_path, "latent-variable CSV to write");
    report_cmd->add_option("--svg-dir", svg_dir, "directory for SVG plots");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return kExitConfig;
    }

    try {
        if (generate->parsed()) return cmd_generate(gen_dataset, gen_n, gen_seed, gen_out);
        if (fit_cmd->parsed()) {
            RunConfig cfg = fit_args.merge(fit_cmd);
            if (fit_cmd->count("--out") > 0) cfg.out = fit_out;
            if (fit_cmd->count("--fixed-size") == 0 && cfg.fixed_size > 0) {
                fixed_size = cfg.fixed_size;
                subset_seed = cfg.subset_seed;
            }
            return cmd_fit(cfg, fixed_size, subset_seed);
        }
        if (predict_cmd->parsed()) {
            return cmd_predict(predict_model, predict_args.merge(predict_cmd), predict_out,
                               predict_scores_path);
        }
        if (tune_cmd->parsed()) {
            std::vector<double> sigma2_grid, t_grid, rho_grid, kappa_grid;
            std::vector<int> degree_grid;
            if (!sigma2_csv.empty()) sigma2_grid = CliDataArgs::parse_csv_doubles(sigma2_csv);
            if (!t_csv.empty()) t_grid = CliDataArgs::parse_csv_doubles(t_csv);
            if (!rho_csv.empty()) rho_grid = CliDataArgs::parse_csv_doubles(rho_csv);
            if (!kappa_csv.empty()) kappa_grid = CliDataArgs::parse_csv_doubles(kappa_csv);
            if (!degree_csv.empty()) {
                for (const double d : CliDataArgs::parse_csv_doubles(degree_csv)) {
                    degree_grid.push_back(static_cast<int>(d));
                }
            }
            return cmd_tune(tune_args.merge(tune_cmd), sigma2_grid, degree_grid, t_grid, rho_grid,
                            kappa_grid, best_out, top);
        }
        if (report_cmd->parsed()) {
            return cmd_report(report_model, evr_path, latent_path, svg_dir);
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
    return kExitConfig;
}
