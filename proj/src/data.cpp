#include "tmvksc/data.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

#include "tmvksc/errors.hpp"
#include "tmvksc/rng.hpp"

namespace tmvksc {

namespace {

struct GaussView {
    Eigen::Vector2d mean[2];
    Eigen::Matrix2d cov[2];
};

Eigen::Matrix2d cov2(double a, double b, double c) {
    Eigen::Matrix2d m;
    m << a, b, b, c;
    return m;
}

// Lower Cholesky factor of a 2x2 SPD matrix, closed form.
Eigen::Matrix2d chol2(const Eigen::Matrix2d& sigma) {
    const double l11 = std::sqrt(sigma(0, 0));
    const double l21 = sigma(1, 0) / l11;
    const double inner = sigma(1, 1) - l21 * l21;
    if (!(l11 > 0.0) || !(inner > 0.0)) {
        throw InternalError("generator covariance is not positive definite");
    }
    Eigen::Matrix2d l = Eigen::Matrix2d::Zero();
    l(0, 0) = l11;
    l(1, 0) = l21;
    l(1, 1) = std::sqrt(inner);
    return l;
}

struct MixtureSpec {
    double weight0;
    std::vector<GaussView> views;
};

MixtureSpec synth1_spec() {
    MixtureSpec m;
    m.weight0 = 0.5;
    m.views.resize(3);
    m.views[0].mean[0] << 1.0, 1.0;
    m.views[0].mean[1] << 3.0, 4.0;
    m.views[0].cov[0] = cov2(0.10, 0.05, 0.15);
    m.views[0].cov[1] = cov2(0.03, 0.02, 0.06);
    m.views[1].mean[0] << 1.0, 2.0;
    m.views[1].mean[1] << 2.0, 2.0;
    m.views[1].cov[0] = cov2(0.10, -0.02, 0.10);
    m.views[1].cov[1] = cov2(0.06, 0.01, 0.05);
    m.views[2].mean[0] << 1.0, 1.0;
    m.views[2].mean[1] << 3.0, 3.0;
    m.views[2].cov[0] = cov2(0.12, 0.02, 0.10);
    m.views[2].cov[1] = cov2(0.10, 0.04, 0.07);
    return m;
}

MixtureSpec synth2_spec() {
    MixtureSpec m;
    m.weight0 = 0.8;
    m.views.resize(2);
    m.views[0].mean[0] << 1.0, 1.0;
    m.views[0].mean[1] << 2.0, 2.0;
    m.views[0].cov[0] = cov2(0.1, 0.0, 0.3);
    m.views[0].cov[1] = cov2(1.5, 0.4, 1.2);
    m.views[1].mean[0] << 2.0, 2.0;
    m.views[1].mean[1] << 1.0, 1.0;
    m.views[1].cov[0] = cov2(0.3, 0.0, 0.6);
    m.views[1].cov[1] = cov2(1.0, 0.5, 0.9);
    return m;
}

void append_double(std::string& out, double v) {
    std::array<char, 32> buf{};
    auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    out.append(buf.data(), res.ptr);
}

double parse_cell(const std::string& cell, const std::string& path, std::size_t line) {
    double v = 0.0;
    const char* begin = cell.data();
    const char* end = begin + cell.size();
    auto res = std::from_chars(begin, end, v);
    if (res.ec != std::errc{} || res.ptr != end || !std::isfinite(v)) {
        throw ParseError(path + ":" + std::to_string(line) + ": non-numeric cell '" + cell + "'");
    }
    return v;
}

std::vector<std::vector<double>> read_csv_rows(const std::string& path, bool header) {
    std::ifstream in(path);
    if (!in) throw ParseError(path + ": cannot open file");
    std::vector<std::vector<double>> rows;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (header && line_no == 1) continue;
        std::vector<double> row;
        std::size_t start = 0;
        while (true) {
            const auto comma = line.find(',', start);
            const auto cell = line.substr(start, comma == std::string::npos ? std::string::npos
                                                                            : comma - start);
            row.push_back(parse_cell(cell, path, line_no));
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
        if (!rows.empty() && row.size() != rows.front().size()) {
            throw ParseError(path + ":" + std::to_string(line_no) + ": ragged row with " +
                             std::to_string(row.size()) + " cells, expected " +
                             std::to_string(rows.front().size()));
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw ParseError(path + ": no data rows");
    return rows;
}

}  // namespace

void ViewDataset::validate() const {
    if (views.empty()) throw ConfigError("dataset has no views");
    const Eigen::Index rows = views.front().rows();
    for (std::size_t v = 0; v < views.size(); ++v) {
        if (views[v].rows() != rows) {
            throw DimensionError("view " + std::to_string(v + 1) + " has " +
                                 std::to_string(views[v].rows()) + " rows, expected " +
                                 std::to_string(rows));
        }
    }
    if (!labels.empty() && static_cast<Eigen::Index>(labels.size()) != rows) {
        throw DimensionError("labels length " + std::to_string(labels.size()) + " for " +
                             std::to_string(rows) + " samples");
    }
}

ViewDataset generate_synth(const SynthSpec& spec) {
    if (spec.n < 2) throw ConfigError("generate_synth: n must be >= 2");
    const MixtureSpec mix = spec.which == SynthKind::Synth1 ? synth1_spec() : synth2_spec();
    const auto views = mix.views.size();

    std::vector<Eigen::Matrix2d> chol[2];
    for (int c = 0; c < 2; ++c) {
        chol[c].reserve(views);
        for (const auto& view : mix.views) chol[c].push_back(chol2(view.cov[c]));
    }

    ViewDataset data;
    data.views.assign(views, Eigen::MatrixXd(spec.n, 2));
    data.labels.resize(static_cast<std::size_t>(spec.n));
    for (std::size_t v = 0; v < views; ++v) {
        data.view_names.push_back("view" + std::to_string(v + 1));
    }

    // Stream order per sample: one uniform for the cluster, then one
    // Box-Muller pair per view.
    RandomStream rng(spec.seed);
    for (Eigen::Index i = 0; i < spec.n; ++i) {
        const int c = rng.uniform01() < mix.weight0 ? 0 : 1;
        data.labels[static_cast<std::size_t>(i)] = c;
        for (std::size_t v = 0; v < views; ++v) {
            const auto [z0, z1] = rng.gauss_pair();
            const Eigen::Vector2d z(z0, z1);
            data.views[v].row(i) = (mix.views[v].mean[c] + chol[c][v] * z).transpose();
        }
    }
    return data;
}

ViewDataset load_csv_views(const std::vector<std::string>& paths, const std::string& label_path,
                           bool header) {
    if (paths.empty()) throw ConfigError("load_csv_views: no view files");
    ViewDataset data;
    for (const auto& path : paths) {
        const auto rows = read_csv_rows(path, header);
        Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()),
                          static_cast<Eigen::Index>(rows.front().size()));
        for (std::size_t i = 0; i < rows.size(); ++i) {
            for (std::size_t j = 0; j < rows[i].size(); ++j) {
                m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
            }
        }
        if (!data.views.empty() && m.rows() != data.views.front().rows()) {
            throw ParseError(path + ": row count " + std::to_string(m.rows()) +
                             " does not match previous views (" +
                             std::to_string(data.views.front().rows()) + ")");
        }
        data.views.push_back(std::move(m));
        const auto slash = path.find_last_of('/');
        data.view_names.push_back(slash == std::string::npos ? path : path.substr(slash + 1));
    }
    if (!label_path.empty()) {
        const auto rows = read_csv_rows(label_path, header);
        if (rows.front().size() != 1) {
            throw ParseError(label_path + ": label file must have one column");
        }
        data.labels.reserve(rows.size());
        for (const auto& row : rows) {
            const double v = row.front();
            const int label = static_cast<int>(std::llround(v));
            if (static_cast<double>(label) != v) {
                throw ParseError(label_path + ": non-integer label " + std::to_string(v));
            }
            data.labels.push_back(label);
        }
    }
    data.validate();
    return data;
}

std::string matrix_to_csv(const Eigen::MatrixXd& m) {
    std::string out;
    out.reserve(static_cast<std::size_t>(m.size()) * 12);
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            if (j > 0) out.push_back(',');
            append_double(out, m(i, j));
        }
        out.push_back('\n');
    }
    return out;
}

std::string labels_to_csv(const std::vector<int>& labels) {
    std::string out;
    out.reserve(labels.size() * 3);
    for (const int label : labels) {
        out += std::to_string(label);
        out.push_back('\n');
    }
    return out;
}

}  // namespace tmvksc
