#include "tmvksc/model_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <nlohmann/json.hpp>
#include <vector>

#include "tmvksc/errors.hpp"

namespace tmvksc {

namespace {

using nlohmann::json;

static_assert(std::endian::native == std::endian::little,
              "archive writer assumes a little-endian host");

struct ArrayRef {
    std::string name;
    std::vector<std::int64_t> shape;
};

json kernel_to_json(const KernelSpec& spec) {
    json j;
    switch (spec.kind) {
        case KernelKind::Rbf:
            j["kind"] = "rbf";
            j["sigma2"] = spec.sigma2;
            break;
        case KernelKind::Linear:
            j["kind"] = "linear";
            break;
        case KernelKind::NormalizedPoly:
            j["kind"] = "normpoly";
            j["degree"] = spec.degree;
            j["t"] = spec.t;
            break;
    }
    return j;
}

KernelSpec kernel_from_json(const json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "rbf") return KernelSpec::rbf(j.at("sigma2").get<double>());
    if (kind == "linear") return KernelSpec::linear();
    if (kind == "normpoly") {
        return KernelSpec::normalized_poly(j.at("degree").get<int>(), j.at("t").get<double>());
    }
    throw CorruptModelError("unknown kernel kind '" + kind + "' in model archive");
}

json codebook_to_json(const Codebook& book) {
    json j;
    j["codewords"] = json::array();
    for (const auto& cw : book.codewords) {
        json row = json::array();
        for (const auto bit : cw) row.push_back(static_cast<int>(bit));
        j["codewords"].push_back(row);
    }
    j["counts"] = book.counts;
    return j;
}

Codebook codebook_from_json(const json& j) {
    Codebook book;
    for (const auto& row : j.at("codewords")) {
        std::vector<std::int8_t> cw;
        for (const auto& bit : row) cw.push_back(static_cast<std::int8_t>(bit.get<int>()));
        book.codewords.push_back(std::move(cw));
    }
    book.counts = j.at("counts").get<std::vector<int>>();
    return book;
}

}  // namespace

void save_model(const Model& model, const std::string& path) {
    json meta;
    meta["format"] = "tmvksc-model";
    meta["format_version"] = kModelFormatVersion;
    meta["k"] = model.k;
    meta["q"] = model.q;
    meta["centering"] = model.centering == Centering::Plain ? "plain" : "degree_weighted";
    meta["rho"] = model.fusion.rho;
    meta["eta"] = model.fusion.eta;
    meta["kappa"] = std::vector<double>(model.fusion.kappa.data(),
                                        model.fusion.kappa.data() + model.fusion.kappa.size());
    meta["beta"] =
        std::vector<double>(model.beta.data(), model.beta.data() + model.beta.size());
    meta["kernels"] = json::array();
    for (const auto& spec : model.specs) meta["kernels"].push_back(kernel_to_json(spec));
    meta["codebook"] = codebook_to_json(model.codebook);
    meta["per_view_codebooks"] = json::array();
    for (const auto& book : model.per_view_codebooks) {
        meta["per_view_codebooks"].push_back(codebook_to_json(book));
    }
    meta["subset_indices"] = model.subset_indices;

    std::vector<ArrayRef> arrays;
    arrays.push_back({"h", {model.h.rows(), model.h.cols()}});
    arrays.push_back({"lambdas", {model.lambdas.size()}});
    for (std::size_t v = 0; v < model.train_x.size(); ++v) {
        const auto tag = std::to_string(v);
        arrays.push_back({"train_x_" + tag, {model.train_x[v].rows(), model.train_x[v].cols()}});
        arrays.push_back({"stats_s_" + tag, {model.stats[v].s.size()}});
        arrays.push_back({"stats_krow_" + tag, {model.stats[v].k_row.size()}});
        arrays.push_back({"stats_kscalar_" + tag, {1}});
        arrays.push_back({"degree_" + tag, {model.degrees[v].size()}});
    }

    json arrays_meta = json::array();
    for (const auto& a : arrays) {
        arrays_meta.push_back({{"name", a.name}, {"shape", a.shape}});
    }
    meta["arrays"] = arrays_meta;

    const std::string meta_text = meta.dump();
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot write model file '" + path + "'");
    const std::uint64_t meta_len = meta_text.size();
    out.write(reinterpret_cast<const char*>(&meta_len), sizeof(meta_len));
    out.write(meta_text.data(), static_cast<std::streamsize>(meta_text.size()));

    // Matrices are written row-major regardless of Eigen's storage order.
    auto write_matrix = [&out](const Eigen::MatrixXd& m) {
        Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> rm = m;
        out.write(reinterpret_cast<const char*>(rm.data()),
                  static_cast<std::streamsize>(sizeof(double) * static_cast<std::size_t>(rm.size())));
    };
    write_matrix(model.h);
    out.write(reinterpret_cast<const char*>(model.lambdas.data()),
              static_cast<std::streamsize>(sizeof(double) *
                                           static_cast<std::size_t>(model.lambdas.size())));
    for (std::size_t v = 0; v < model.train_x.size(); ++v) {
        write_matrix(model.train_x[v]);
        const auto& s = model.stats[v];
        out.write(reinterpret_cast<const char*>(s.s.data()),
                  static_cast<std::streamsize>(sizeof(double) * static_cast<std::size_t>(s.s.size())));
        out.write(reinterpret_cast<const char*>(s.k_row.data()),
                  static_cast<std::streamsize>(sizeof(double) *
                                               static_cast<std::size_t>(s.k_row.size())));
        out.write(reinterpret_cast<const char*>(&s.k_scalar),
                  static_cast<std::streamsize>(sizeof(double)));
        out.write(reinterpret_cast<const char*>(model.degrees[v].data()),
                  static_cast<std::streamsize>(sizeof(double) *
                                               static_cast<std::size_t>(model.degrees[v].size())));
    }
    if (!out) throw ConfigError("failed writing model file '" + path + "'");
}

Model load_model(const std::string& path) {
    std::ifstream in(path, std::ios::binary | std::ios::ate);
    if (!in) throw CorruptModelError("cannot open model file '" + path + "'");
    const auto file_size = static_cast<std::uint64_t>(in.tellg());
    in.seekg(0);

    std::uint64_t meta_len = 0;
    in.read(reinterpret_cast<char*>(&meta_len), sizeof(meta_len));
    if (!in || meta_len > file_size - sizeof(meta_len)) {
        throw CorruptModelError(path + ": truncated or malformed header");
    }
    std::string meta_text(meta_len, '\0');
    in.read(meta_text.data(), static_cast<std::streamsize>(meta_len));
    if (!in) throw CorruptModelError(path + ": truncated metadata");

    json meta;
    try {
        meta = json::parse(meta_text);
    } catch (const json::exception& e) {
        throw CorruptModelError(path + ": bad metadata: " + e.what());
    }
    if (meta.value("format", "") != "tmvksc-model") {
        throw CorruptModelError(path + ": not a tmvksc model archive");
    }
    const int version = meta.value("format_version", -1);
    if (version != kModelFormatVersion) {
        throw FormatVersionError(path + ": format version " + std::to_string(version) +
                                 ", expected " + std::to_string(kModelFormatVersion));
    }

    Model model;
    try {
        model.k = meta.at("k").get<int>();
        model.q = meta.at("q").get<int>();
        model.centering = meta.at("centering").get<std::string>() == "plain"
                              ? Centering::Plain
                              : Centering::DegreeWeighted;
        model.fusion.rho = meta.at("rho").get<double>();
        model.fusion.eta = meta.at("eta").get<double>();
        const auto kappa = meta.at("kappa").get<std::vector<double>>();
        model.fusion.kappa =
            Eigen::Map<const Eigen::VectorXd>(kappa.data(), static_cast<Eigen::Index>(kappa.size()));
        const auto beta = meta.at("beta").get<std::vector<double>>();
        model.beta =
            Eigen::Map<const Eigen::VectorXd>(beta.data(), static_cast<Eigen::Index>(beta.size()));
        for (const auto& j : meta.at("kernels")) model.specs.push_back(kernel_from_json(j));
        model.codebook = codebook_from_json(meta.at("codebook"));
        for (const auto& j : meta.at("per_view_codebooks")) {
            model.per_view_codebooks.push_back(codebook_from_json(j));
        }
        model.subset_indices = meta.at("subset_indices").get<std::vector<std::int64_t>>();
    } catch (const json::exception& e) {
        throw CorruptModelError(path + ": bad metadata: " + e.what());
    }

    auto read_block = [&in, &path](double* dst, std::int64_t count) {
        in.read(reinterpret_cast<char*>(dst),
                static_cast<std::streamsize>(sizeof(double) * static_cast<std::size_t>(count)));
        if (!in) throw CorruptModelError(path + ": truncated array section");
    };
    auto read_matrix = [&read_block](Eigen::Index rows, Eigen::Index cols) {
        Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> rm(rows, cols);
        read_block(rm.data(), rows * cols);
        return Eigen::MatrixXd(rm);
    };

    std::size_t idx = 0;
    const auto& arrays = meta.at("arrays");
    auto next_shape = [&arrays, &idx, &path](const std::string& expected) {
        if (idx >= arrays.size()) throw CorruptModelError(path + ": missing array " + expected);
        const auto& entry = arrays.at(idx++);
        if (entry.at("name").get<std::string>() != expected) {
            throw CorruptModelError(path + ": expected array '" + expected + "', found '" +
                                    entry.at("name").get<std::string>() + "'");
        }
        return entry.at("shape").get<std::vector<std::int64_t>>();
    };

    auto shape = next_shape("h");
    model.h = read_matrix(shape.at(0), shape.at(1));
    shape = next_shape("lambdas");
    model.lambdas.resize(shape.at(0));
    read_block(model.lambdas.data(), shape.at(0));

    const auto views = model.specs.size();
    for (std::size_t v = 0; v < views; ++v) {
        const auto tag = std::to_string(v);
        shape = next_shape("train_x_" + tag);
        model.train_x.push_back(read_matrix(shape.at(0), shape.at(1)));
        CenteringStats stats;
        shape = next_shape("stats_s_" + tag);
        stats.s.resize(shape.at(0));
        read_block(stats.s.data(), shape.at(0));
        shape = next_shape("stats_krow_" + tag);
        stats.k_row.resize(shape.at(0));
        read_block(stats.k_row.data(), shape.at(0));
        next_shape("stats_kscalar_" + tag);
        read_block(&stats.k_scalar, 1);
        model.stats.push_back(std::move(stats));
        shape = next_shape("degree_" + tag);
        Eigen::VectorXd deg(shape.at(0));
        read_block(deg.data(), shape.at(0));
        model.degrees.push_back(std::move(deg));
    }

    // Anything left over means the writer and metadata disagree.
    char extra = 0;
    in.read(&extra, 1);
    if (!in.eof()) throw CorruptModelError(path + ": trailing bytes after declared arrays");
    return model;
}

}  // namespace tmvksc
