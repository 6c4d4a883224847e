#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

namespace tmvksc {

// Multi-view dataset: V matrices over one shared sample index, with optional
// ground-truth labels.
struct ViewDataset {
    std::vector<Eigen::MatrixXd> views;
    std::vector<int> labels;  // empty when absent
    std::vector<std::string> view_names;

    Eigen::Index n() const { return views.empty() ? 0 : views.front().rows(); }
    Eigen::Index view_count() const { return static_cast<Eigen::Index>(views.size()); }
    bool has_labels() const { return !labels.empty(); }

    // All views share N; labels (when present) have length N.
    void validate() const;
};

enum class SynthKind { Synth1, Synth2 };

struct SynthSpec {
    SynthKind which = SynthKind::Synth1;
    std::int64_t n = 1000;
    std::uint64_t seed = 42;
};

// Two-dimensional Gaussian-mixture datasets.
//   Synth1: 3 views, 2 clusters, priors 0.5/0.5
//   Synth2: 2 views, 2 clusters, priors 0.8/0.2 (dominant cluster compact)
// The cluster of each sample is drawn first and shared by all views; each
// view then draws its own Gaussian conditioned on that cluster. Deterministic
// given the seed (see RandomStream for the exact stream).
ViewDataset generate_synth(const SynthSpec& spec);

// One numeric CSV per view, rows aligned by position; optional 0-based
// integer label file. ParseError messages carry file and line.
ViewDataset load_csv_views(const std::vector<std::string>& paths, const std::string& label_path,
                           bool header);

// Canonical CSV serialization (shortest round-trip formatting, '\n' rows);
// the golden checksums are FNV-1a 64 over exactly these bytes.
std::string matrix_to_csv(const Eigen::MatrixXd& m);
std::string labels_to_csv(const std::vector<int>& labels);

}  // namespace tmvksc
