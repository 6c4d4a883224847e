#include "tmvksc/kernels.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

#include "tmvksc/errors.hpp"
#include "tmvksc/parallel.hpp"

namespace tmvksc {

namespace {

double parse_double(const std::string& text, const std::string& what) {
    double v = 0.0;
    const char* begin = text.data();
    const char* end = begin + text.size();
    auto res = std::from_chars(begin, end, v);
    if (res.ec != std::errc{} || res.ptr != end) {
        throw ConfigError("invalid " + what + ": '" + text + "'");
    }
    return v;
}

double poly_base(const Eigen::Ref<const Eigen::VectorXd>& x, double t) {
    return x.dot(x) + t;
}

}  // namespace

void KernelSpec::validate() const {
    switch (kind) {
        case KernelKind::Rbf:
            if (!(sigma2 > 0.0)) throw ConfigError("rbf kernel requires sigma2 > 0");
            break;
        case KernelKind::NormalizedPoly:
            if (degree < 1) throw ConfigError("normalized polynomial kernel requires degree >= 1");
            if (!(t >= 0.0)) throw ConfigError("normalized polynomial kernel requires t >= 0");
            break;
        case KernelKind::Linear:
            break;
    }
}

KernelSpec KernelSpec::rbf(double sigma2) {
    KernelSpec s;
    s.kind = KernelKind::Rbf;
    s.sigma2 = sigma2;
    s.validate();
    return s;
}

KernelSpec KernelSpec::linear() {
    KernelSpec s;
    s.kind = KernelKind::Linear;
    return s;
}

KernelSpec KernelSpec::normalized_poly(int degree, double t) {
    KernelSpec s;
    s.kind = KernelKind::NormalizedPoly;
    s.degree = degree;
    s.t = t;
    s.validate();
    return s;
}

KernelSpec KernelSpec::parse(const std::string& text) {
    if (text == "linear") return linear();
    if (text.rfind("rbf:", 0) == 0) {
        return rbf(parse_double(text.substr(4), "rbf sigma2"));
    }
    if (text.rfind("normpoly:", 0) == 0) {
        const auto rest = text.substr(9);
        const auto colon = rest.find(':');
        if (colon == std::string::npos) {
            throw ConfigError("normpoly kernel needs 'normpoly:<degree>:<t>', got '" + text + "'");
        }
        const int degree = static_cast<int>(parse_double(rest.substr(0, colon), "normpoly degree"));
        const double t = parse_double(rest.substr(colon + 1), "normpoly t");
        return normalized_poly(degree, t);
    }
    throw ConfigError("unknown kernel spec '" + text + "' (expected rbf:<sigma2>, linear, or normpoly:<degree>:<t>)");
}

std::string KernelSpec::to_string() const {
    std::ostringstream out;
    switch (kind) {
        case KernelKind::Rbf:
            out << "rbf:" << sigma2;
            break;
        case KernelKind::Linear:
            out << "linear";
            break;
        case KernelKind::NormalizedPoly:
            out << "normpoly:" << degree << ":" << t;
            break;
    }
    return out.str();
}

double eval_kernel(const KernelSpec& spec, const Eigen::Ref<const Eigen::VectorXd>& x,
                   const Eigen::Ref<const Eigen::VectorXd>& y) {
    if (x.size() != y.size()) {
        throw DimensionError("eval_kernel: vectors of size " + std::to_string(x.size()) + " and " +
                             std::to_string(y.size()));
    }
    switch (spec.kind) {
        case KernelKind::Rbf:
            return std::exp(-(x - y).squaredNorm() / spec.sigma2);
        case KernelKind::Linear:
            return x.dot(y);
        case KernelKind::NormalizedPoly: {
            const double bx = std::pow(poly_base(x, spec.t), spec.degree);
            const double by = std::pow(poly_base(y, spec.t), spec.degree);
            if (bx == 0.0 || by == 0.0) {
                throw DegenerateKernelError(
                    "normalized polynomial kernel undefined at a zero-norm point with t = 0");
            }
            return std::pow(x.dot(y) + spec.t, spec.degree) / std::sqrt(bx * by);
        }
    }
    throw InternalError("unreachable kernel kind");
}

KernelMatrix gram_matrix(const KernelSpec& spec, const Eigen::MatrixXd& x) {
    const Eigen::Index n = x.rows();
    if (n < 2) throw DimensionError("gram_matrix: need at least 2 samples");
    if (!x.allFinite()) throw DimensionError("gram_matrix: non-finite input");
    spec.validate();

    KernelMatrix k;
    k.omega.resize(n, n);
    // Upper triangle once per pair, mirrored; rows split across threads.
    parallel_for_blocks(n, [&](std::int64_t lo, std::int64_t hi) {
        for (Eigen::Index i = lo; i < hi; ++i) {
            for (Eigen::Index j = i; j < n; ++j) {
                const double v = eval_kernel(spec, x.row(i).transpose(), x.row(j).transpose());
                k.omega(i, j) = v;
                k.omega(j, i) = v;
            }
        }
    });
    return k;
}

Eigen::MatrixXd cross_gram(const KernelSpec& spec, const Eigen::MatrixXd& x_test,
                           const Eigen::MatrixXd& x_train) {
    if (x_test.cols() != x_train.cols()) {
        throw DimensionError("cross_gram: test dimension " + std::to_string(x_test.cols()) +
                             " vs train dimension " + std::to_string(x_train.cols()));
    }
    spec.validate();
    const Eigen::Index nte = x_test.rows();
    const Eigen::Index ntr = x_train.rows();
    Eigen::MatrixXd k(nte, ntr);
    parallel_for_blocks(nte, [&](std::int64_t lo, std::int64_t hi) {
        for (Eigen::Index i = lo; i < hi; ++i) {
            for (Eigen::Index j = 0; j < ntr; ++j) {
                k(i, j) = eval_kernel(spec, x_test.row(i).transpose(), x_train.row(j).transpose());
            }
        }
    });
    return k;
}

DegreeMatrix degree_matrix(const KernelMatrix& k) {
    DegreeMatrix deg;
    deg.d = k.omega.colwise().sum().transpose();
    for (Eigen::Index i = 0; i < deg.d.size(); ++i) {
        if (!(deg.d(i) > 0.0)) {
            throw NonPositiveDegreeError("degree " + std::to_string(deg.d(i)) + " at sample " +
                                         std::to_string(i) +
                                         "; kernel unsuitable for random-walk weighting");
        }
    }
    return deg;
}

std::pair<Eigen::MatrixXd, CenteringStats> center_gram(const KernelMatrix& k, Centering mode,
                                                       const DegreeMatrix* degrees) {
    const Eigen::Index n = k.n();
    CenteringStats stats;
    if (mode == Centering::Plain) {
        stats.s = Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n));
    } else {
        if (degrees == nullptr) {
            throw ConfigError("degree-weighted centering requires a degree matrix");
        }
        if (degrees->d.size() != n) {
            throw DimensionError("center_gram: degree vector length mismatch");
        }
        stats.s = degrees->d.cwiseInverse();
        stats.s /= stats.s.sum();
    }
    stats.k_row = k.omega.transpose() * stats.s;  // s^T Omega as a column vector
    stats.k_scalar = stats.k_row.dot(stats.s);

    // Entrywise form of (I - 1 s^T) Omega (I - s 1^T); exact zero for a
    // constant kernel matrix.
    Eigen::MatrixXd centered(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        const double kj = stats.k_row(j);
        for (Eigen::Index i = 0; i < n; ++i) {
            centered(i, j) = k.omega(i, j) - stats.k_row(i) - kj + stats.k_scalar;
        }
    }
    return {std::move(centered), std::move(stats)};
}

Eigen::MatrixXd center_gram_test(const Eigen::MatrixXd& k_test, const CenteringStats& stats) {
    const Eigen::Index n = stats.s.size();
    if (k_test.cols() != n) {
        throw DimensionError("center_gram_test: expected " + std::to_string(n) + " columns, got " +
                             std::to_string(k_test.cols()));
    }
    Eigen::MatrixXd shifted = k_test.rowwise() - stats.k_row.transpose();
    const Eigen::VectorXd row_mean = shifted * stats.s;
    shifted.colwise() -= row_mean;
    return shifted;
}

}  // namespace tmvksc
