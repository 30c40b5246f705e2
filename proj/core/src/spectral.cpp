#include "nqs/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "nqs/errors.hpp"

namespace nqs {

namespace {

constexpr double kHermitianTolerance = 1e-8;
constexpr double kDegenerateGap = 1e-12;
constexpr double kZeroBlock = 1e-12;

}  // namespace

std::size_t numerical_rank(const Eigen::VectorXd& eigenvalues, const SpectrumOptions& options) {
    double threshold = options.rank_threshold;
    if (options.rank_mode == RankMode::Relative && eigenvalues.size() > 0) {
        threshold = std::max(threshold, options.relative_rank * eigenvalues.maxCoeff());
    }
    return static_cast<std::size_t>((eigenvalues.array() > threshold).count());
}

std::vector<Kink> detect_kinks(const Eigen::VectorXd& eigenvalues, double ratio_threshold, double relative_floor) {
    std::vector<Kink> kinks;
    if (eigenvalues.size() < 2) return kinks;
    const double floor = std::max(0.0, relative_floor * eigenvalues[0]);
    for (Eigen::Index i = 0; i + 1 < eigenvalues.size(); ++i) {
        const double hi = eigenvalues[i];
        const double lo = eigenvalues[i + 1];
        if (!(lo > 0.0) || lo <= floor) break;
        const double ratio = hi / lo;
        if (ratio > ratio_threshold) kinks.push_back({static_cast<std::size_t>(i + 1), ratio});
    }
    return kinks;
}

double eigvec_entanglement(const Eigen::Ref<const Eigen::VectorXcd>& vec, std::size_t n_visible,
                           std::size_t n_hidden) {
    const auto n = static_cast<Eigen::Index>(n_visible);
    const auto m = static_cast<Eigen::Index>(n_hidden);
    if (vec.size() != n + m + n * m) throw std::invalid_argument("vector length does not match N + M + N*M");
    const auto tail = vec.tail(n * m);
    const double norm = tail.norm();
    if (!(norm >= kZeroBlock)) throw ZeroWeightBlock("weight block norm below 1e-12; entanglement undefined");
    Eigen::MatrixXcd block(n, m);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < m; ++j) block(i, j) = tail[i * m + j] / norm;
    }
    const Eigen::VectorXd s = Eigen::JacobiSVD<Eigen::MatrixXcd>(block).singularValues();
    double entropy = 0.0;
    for (Eigen::Index k = 0; k < s.size(); ++k) {
        const double p = s[k] * s[k];
        if (p > 0.0) entropy -= p * std::log(p);
    }
    return std::max(entropy, 0.0);
}

SpectrumReport spectrum(const Eigen::MatrixXcd& s, std::size_t n_visible, std::size_t n_hidden,
                        const SpectrumOptions& options) {
    if (s.rows() != s.cols()) throw std::invalid_argument("Fisher matrix must be square");
    const auto d = s.rows();
    if (d != static_cast<Eigen::Index>(n_visible + n_hidden + n_visible * n_hidden)) {
        throw std::invalid_argument("Fisher matrix size does not match N + M + N*M");
    }
    const double asym = d == 0 ? 0.0 : (s - s.adjoint()).cwiseAbs().maxCoeff();
    if (asym > kHermitianTolerance) {
        std::ostringstream msg;
        msg << "matrix is not Hermitian: max |S - S^dagger| = " << asym;
        throw NotHermitian(msg.str());
    }

    SpectrumReport report;
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(s);
    if (eig.info() != Eigen::Success) throw std::runtime_error("Hermitian eigensolver did not converge");
    report.eigenvalues = eig.eigenvalues().reverse();
    const Eigen::MatrixXcd vectors = eig.eigenvectors().rowwise().reverse();

    report.rank = numerical_rank(report.eigenvalues, options);
    report.kinks = detect_kinks(report.eigenvalues, options.kink_ratio, options.kink_floor);
    report.trace = s.diagonal().real().sum();
    report.diag_count = static_cast<std::size_t>((s.diagonal().real().array() > options.diag_threshold).count());

    report.degenerate.assign(static_cast<std::size_t>(d), false);
    for (Eigen::Index k = 0; k + 1 < d; ++k) {
        const double a = report.eigenvalues[k];
        const double b = report.eigenvalues[k + 1];
        const double scale = std::max(std::abs(a), std::abs(b));
        if (scale > 0.0 && std::abs(a - b) < kDegenerateGap * scale) {
            report.degenerate[static_cast<std::size_t>(k)] = true;
            report.degenerate[static_cast<std::size_t>(k + 1)] = true;
        }
    }

    report.entanglement = Eigen::VectorXd::Constant(d, std::numeric_limits<double>::quiet_NaN());
    if (options.entanglement && n_visible > 0 && n_hidden > 0) {
        for (Eigen::Index k = 0; k < d; ++k) {
            try {
                report.entanglement[k] = eigvec_entanglement(vectors.col(k), n_visible, n_hidden);
            } catch (const ZeroWeightBlock&) {
            }
        }
    }
    return report;
}

SpectrumReport spectrum(const FisherMatrix& s, std::size_t n_visible, std::size_t n_hidden,
                        const SpectrumOptions& options) {
    return spectrum(s.entries, n_visible, n_hidden, options);
}

Eigen::MatrixXcd random_rbm_predictor(const RbmParams& params) {
    const std::size_t n = params.n_visible();
    const std::size_t m = params.n_hidden();
    const auto d = static_cast<Eigen::Index>(params.n_params());
    const auto& b = params.b();
    const auto& w = params.w();
    const Eigen::MatrixXcd wtw = w.adjoint() * w;
    auto ai = [](std::size_t i) { return static_cast<Eigen::Index>(i); };
    auto bi = [&](std::size_t j) { return static_cast<Eigen::Index>(params.b_offset() + j); };
    auto wi = [&](std::size_t i, std::size_t j) { return static_cast<Eigen::Index>(params.w_index(i, j)); };
    auto W = [&](std::size_t i, std::size_t j) { return w(ai(i), ai(j)); };

    // Upper triangle in (a, b, w) order, then mirrored.
    Eigen::MatrixXcd p = Eigen::MatrixXcd::Zero(d, d);
    for (std::size_t i = 0; i < n; ++i) {
        p(ai(i), ai(i)) = 1.0;
        for (std::size_t j = 0; j < m; ++j) {
            p(ai(i), bi(j)) = W(i, j);
            p(ai(i), wi(i, j)) = b[ai(j)];
        }
    }
    for (std::size_t j = 0; j < m; ++j) {
        for (std::size_t jp = j; jp < m; ++jp) p(bi(j), bi(jp)) = wtw(ai(j), ai(jp));
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t jw = 0; jw < m; ++jw) p(bi(j), wi(i, jw)) = std::conj(W(i, j)) * b[ai(jw)];
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
            const Eigen::Index row = wi(i, j);
            for (std::size_t ip = i; ip < n; ++ip) {
                for (std::size_t jp = 0; jp < m; ++jp) {
                    const Eigen::Index col = wi(ip, jp);
                    if (col < row) continue;
                    cplx v = std::conj(W(ip, j)) * W(i, jp);
                    if (ip == i) v += std::conj(b[ai(j)]) * b[ai(jp)] + wtw(ai(j), ai(jp)) - 2.0 * std::conj(W(i, j)) * W(i, jp);
                    p(row, col) = v;
                }
            }
        }
    }
    Eigen::MatrixXcd full = p.selfadjointView<Eigen::Upper>();
    return full;
}

double fisher_information_trace(const Eigen::MatrixXcd& s) { return s.diagonal().real().sum(); }

double fisher_information_trace(const FisherMatrix& s) { return fisher_information_trace(s.entries); }

}  // namespace nqs
