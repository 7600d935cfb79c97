#include "mvr/train/infonce.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "mvr/error.hpp"
#include "mvr/retrieval.hpp"

namespace mvr::train {
namespace {

void check_tau(double tau) {
    if (!std::isfinite(tau) || !(tau > 0.0)) {
        fail(ErrorCode::TemperatureNonPositive, fmt::format("temperature must be positive, got {}", tau));
    }
}

void check_batch(std::span<const EmbeddingVector> a, std::span<const EmbeddingVector> b) {
    if (a.empty() || a.size() != b.size()) {
        fail(ErrorCode::InvalidArgument,
             fmt::format("batch sides must be equal and non-empty, got {} and {}", a.size(), b.size()));
    }
}

// logits(i, j) = cos(a_i, b_j) / tau
Matrix similarity(std::span<const EmbeddingVector> a, std::span<const EmbeddingVector> b) {
    Matrix s(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = 0; j < b.size(); ++j) {
            s(i, j) = cosine(a[i], b[j]);
        }
    }
    return s;
}

double row_lse(const Matrix& logits, std::size_t i) {
    double m = logits(i, 0);
    for (std::size_t j = 1; j < logits.cols(); ++j) {
        m = std::max(m, logits(i, j));
    }
    double acc = 0.0;
    for (std::size_t j = 0; j < logits.cols(); ++j) {
        acc += std::exp(logits(i, j) - m);
    }
    return m + std::log(acc);
}

double col_lse(const Matrix& logits, std::size_t j) {
    double m = logits(0, j);
    for (std::size_t i = 1; i < logits.rows(); ++i) {
        m = std::max(m, logits(i, j));
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < logits.rows(); ++i) {
        acc += std::exp(logits(i, j) - m);
    }
    return m + std::log(acc);
}

struct LossParts {
    double loss;
    std::vector<double> row_lse;
    std::vector<double> col_lse;
};

LossParts symmetric_loss(const Matrix& logits) {
    const std::size_t b = logits.rows();
    LossParts parts{0.0, std::vector<double>(b), std::vector<double>(b)};
    double row_sum = 0.0;
    double col_sum = 0.0;
    for (std::size_t i = 0; i < b; ++i) {
        parts.row_lse[i] = row_lse(logits, i);
        row_sum += parts.row_lse[i] - logits(i, i);
    }
    for (std::size_t j = 0; j < b; ++j) {
        parts.col_lse[j] = col_lse(logits, j);
        col_sum += parts.col_lse[j] - logits(j, j);
    }
    const double n = static_cast<double>(b);
    parts.loss = 0.5 * (row_sum / n + col_sum / n);
    return parts;
}

Matrix scaled(Matrix m, double tau) {
    for (double& v : m.data()) {
        v /= tau;
    }
    return m;
}

}  // namespace

Matrix Matrix::identity(std::size_t rows, std::size_t cols) {
    Matrix m(rows, cols);
    for (std::size_t i = 0; i < std::min(rows, cols); ++i) {
        m(i, i) = 1.0;
    }
    return m;
}

double Matrix::frobenius_norm() const noexcept {
    return kernels::norm(data_);
}

void validate(const AdapterParams& params) {
    check_tau(params.tau);
    for (double v : params.weights.data()) {
        if (!std::isfinite(v)) {
            fail(ErrorCode::ConfigInvalid, "adapter weights contain a non-finite entry");
        }
    }
}

EmbeddingVector apply_adapter(const AdapterParams& params, const EmbeddingVector& x) {
    const Matrix& w = params.weights;
    if (x.dim() != w.rows()) {
        fail(ErrorCode::DimensionMismatch,
             fmt::format("adapter expects input dimension {}, got {}", w.rows(), x.dim()));
    }
    std::vector<double> out(w.cols(), 0.0);
    for (std::size_t r = 0; r < w.rows(); ++r) {
        const double xr = x[r];
        for (std::size_t c = 0; c < w.cols(); ++c) {
            out[c] += xr * w(r, c);
        }
    }
    return EmbeddingVector(std::move(out));
}

double infonce_loss(std::span<const EmbeddingVector> images, std::span<const EmbeddingVector> texts,
                    double tau) {
    check_tau(tau);
    check_batch(images, texts);
    return symmetric_loss(scaled(similarity(images, texts), tau)).loss;
}

LossGradient loss_gradient(std::span<const EmbeddingVector> raw_images,
                           std::span<const EmbeddingVector> texts, const AdapterParams& params) {
    validate(params);
    check_batch(raw_images, texts);
    const double tau = params.tau;
    const std::size_t b = raw_images.size();

    std::vector<EmbeddingVector> z;
    z.reserve(b);
    for (const auto& x : raw_images) {
        z.push_back(apply_adapter(params, x));
    }
    const Matrix cos = similarity(z, texts);
    const Matrix logits = scaled(cos, tau);
    const LossParts parts = symmetric_loss(logits);

    // dL/dcos(i, j) = (P_row(i, j) + P_col(i, j) - 2 [i == j]) / (2 B tau)
    const double scale = 1.0 / (2.0 * static_cast<double>(b) * tau);
    Matrix g_cos(b, b);
    for (std::size_t i = 0; i < b; ++i) {
        for (std::size_t j = 0; j < b; ++j) {
            const double p_row = std::exp(logits(i, j) - parts.row_lse[i]);
            const double p_col = std::exp(logits(i, j) - parts.col_lse[j]);
            g_cos(i, j) = scale * (p_row + p_col - (i == j ? 2.0 : 0.0));
        }
    }

    // cos(z_i, t_j) = <z_i / |z_i|, t_j / |t_j|>, so
    // dcos/dz_i = (t_hat_j - cos(i, j) z_hat_i) / |z_i|.
    const std::size_t d_out = params.output_dim();
    const std::size_t d_in = params.input_dim();
    std::vector<double> text_norms(b);
    for (std::size_t j = 0; j < b; ++j) {
        text_norms[j] = texts[j].norm();
    }
    Matrix grad(d_in, d_out);
    std::vector<double> dz(d_out);
    for (std::size_t i = 0; i < b; ++i) {
        const double zn = z[i].norm();
        std::fill(dz.begin(), dz.end(), 0.0);
        for (std::size_t j = 0; j < b; ++j) {
            const double g = g_cos(i, j);
            const double along_t = g / text_norms[j];
            const double along_z = g * cos(i, j) / zn;
            for (std::size_t c = 0; c < d_out; ++c) {
                dz[c] += along_t * texts[j][c] - along_z * z[i][c];
            }
        }
        for (std::size_t c = 0; c < d_out; ++c) {
            dz[c] /= zn;
        }
        for (std::size_t r = 0; r < d_in; ++r) {
            const double xr = raw_images[i][r];
            for (std::size_t c = 0; c < d_out; ++c) {
                grad(r, c) += xr * dz[c];
            }
        }
    }
    return {std::move(grad), parts.loss};
}

}  // namespace mvr::train
