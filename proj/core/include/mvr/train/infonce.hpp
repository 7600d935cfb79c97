#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "mvr/embedding.hpp"

namespace mvr::train {

// Dense row-major matrix of doubles.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    /// Ones on the main diagonal, zeros elsewhere; works for non-square shapes.
    static Matrix identity(std::size_t rows, std::size_t cols);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
    std::span<double> data() noexcept { return data_; }
    std::span<const double> data() const noexcept { return data_; }

    double frobenius_norm() const noexcept;
    bool operator==(const Matrix&) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

// Linear adapter on the image side. An image embedding x (length rows) maps
// to x * weights (length cols) before cosine scoring; text embeddings are
// frozen.
struct AdapterParams {
    Matrix weights;
    double tau = 0.05;

    std::size_t input_dim() const noexcept { return weights.rows(); }
    std::size_t output_dim() const noexcept { return weights.cols(); }
    bool operator==(const AdapterParams&) const = default;
};

/// Throws TemperatureNonPositive for tau <= 0 (or non-finite tau) and
/// ConfigInvalid for non-finite weights.
void validate(const AdapterParams& params);

EmbeddingVector apply_adapter(const AdapterParams& params, const EmbeddingVector& x);

/// Symmetric in-batch contrastive loss
///   L = (CE(images -> texts) + CE(texts -> images)) / 2
/// where each cross entropy is the mean over the batch of
///   -log softmax_j(cos(a_i, b_j) / tau)[i],
/// evaluated with a max-shifted log-sum-exp.
double infonce_loss(std::span<const EmbeddingVector> images, std::span<const EmbeddingVector> texts,
                    double tau);

struct LossGradient {
    Matrix grad;  // dL/dW, same shape as the adapter weights
    double loss = 0.0;
};

/// Loss and its analytic gradient with respect to the adapter weights, with
/// images passed through the adapter and texts held fixed.
LossGradient loss_gradient(std::span<const EmbeddingVector> raw_images,
                           std::span<const EmbeddingVector> texts, const AdapterParams& params);

}  // namespace mvr::train
