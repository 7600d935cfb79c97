#include "mvr/train/trainer.hpp"

#include <cmath>
#include <numeric>

#include <fmt/format.h>

#include "mvr/error.hpp"

namespace mvr::train {
namespace {

// Splits [0, n) into consecutive batches of `batch_size`; a final batch of a
// single element joins the one before it.
std::vector<std::pair<std::size_t, std::size_t>> batch_bounds(std::size_t n, std::size_t batch_size) {
    std::vector<std::pair<std::size_t, std::size_t>> bounds;
    for (std::size_t begin = 0; begin < n; begin += batch_size) {
        bounds.emplace_back(begin, std::min(n, begin + batch_size));
    }
    if (bounds.size() > 1 && bounds.back().second - bounds.back().first < 2) {
        const std::size_t end = bounds.back().second;
        bounds.pop_back();
        bounds.back().second = end;
    }
    return bounds;
}

std::vector<const RegionalTrainSample*> gather(std::span<const RegionalTrainSample> dataset,
                                               std::span<const std::size_t> order, std::size_t begin,
                                               std::size_t end) {
    std::vector<const RegionalTrainSample*> out;
    out.reserve(end - begin);
    for (std::size_t i = begin; i < end; ++i) {
        out.push_back(&dataset[order[i]]);
    }
    return out;
}

}  // namespace

void validate(const TrainConfig& config) {
    if (!std::isfinite(config.lr) || config.lr < 0.0) {
        fail(ErrorCode::ConfigInvalid, fmt::format("learning rate must be >= 0, got {}", config.lr));
    }
    if (config.epochs == 0) {
        fail(ErrorCode::ConfigInvalid, "epochs must be at least 1");
    }
    if (config.batch_size < 2) {
        fail(ErrorCode::ConfigInvalid, "batch size must be at least 2");
    }
    if (!std::isfinite(config.momentum) || config.momentum < 0.0 || config.momentum >= 1.0) {
        fail(ErrorCode::ConfigInvalid, fmt::format("momentum must be in [0, 1), got {}", config.momentum));
    }
    if (!std::isfinite(config.tau) || !(config.tau > 0.0)) {
        fail(ErrorCode::TemperatureNonPositive,
             fmt::format("temperature must be positive, got {}", config.tau));
    }
}

double evaluation_loss(std::span<const RegionalTrainSample> dataset, const AdapterParams& params,
                       std::size_t batch_size, std::uint64_t eval_seed, RegionPolicy policy) {
    std::vector<std::size_t> order(dataset.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    const auto bounds = batch_bounds(dataset.size(), batch_size);
    double total = 0.0;
    for (std::size_t b = 0; b < bounds.size(); ++b) {
        const auto members = gather(dataset, order, bounds[b].first, bounds[b].second);
        const TrainBatch batch = random_regional_choice(members, eval_seed + b, policy);
        std::vector<EmbeddingVector> adapted;
        adapted.reserve(batch.size());
        for (const auto& x : batch.images) {
            adapted.push_back(apply_adapter(params, x));
        }
        total += infonce_loss(adapted, batch.texts, params.tau);
    }
    return total / static_cast<double>(bounds.size());
}

TrainResult train_adapter(std::span<const RegionalTrainSample> dataset, const TrainConfig& config,
                          const std::optional<AdapterParams>& init) {
    validate(config);
    if (dataset.size() < 2) {
        fail(ErrorCode::ConfigInvalid, "training needs at least two samples");
    }
    for (const auto& sample : dataset) {
        validate_sample(sample, config.policy);
    }
    const std::size_t d_in = dataset.front().regions[0].image.dim();
    const std::size_t d_out = dataset.front().regions[0].text_embedding.dim();
    for (const auto& sample : dataset) {
        if (sample.regions[0].image.dim() != d_in || sample.regions[0].text_embedding.dim() != d_out) {
            fail(ErrorCode::DimensionMismatch,
                 fmt::format("sample '{}' dimensions differ from the first sample", sample.item_id));
        }
    }

    AdapterParams params = init.value_or(AdapterParams{Matrix::identity(d_in, d_out), config.tau});
    params.tau = config.tau;
    validate(params);
    if (params.input_dim() != d_in || params.output_dim() != d_out) {
        fail(ErrorCode::DimensionMismatch,
             fmt::format("initial adapter is {}x{}, data needs {}x{}", params.input_dim(),
                         params.output_dim(), d_in, d_out));
    }

    Rng rng(config.seed);
    const std::uint64_t eval_seed = rng();
    TrainResult result;
    result.loss_curve.push_back(
        evaluation_loss(dataset, params, config.batch_size, eval_seed, config.policy));

    Matrix velocity(d_in, d_out);
    std::vector<std::size_t> order(dataset.size());
    const auto bounds = batch_bounds(dataset.size(), config.batch_size);
    for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
        std::iota(order.begin(), order.end(), std::size_t{0});
        shuffle_indices(order, rng);
        for (const auto& [begin, end] : bounds) {
            const auto members = gather(dataset, order, begin, end);
            const TrainBatch batch = random_regional_choice(members, rng(), config.policy);
            const LossGradient lg = loss_gradient(batch.images, batch.texts, params);
            auto v = velocity.data();
            auto w = params.weights.data();
            auto g = lg.grad.data();
            for (std::size_t i = 0; i < w.size(); ++i) {
                v[i] = config.momentum * v[i] + g[i];
                w[i] -= config.lr * v[i];
            }
        }
        result.loss_curve.push_back(
            evaluation_loss(dataset, params, config.batch_size, eval_seed, config.policy));
    }
    result.params = std::move(params);
    return result;
}

}  // namespace mvr::train
