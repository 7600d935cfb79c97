#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "mvr/train/infonce.hpp"
#include "mvr/train/sampler.hpp"

namespace mvr::train {

struct TrainConfig {
    double lr = 0.5;
    std::size_t epochs = 100;
    std::size_t batch_size = 32;
    double tau = 0.05;
    double momentum = 0.9;
    std::uint64_t seed = 0;
    RegionPolicy policy = RegionPolicy::Random;
};

/// Throws ConfigInvalid (lr < 0, epochs == 0, batch_size < 2, momentum
/// outside [0, 1)) or TemperatureNonPositive.
void validate(const TrainConfig& config);

struct TrainResult {
    AdapterParams params;
    // Entry 0 is the loss before training, entry e the loss after epoch e.
    // Each entry is the mean batch loss of a fixed evaluation pass (dataset
    // order, region choices from one seed), so it depends on the weights only.
    std::vector<double> loss_curve;
};

/// Mini-batch gradient descent with optional heavy-ball momentum. Every step
/// draws one region per sample via random_regional_choice; batches are
/// reshuffled each epoch. A trailing batch of one sample is merged into the
/// previous batch. Bit-reproducible for a given seed.
///
/// Starts from `init` when given, otherwise from the (rectangular) identity.
TrainResult train_adapter(std::span<const RegionalTrainSample> dataset, const TrainConfig& config,
                          const std::optional<AdapterParams>& init = std::nullopt);

/// Mean loss of the fixed evaluation pass used for loss_curve entries.
double evaluation_loss(std::span<const RegionalTrainSample> dataset, const AdapterParams& params,
                       std::size_t batch_size, std::uint64_t eval_seed, RegionPolicy policy);

}  // namespace mvr::train
