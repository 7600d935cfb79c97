#include "generators.hpp"

#include <cmath>
#include <numbers>

#include <fmt/format.h>

namespace mvr::testing {

std::int64_t Random::integer(std::int64_t lo, std::int64_t hi) {
    const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<std::int64_t>(engine_() % span);
}

double Random::gaussian() {
    double u1 = uniform();
    while (u1 <= 0.0) {
        u1 = uniform();
    }
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

EmbeddingVector Random::vector(std::size_t dim) {
    std::vector<double> v(dim);
    for (auto& x : v) {
        x = static_cast<double>(gaussian_f32());
    }
    return EmbeddingVector(std::move(v));
}

std::string Random::word() {
    static constexpr std::string_view kWords[] = {
        "red", "small", "cup", "on", "the", "left", "shelf", "near", "a", "window",
        "blue", "bicycle", "behind", "tree", "person", "wearing", "hat", "sign", "street", "dog"};
    return std::string(kWords[engine_() % std::size(kWords)]);
}

ItemEmbeddingSet random_item(Random& rng, const std::string& id, std::size_t k, std::size_t dim) {
    static constexpr std::string_view kLabels[] = {"left_upper", "right_upper", "left_lower",
                                                   "right_lower", "summary"};
    ItemEmbeddingSet item{id, {}};
    for (std::size_t i = 0; i < k; ++i) {
        SourceTag tag;
        if (i < 4) {
            tag = {SourceKind::RegionalPrompt, std::string(kLabels[i])};
        } else if (i == 4) {
            tag = {SourceKind::Global, "summary"};
        } else {
            tag = {SourceKind::Crop, std::to_string(i - 5)};
        }
        item.embeddings.push_back({tag, rng.vector(dim)});
    }
    return item;
}

GalleryIndex random_gallery(std::uint64_t seed, std::size_t n, std::size_t k, std::size_t dim) {
    Random rng(seed);
    std::vector<ItemEmbeddingSet> items;
    items.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        items.push_back(random_item(rng, fmt::format("img_{:05}", i), k, dim));
    }
    return GalleryIndex::build(static_cast<std::uint32_t>(dim), std::move(items));
}

std::vector<QueryRecord> random_queries(std::uint64_t seed, const GalleryIndex& gallery, std::size_t count) {
    Random rng(seed);
    static constexpr std::string_view kTiers[] = {"full_res", "zoom2", "zoom3"};
    std::vector<QueryRecord> queries;
    for (std::size_t i = 0; i < count; ++i) {
        const auto& target = gallery.item(static_cast<std::size_t>(rng.next() % gallery.size()));
        // a noisy copy of one of the target's embeddings
        const auto& source = target.embeddings[rng.next() % target.embeddings.size()].vector;
        std::vector<double> v(source.dim());
        for (std::size_t d = 0; d < v.size(); ++d) {
            v[d] = source[d] + 0.8 * rng.gaussian();
        }
        queries.push_back({fmt::format("q_{:05}", i), rng.word() + " " + rng.word(), target.item_id,
                           EmbeddingVector(std::move(v)), std::string(kTiers[i % 3])});
    }
    return queries;
}

train::Matrix random_orthogonal(Random& rng, std::size_t dim) {
    train::Matrix q(dim, dim);
    for (std::size_t c = 0; c < dim; ++c) {
        std::vector<double> v(dim);
        for (auto& x : v) {
            x = rng.gaussian();
        }
        for (std::size_t p = 0; p < c; ++p) {
            double proj = 0.0;
            for (std::size_t r = 0; r < dim; ++r) {
                proj += v[r] * q(r, p);
            }
            for (std::size_t r = 0; r < dim; ++r) {
                v[r] -= proj * q(r, p);
            }
        }
        double n = 0.0;
        for (double x : v) {
            n += x * x;
        }
        n = std::sqrt(n);
        for (std::size_t r = 0; r < dim; ++r) {
            q(r, c) = v[r] / n;
        }
    }
    return q;
}

namespace {

std::vector<train::RegionalTrainSample> planted_samples(Random& rng, const train::Matrix& q,
                                                        std::size_t n, const std::string& prefix) {
    const std::size_t dim = q.rows();
    std::vector<train::RegionalTrainSample> out;
    for (std::size_t i = 0; i < n; ++i) {
        train::RegionalTrainSample s;
        s.item_id = fmt::format("{}_{:04}", prefix, i);
        for (std::size_t r = 0; r < 4; ++r) {
            EmbeddingVector x = rng.vector(dim);
            std::vector<double> t(dim, 0.0);
            for (std::size_t a = 0; a < dim; ++a) {
                for (std::size_t b = 0; b < dim; ++b) {
                    t[a] += q(a, b) * x[b];
                }
            }
            for (auto& v : t) {
                v = static_cast<double>(static_cast<float>(v));
            }
            s.regions[r] = {fmt::format("{} {} {}", rng.word(), rng.word(), rng.word()), std::move(x),
                            EmbeddingVector(std::move(t))};
        }
        out.push_back(std::move(s));
    }
    return out;
}

}  // namespace

PlantedData planted_alignment(std::uint64_t seed, std::size_t n_train, std::size_t n_held_out,
                              std::size_t dim) {
    Random rng(seed);
    PlantedData data;
    data.rotation = random_orthogonal(rng, dim);
    data.train = planted_samples(rng, data.rotation, n_train, "train");
    data.held_out = planted_samples(rng, data.rotation, n_held_out, "held");
    return data;
}

bench::AnnotatedSample random_annotation(Random& rng, const std::string& id) {
    bench::AnnotatedSample s;
    s.image_id = id;
    s.image = {rng.integer(3, 4000), rng.integer(3, 4000)};
    const std::int64_t w = rng.integer(1, s.image.width);
    const std::int64_t h = rng.integer(1, s.image.height);
    s.bbox = {rng.integer(0, s.image.width - w), rng.integer(0, s.image.height - h), w, h};
    const auto words = rng.integer(1, 30);
    for (std::int64_t i = 0; i < words; ++i) {
        s.caption += (i ? " " : "") + rng.word();
    }
    if (rng.next() % 4 != 0) {
        s.mask_count = rng.integer(0, 400);
    }
    return s;
}

}  // namespace mvr::testing
