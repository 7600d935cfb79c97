#include "fixtures.hpp"

#include "generators.hpp"
#include "mvr/bench/annotation_io.hpp"
#include "mvr/binary_io.hpp"
#include "mvr/semb.hpp"
#include "mvr/train/train_data.hpp"

namespace mvr::testing {

const std::vector<std::string>& fixture_files() {
    static const std::vector<std::string> files = {
        "gallery.semb", "queries.jsonl", "train.jsonl", "train_base64.jsonl", "annotations.jsonl",
    };
    return files;
}

void write_fixtures(const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    const auto gallery = random_gallery(7, 40, 5, 16);
    save_gallery(gallery, dir / "gallery.semb");
    save_queries(random_queries(8, gallery, 24), dir / "queries.jsonl");

    const auto planted = planted_alignment(9, 32, 0, 8);
    train::save_train_samples(planted.train, dir / "train.jsonl", train::VectorEncoding::Inline);
    train::save_train_samples(planted.train, dir / "train_base64.jsonl", train::VectorEncoding::Base64);

    Random rng(10);
    std::vector<bench::AnnotatedSample> annotations;
    for (int i = 0; i < 25; ++i) {
        annotations.push_back(random_annotation(rng, "sample_" + std::to_string(i)));
    }
    write_text_file(dir / "annotations.jsonl", bench::format_annotations(annotations));
}

}  // namespace mvr::testing
