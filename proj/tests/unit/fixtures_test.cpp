#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "mvr/binary_io.hpp"
#include "mvr/query_set.hpp"
#include "mvr/semb.hpp"
#include "mvr/train/train_data.hpp"
#include "temp_dir.hpp"

namespace mvr {
namespace {

const std::filesystem::path kFixtureDir = MVR_FIXTURE_DIR;

TEST(Fixtures, RegenerateByteIdentical) {
    testing::TempDir dir;
    testing::write_fixtures(dir.path());
    for (const auto& name : testing::fixture_files()) {
        ASSERT_TRUE(std::filesystem::exists(kFixtureDir / name)) << name;
        EXPECT_EQ(read_file(dir / name), read_file(kFixtureDir / name)) << name;
    }
}

TEST(Fixtures, CheckedInFilesLoad) {
    const auto g = load_gallery(kFixtureDir / "gallery.semb");
    EXPECT_EQ(g.size(), 40u);
    EXPECT_EQ(g.dim(), 16u);
    EXPECT_EQ(load_queries(kFixtureDir / "queries.jsonl").size(), 24u);
    EXPECT_EQ(train::load_train_samples(kFixtureDir / "train.jsonl", train::VectorEncoding::Inline),
              train::load_train_samples(kFixtureDir / "train_base64.jsonl", train::VectorEncoding::Base64));
}

}  // namespace
}  // namespace mvr
