#include <gtest/gtest.h>

#include <filesystem>
#include <random>

#include "jpegqf/corpus.hpp"

namespace jpegqf {
namespace {

TEST(WriteMinimalJpeg, RoundTripStandardPair) {
  const TablePair q85 = standard_pair(QualityFactor(85));
  const auto bytes = write_minimal_jpeg(fixture_from_pair(q85));
  EXPECT_EQ(extract_tables(bytes), q85);

  const auto segs = scan_segments(bytes);
  ASSERT_EQ(segs.size(), 4u);
  EXPECT_EQ(segs[0].marker, marker::kDqt);
  EXPECT_EQ(segs[1].marker, marker::kDqt);
  EXPECT_EQ(segs[2].marker, marker::kSof0);
  EXPECT_EQ(segs[3].marker, marker::kSos);
  EXPECT_EQ(bytes[bytes.size() - 2], 0xFF);
  EXPECT_EQ(bytes.back(), marker::kEoi);
}

TEST(WriteMinimalJpeg, SixteenBitTable) {
  FixtureSpec spec;
  QuantMatrix m = QuantMatrix::filled(300);
  m.at(8, 8) = 65535;
  spec.tables.push_back({Precision::SixteenBit, 0, m});
  const auto ex = read_quant_tables(write_minimal_jpeg(spec));
  ASSERT_EQ(ex.definitions.size(), 1u);
  EXPECT_EQ(ex.definitions[0].precision, Precision::SixteenBit);
  EXPECT_EQ(ex.definitions[0].matrix, m);
}

TEST(WriteMinimalJpeg, InvalidSpecs) {
  EXPECT_THROW(write_minimal_jpeg(FixtureSpec{}), std::invalid_argument);
  FixtureSpec wide;
  wide.tables.push_back({Precision::EightBit, 0, QuantMatrix::filled(256)});
  EXPECT_THROW(write_minimal_jpeg(wide), std::invalid_argument);
  FixtureSpec zero;
  zero.tables.push_back({Precision::EightBit, 0, QuantMatrix::filled(0)});
  EXPECT_THROW(write_minimal_jpeg(zero), std::invalid_argument);
  FixtureSpec bad_id;
  bad_id.tables.push_back({Precision::EightBit, 4, QuantMatrix::filled(1)});
  EXPECT_THROW(write_minimal_jpeg(bad_id), std::invalid_argument);
}

TEST(WriteMinimalJpeg, RandomTablesRoundTrip) {
  std::mt19937 rng(3);
  std::uniform_int_distribution<int> step(1, 255), coin(0, 2);
  for (int n = 0; n < 300; ++n) {
    TablePair t;
    const int which = coin(rng);
    if (which != 1) t.luminance = QuantMatrix{};
    if (which != 0) t.chrominance = QuantMatrix{};
    for (Channel c : {Channel::Luminance, Channel::Chrominance})
      if (t[c])
        for (std::size_t k = 0; k < kStepCount; ++k) (*t[c])[k] = static_cast<std::uint16_t>(step(rng));
    EXPECT_EQ(extract_tables(write_minimal_jpeg(fixture_from_pair(t))), t);
  }
}

TEST(StandardCorpus, Ranges) {
  const auto mid = standard_corpus(quality_range(50, 100));
  ASSERT_EQ(mid.size(), 51u);
  for (const Fixture& fx : mid)
    EXPECT_EQ(identify(extract_tables(fx.bytes), ChannelMask::both()), IdentificationOutcome(Exact{fx.quality}));

  const auto full = standard_corpus(quality_range(1, 100));
  ASSERT_EQ(full.size(), 100u);
  EXPECT_EQ(full.front().quality.value(), 1);
  EXPECT_EQ(full.back().quality.value(), 100);

  EXPECT_TRUE(standard_corpus({}).empty());
  EXPECT_THROW(standard_corpus({50, 101}), std::invalid_argument);
  EXPECT_THROW(standard_corpus({0}), std::invalid_argument);
}

TEST(StandardCorpus, Deterministic) {
  EXPECT_EQ(standard_corpus({77})[0].bytes, standard_corpus({77})[0].bytes);
}

TEST(Perturb, Examples) {
  const FixtureSpec q75 = standard_fixture(QualityFactor(75));
  const FixtureSpec edited = perturb(q75, Channel::Luminance, 8, 8, -1);
  EXPECT_EQ(edited.tables[0].matrix.at(8, 8), 49);
  EXPECT_EQ(q75.tables[0].matrix.at(8, 8), 50);
  ASSERT_EQ(edited.perturbations.size(), 1u);
  EXPECT_EQ(edited.perturbations[0], (Perturbation{Channel::Luminance, 8, 8, 49}));
  std::size_t changed = 0;
  for (std::size_t t = 0; t < q75.tables.size(); ++t)
    for (std::size_t k = 0; k < kStepCount; ++k) changed += q75.tables[t].matrix[k] != edited.tables[t].matrix[k];
  EXPECT_EQ(changed, 1u);

  const FixtureSpec same = perturb(q75, Channel::Chrominance, 3, 4, 0);
  EXPECT_EQ(same.tables, q75.tables);

  EXPECT_THROW(perturb(standard_fixture(QualityFactor(100)), Channel::Luminance, 1, 1, -1), std::invalid_argument);
  EXPECT_THROW(perturb(standard_fixture(QualityFactor(1)), Channel::Luminance, 1, 1, 1), std::invalid_argument);
  EXPECT_THROW(perturb(q75, Channel::Luminance, 9, 1, 1), std::invalid_argument);
  EXPECT_THROW(perturb(fixture_from_pair({QuantMatrix::filled(3), std::nullopt}), Channel::Chrominance, 1, 1, 1),
               std::invalid_argument);
}

TEST(Perturb, NeverIdentifiesAsExact) {
  for (int q = 1; q <= 100; ++q) {
    const FixtureSpec base = standard_fixture(QualityFactor(q));
    for (Channel c : {Channel::Luminance, Channel::Chrominance})
      for (int row = 1; row <= 8; ++row)
        for (int col = 1; col <= 8; ++col)
          for (int delta : {-1, 1}) {
            FixtureSpec edited;
            try {
              edited = perturb(base, c, row, col, delta);
            } catch (const std::invalid_argument&) {
              continue;
            }
            const TablePair t = extract_tables(write_minimal_jpeg(edited));
            const auto outcome = identify(t, ChannelMask::both());
            EXPECT_FALSE(std::holds_alternative<Exact>(outcome)) << fixture_name(edited);
          }
  }
}

TEST(FixtureFiles, NamesAndContents) {
  EXPECT_EQ(fixture_name(standard_fixture(QualityFactor(75))), "qf075.jpg");
  EXPECT_EQ(fixture_name(standard_fixture(QualityFactor(100))), "qf100.jpg");
  EXPECT_EQ(fixture_name(perturb(standard_fixture(QualityFactor(75)), Channel::Luminance, 8, 8, -1)),
            "qf075_lum-8-8-to49.jpg");
  EXPECT_EQ(fixture_name(fixture_from_pair({QuantMatrix::filled(3), std::nullopt})), "custom.jpg");

  const auto dir = std::filesystem::temp_directory_path() / "jpegqf_corpus_test";
  std::filesystem::remove_all(dir);
  const auto path = write_fixture_file(dir, standard_fixture(QualityFactor(64)));
  EXPECT_EQ(path.filename(), "qf064.jpg");
  EXPECT_EQ(std::filesystem::file_size(path), write_minimal_jpeg(standard_fixture(QualityFactor(64))).size());
  std::filesystem::remove_all(dir);
}

}  // namespace
}  // namespace jpegqf
