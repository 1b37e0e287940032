#pragma once

#include "rblda/dataset.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>

namespace rblda {

/// Per-class train/test split parameters. Training takes
/// max(1, floor(proportion * n_k)) observations of every class.
struct SplitSpec {
    double proportion = 0.5; // in (0, 1]
    std::uint64_t seed = 0;
};

/// Read/write the plain-text .mts container:
///   line 1: "n d1 d2 c"
///   per observation: one label line, then d1 lines of d2 floats
/// Floats are printed with 17 significant digits so a round trip is exact.
MtsDataset load_mts(const std::string& path);
MtsDataset load_mts_stream(std::istream& in, const std::string& name);
void save_mts(const std::string& path, const MtsDataset& data);
void save_mts_stream(std::ostream& out, const MtsDataset& data);

/// Deterministic stratified split; train and test partition the data.
std::pair<MtsDataset, MtsDataset> random_split(const MtsDataset& data,
                                               const SplitSpec& spec);

/// Synthetic separable dataset: class k has mean mean_gap * k on a fixed
/// rank-one pattern, plus i.i.d. Gaussian noise of the given standard
/// deviation. Deterministic per seed.
MtsDataset synth_separable(Index d1, Index d2, std::size_t n_per_class, int classes,
                           double mean_gap, double noise_sigma, std::uint64_t seed);

/// Stack k copies of every observation along the row direction
/// (d1 -> k * d1), used to scale benchmark inputs.
MtsDataset replicate_rows(const MtsDataset& data, int k);

} // namespace rblda
