// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "vfl/types.hpp"

namespace vfl {

struct Dataset {
    Matrix X;  // N x D
    Vector y;  // labels in {-1,+1}
    std::vector<std::string> feature_names;

    Index n() const { return X.rows(); }
    Index dim() const { return X.cols(); }
};

/// Column-wise split of one aligned sample set between the two data holders.
/// Row i of alice_X and bob_X always refer to the same underlying sample.
struct VerticalSplit {
    Matrix alice_X;  // N x d_A
    Matrix bob_X;    // N x d_B
    Vector bob_y;    // labels live with Bob

    Index n() const { return alice_X.rows(); }
    Index dim() const { return alice_X.cols() + bob_X.cols(); }
};

/// Seedable generator with platform-independent output: uniforms are derived
/// from the top 53 bits of mt19937_64 words and gaussians via Box-Muller, so
/// the same seed yields the same stream everywhere.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform on (0, 1].
    double uniform();
    /// Standard normal.
    double gaussian();

  private:
    std::mt19937_64 engine_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

/// Two concentric point rings: n/2 samples on the unit circle (label -1) and
/// n/2 on the radius-`factor` circle (label +1), plus isotropic Gaussian
/// noise of the given standard deviation.
Dataset make_circles(int n, double noise, double factor, std::uint64_t seed);

/// Two interleaving half-circles: upper arc (cos t, sin t) labeled -1, lower
/// arc (1 - cos t, 0.5 - sin t) labeled +1, t in [0, pi], plus Gaussian noise.
Dataset make_moons(int n, double noise, std::uint64_t seed);

/// First `alice_dims` feature columns to Alice, the rest plus the labels to
/// Bob; row order preserved on both sides.
VerticalSplit vertical_split(const Dataset& d, int alice_dims);

/// Reassembles [alice_X | bob_X] into one dataset.
Dataset reassemble(const VerticalSplit& split);

/// Reads a header-first CSV (leading '#' lines are skipped). The label
/// column is mapped to +1 when the cell equals positive_label and -1
/// otherwise. Non-numeric feature cells fail with row/column diagnostics.
Dataset load_csv(const std::string& path, const std::string& label_column,
                 const std::string& positive_label);

/// Writes the dataset as CSV: one schema comment line, a header row with the
/// feature names plus a final `label` column, one sample per row.
void save_csv(const Dataset& d, const std::string& path);

/// Per-feature mean 0 / stdev 1 (population convention). Zero-variance
/// features map to the all-zero column. Column-wise, so applying it per
/// party after a vertical split gives the same values as applying it to the
/// full dataset.
Dataset standardize(const Dataset& d);

}  // namespace vfl
