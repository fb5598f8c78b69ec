#pragma once

#include <utility>

#include "gtda/types.hpp"

namespace gtda {

/// Standardizes source and target features with statistics computed over the
/// row-wise union of the two matrices. Per-feature mean and population
/// standard deviation come from the stacked rows; ZScore maps v to
/// (v - mean) / std, Std maps v to v / std. Features whose standard deviation
/// vanishes map to 0 under ZScore and pass through unchanged under Std.
///
/// Throws DimensionError on column mismatch or empty inputs, DataError on
/// non-finite entries.
std::pair<Matrix, Matrix> joint_standardize(const Matrix& source,
                                            const Matrix& target,
                                            NormalizationMode mode);

}  // namespace gtda
