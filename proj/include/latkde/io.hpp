#pragma once

#include <iosfwd>

#include "latkde/estimator.hpp"
#include "latkde/point_set.hpp"

namespace latkde {

/// Plain-text estimator artifact, every real printed with 17 significant digits:
///
///     latkde-estimator 1
///     d <d>
///     alpha <alpha>
///     N <N>
///     lambda <lambda>
///     z <z_1> ... <z_d>
///     gamma <gamma_1> ... <gamma_d>
///     c <c_1> ... <c_N>
void write_estimator(std::ostream& os, const DensityEstimator& est);
/// Malformed input -> ParseError.
DensityEstimator read_estimator(std::istream& is);

/// One point per row, comma separated, 17 significant digits.
void write_points_csv(std::ostream& os, const PointSet& points);
/// Rows of equal width with every value in [0,1]; the first offending row/column is reported
/// through ParseError. Blank lines are skipped; a header row is not allowed.
PointSet read_points_csv(std::istream& is);

}  // namespace latkde
