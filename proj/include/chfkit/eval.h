// Copyright 2026 The chfkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef CHFKIT_EVAL_H_
#define CHFKIT_EVAL_H_

#include <array>
#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "chfkit/dataset.h"

namespace chfkit {

struct ParityRow {
  double experimental;   // kW/m^2
  double predicted;      // kW/m^2
  double rel_error_pct;  // 100 (predicted - experimental) / experimental
};

/// Error statistics of a model over a set of points. All metrics are in
/// percent and built from the signed relative errors e_i of each row.
struct EvalReport {
  double mu_error = 0.0;   // mean |e_i|
  double max_error = 0.0;  // max |e_i|
  double std_error = 0.0;  // sample (n - 1) standard deviation of |e_i|
  double rrmse = 0.0;      // sqrt(mean(e_i^2))
  double f_gt10 = 0.0;     // share of points with |e_i| > 10, strictly
  std::size_t n_points = 0;
  std::vector<ParityRow> rows;
  std::string model;  // tag written to the parity file
};

/// Throws LengthMismatch for empty or unequal inputs and NonpositiveActual
/// when any actual value is <= 0.
EvalReport metrics(std::span<const double> preds, std::span<const double> actuals,
                   std::string model = {});

struct Point2 {
  double x;
  double y;
};

/// Two-component PCA of z-scored features.
struct Pca2 {
  Features mean{};
  Features scale{};
  std::array<Features, 2> axes{};
  std::array<double, 2> explained_variance{};
  Features eigenvalues{};  // all five, descending

  Point2 project(const Features& x) const;
  /// Share of total variance captured by the first component.
  double first_component_share() const;
};

/// Centers and scales each feature by its population mean and standard
/// deviation, eigendecomposes the (n - 1)-normalized covariance, and keeps
/// the top two axes with their largest-magnitude entry positive.
/// Throws DegenerateFeature for fewer than three rows or a constant feature.
Pca2 pca_fit(std::span<const Features> train);

/// Counter-clockwise convex hull without collinear vertices.
struct Hull2 {
  std::vector<Point2> vertices;

  /// Boundary points count as inside.
  bool contains(const Point2& p) const;
};

/// Andrew's monotone chain. Throws DegenerateHull when fewer than three
/// non-collinear points are given.
Hull2 convex_hull(std::span<const Point2> points);

struct Containment {
  Hull2 hull;
  std::vector<bool> inside;  // one per test point

  std::size_t inside_count() const;
};

Containment hull_and_containment(std::span<const Point2> train,
                                 std::span<const Point2> test);

/// Twice the signed area of (a, b, c); positive for a left turn.
double orientation(const Point2& a, const Point2& b, const Point2& c);

/// CSV header of the parity file.
inline constexpr std::string_view kParityHeader =
    "experimental_kw_m2,predicted_kw_m2,rel_error_pct,model";

/// One row per point, then (for n > 0) two blank lines and a gnuplot
/// `index 1` block holding the identity line across the data range.
void write_parity(std::ostream& out, const EvalReport& report);
void parity_export(const EvalReport& report, const std::filesystem::path& path);

/// Reads back the data rows of a parity file; stops at the first blank line.
std::vector<ParityRow> read_parity(std::istream& in);

}  // namespace chfkit

#endif  // CHFKIT_EVAL_H_
