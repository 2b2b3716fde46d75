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

#include "chfkit/eval.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <Eigen/Dense>

#include "chfkit/error.h"

namespace chfkit {

EvalReport metrics(std::span<const double> preds,
                   std::span<const double> actuals, std::string model) {
  if (preds.empty() || preds.size() != actuals.size()) {
    throw LengthMismatch("metrics: need equal nonzero lengths, got " +
                         std::to_string(preds.size()) + " predictions and " +
                         std::to_string(actuals.size()) + " actuals");
  }
  EvalReport r;
  r.model = std::move(model);
  r.n_points = preds.size();
  const double n = static_cast<double>(r.n_points);

  double sum_abs = 0.0;
  double sum_sq = 0.0;
  std::size_t over = 0;
  for (std::size_t i = 0; i < preds.size(); ++i) {
    if (!(actuals[i] > 0.0)) {
      throw NonpositiveActual("metrics: actual value at index " +
                              std::to_string(i) + " is not positive");
    }
    const double rel = (preds[i] - actuals[i]) / actuals[i];
    const double e = 100.0 * rel;
    r.rows.push_back({actuals[i], preds[i], e});
    sum_abs += std::abs(e);
    sum_sq += rel * rel;
    r.max_error = std::max(r.max_error, std::abs(e));
    over += std::abs(e) > 10.0;
  }
  r.mu_error = sum_abs / n;
  r.rrmse = 100.0 * std::sqrt(sum_sq / n);
  r.f_gt10 = 100.0 * static_cast<double>(over) / n;
  if (r.n_points > 1) {
    double ss = 0.0;
    for (const ParityRow& row : r.rows) {
      const double d = std::abs(row.rel_error_pct) - r.mu_error;
      ss += d * d;
    }
    r.std_error = std::sqrt(ss / (n - 1.0));
  }
  return r;
}

Point2 Pca2::project(const Features& x) const {
  Point2 p{0.0, 0.0};
  for (std::size_t j = 0; j < kFeatureCount; ++j) {
    const double z = (x[j] - mean[j]) / scale[j];
    p.x += axes[0][j] * z;
    p.y += axes[1][j] * z;
  }
  return p;
}

double Pca2::first_component_share() const {
  double total = 0.0;
  for (double v : eigenvalues) total += std::max(v, 0.0);
  return total > 0.0 ? eigenvalues[0] / total : 0.0;
}

Pca2 pca_fit(std::span<const Features> train) {
  const std::size_t n = train.size();
  if (n < 3) throw DegenerateFeature("pca: need at least three rows");
  constexpr auto d = static_cast<Eigen::Index>(kFeatureCount);

  Pca2 pca;
  Eigen::MatrixXd z(static_cast<Eigen::Index>(n), d);
  for (std::size_t j = 0; j < kFeatureCount; ++j) {
    double sum = 0.0;
    for (const Features& f : train) sum += f[j];
    const double mean = sum / static_cast<double>(n);
    double ss = 0.0;
    for (const Features& f : train) ss += (f[j] - mean) * (f[j] - mean);
    const double sd = std::sqrt(ss / static_cast<double>(n));
    if (!(sd > 0.0)) {
      throw DegenerateFeature("pca: feature " + std::to_string(j) + " is constant");
    }
    pca.mean[j] = mean;
    pca.scale[j] = sd;
    for (std::size_t i = 0; i < n; ++i) {
      z(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          (train[i][j] - mean) / sd;
    }
  }
  const Eigen::MatrixXd cov =
      (z.transpose() * z) / static_cast<double>(n - 1);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
  if (solver.info() != Eigen::Success) {
    throw DegenerateFeature("pca: eigendecomposition failed");
  }
  // Eigen returns ascending eigenvalues.
  for (Eigen::Index k = 0; k < d; ++k) {
    pca.eigenvalues[static_cast<std::size_t>(k)] = solver.eigenvalues()(d - 1 - k);
  }
  for (std::size_t a = 0; a < 2; ++a) {
    Eigen::VectorXd v = solver.eigenvectors().col(d - 1 - static_cast<Eigen::Index>(a));
    Eigen::Index arg = 0;
    v.cwiseAbs().maxCoeff(&arg);
    if (v(arg) < 0.0) v = -v;
    for (std::size_t j = 0; j < kFeatureCount; ++j) {
      pca.axes[a][j] = v(static_cast<Eigen::Index>(j));
    }
    pca.explained_variance[a] = pca.eigenvalues[a];
  }
  return pca;
}

double orientation(const Point2& a, const Point2& b, const Point2& c) {
  return (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
}

Hull2 convex_hull(std::span<const Point2> points) {
  std::vector<Point2> pts(points.begin(), points.end());
  std::sort(pts.begin(), pts.end(), [](const Point2& a, const Point2& b) {
    return a.x < b.x || (a.x == b.x && a.y < b.y);
  });
  pts.erase(std::unique(pts.begin(), pts.end(),
                        [](const Point2& a, const Point2& b) {
                          return a.x == b.x && a.y == b.y;
                        }),
            pts.end());
  if (pts.size() < 3) throw DegenerateHull("hull: fewer than three distinct points");

  std::vector<Point2> hull(2 * pts.size());
  std::size_t k = 0;
  for (const Point2& p : pts) {
    while (k >= 2 && orientation(hull[k - 2], hull[k - 1], p) <= 0.0) --k;
    hull[k++] = p;
  }
  const std::size_t lower = k + 1;
  for (std::size_t i = pts.size() - 1; i-- > 0;) {
    while (k >= lower && orientation(hull[k - 2], hull[k - 1], pts[i]) <= 0.0) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);  // last point repeats the first
  if (hull.size() < 3) throw DegenerateHull("hull: training projections are collinear");
  return Hull2{std::move(hull)};
}

bool Hull2::contains(const Point2& p) const {
  // Edge tolerance scales with the squared extent of the hull.
  double extent = 0.0;
  for (const Point2& v : vertices) {
    extent = std::max({extent, std::abs(v.x), std::abs(v.y)});
  }
  const double tol = 1e-12 * extent * extent;
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    const Point2& a = vertices[i];
    const Point2& b = vertices[(i + 1) % vertices.size()];
    if (orientation(a, b, p) < -tol) return false;
  }
  return true;
}

std::size_t Containment::inside_count() const {
  return static_cast<std::size_t>(std::count(inside.begin(), inside.end(), true));
}

Containment hull_and_containment(std::span<const Point2> train,
                                 std::span<const Point2> test) {
  Containment c{convex_hull(train), {}};
  c.inside.reserve(test.size());
  for (const Point2& p : test) c.inside.push_back(c.hull.contains(p));
  return c;
}

namespace {

void append_number(std::string& out, double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  out.append(buf, ptr);
}

}  // namespace

void write_parity(std::ostream& out, const EvalReport& report) {
  std::string text(kParityHeader);
  text += '\n';
  double lo = 0.0;
  double hi = 0.0;
  for (std::size_t i = 0; i < report.rows.size(); ++i) {
    const ParityRow& r = report.rows[i];
    append_number(text, r.experimental);
    text += ',';
    append_number(text, r.predicted);
    text += ',';
    append_number(text, r.rel_error_pct);
    text += ',';
    text += report.model;
    text += '\n';
    const double a = std::min(r.experimental, r.predicted);
    const double b = std::max(r.experimental, r.predicted);
    lo = i == 0 ? a : std::min(lo, a);
    hi = i == 0 ? b : std::max(hi, b);
  }
  if (!report.rows.empty()) {
    text += "\n\n# identity line (gnuplot: index 1)\n";
    append_number(text, lo);
    text += ',';
    append_number(text, lo);
    text += '\n';
    append_number(text, hi);
    text += ',';
    append_number(text, hi);
    text += '\n';
  }
  out << text;
}

void parity_export(const EvalReport& report, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  write_parity(out, report);
  out.flush();
  if (!out) throw IoError("write failed: " + path.string());
}

std::vector<ParityRow> read_parity(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kParityHeader) {
    throw ParseError("parity file: header mismatch");
  }
  std::vector<ParityRow> rows;
  while (std::getline(in, line) && !line.empty()) {
    std::array<double, 3> v{};
    const char* p = line.data();
    const char* end = line.data() + line.size();
    for (double& x : v) {
      auto [next, ec] = std::from_chars(p, end, x);
      if (ec != std::errc() || next == end || *next != ',') {
        throw ParseError("parity file: malformed row '" + line + "'");
      }
      p = next + 1;
    }
    rows.push_back({v[0], v[1], v[2]});
  }
  return rows;
}

}  // namespace chfkit
