#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "vie2d/mesh.hpp"

namespace vie2d {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// The merge pattern yields mean edge lengths of about 1.12x the ring
// spacing at the default chord fraction.  Ring counts are the largest
// that keep the mean edge above 0.77 h (floor rule), which also
// reproduces the expected unknown count at the reference density.  Where
// ring quantization alone would overshoot the mean-edge band (a single
// coarse ring), the sector chords are shortened instead.
constexpr double kRingFloorFactor = 1.124 / 0.77;
constexpr double kDefaultChordFraction = 1.05;
constexpr double kMaxMeanPerH = 1.14;

// Mean edge per ring spacing as a function of the chord fraction c:
// one third of the edges are chords, the rest near-radial crossings.
double mean_per_spacing(double c) {
  return c / 3.0 + 2.0 / 3.0 * std::sqrt(1.0 + 0.3 * c * c);
}

double chord_fraction_for(double target_mean_per_spacing) {
  double lo = 0.45, hi = kDefaultChordFraction;
  if (mean_per_spacing(hi) <= target_mean_per_spacing) return hi;
  if (mean_per_spacing(lo) >= target_mean_per_spacing) return lo;
  for (int it = 0; it < 40; ++it) {
    double mid = 0.5 * (lo + hi);
    (mean_per_spacing(mid) > target_mean_per_spacing ? hi : lo) = mid;
  }
  return lo;
}

}  // namespace

Mesh build_layered_disk_mesh(std::span<const double> layer_radii,
                             double h_target) {
  if (layer_radii.empty())
    throw std::invalid_argument("disk mesh: need at least one layer radius");
  if (!(h_target > 0.0))
    throw std::invalid_argument("disk mesh: h_target must be positive");
  double prev = 0.0;
  double min_thickness = std::numeric_limits<double>::infinity();
  for (double r : layer_radii) {
    if (!(r > prev))
      throw std::invalid_argument(
          "disk mesh: layer radii must be strictly increasing and positive");
    min_thickness = std::min(min_thickness, r - prev);
    prev = r;
  }
  if (h_target > min_thickness)
    throw std::invalid_argument(
        "disk mesh: h_target exceeds the smallest layer thickness "
        "(degenerate layering)");

  // Ring radii: each annulus subdivided uniformly, boundaries exactly on
  // the layer circles.
  std::vector<double> ring_radius;   // radius of ring k (k >= 1)
  std::vector<int> ring_region;      // region of the band ending at ring k
  std::vector<double> ring_chord;    // chord target for that band
  prev = 0.0;
  for (size_t layer = 0; layer < layer_radii.size(); ++layer) {
    double thickness = layer_radii[layer] - prev;
    int n = std::max(
        1, int(std::floor(thickness * kRingFloorFactor / h_target)));
    double spacing = thickness / double(n);
    double c = kDefaultChordFraction;
    if (mean_per_spacing(c) * spacing > kMaxMeanPerH * h_target)
      c = chord_fraction_for(kMaxMeanPerH * h_target / spacing);
    for (int j = 1; j <= n; ++j) {
      ring_radius.push_back(prev + thickness * double(j) / double(n));
      ring_region.push_back(int(layer));
      ring_chord.push_back(c * spacing);
    }
    prev = layer_radii[layer];
  }
  const int rings = int(ring_radius.size());

  std::vector<Vector2d> vertices;
  std::vector<int> ring_start(rings + 1, 0);  // first vertex index of ring k
  std::vector<int> ring_count(rings + 1, 1);
  vertices.emplace_back(0.0, 0.0);            // ring 0 = centre point
  for (int k = 1; k <= rings; ++k) {
    ring_start[k] = int(vertices.size());
    double r = ring_radius[k - 1];
    int count =
        std::max(6, int(std::lround(kTwoPi * r / ring_chord[k - 1])));
    ring_count[k] = count;
    for (int m = 0; m < count; ++m) {
      double a = kTwoPi * double(m) / double(count);
      vertices.emplace_back(r * std::cos(a), r * std::sin(a));
    }
  }

  std::vector<Triangle> triangles;
  // Innermost band: fan around the centre.
  for (int m = 0; m < ring_count[1]; ++m)
    triangles.push_back({{0, ring_start[1] + m,
                          ring_start[1] + (m + 1) % ring_count[1]},
                         ring_region[0]});

  // Remaining bands: angle-merge walk between consecutive rings.
  for (int k = 1; k < rings; ++k) {
    const int si = ring_count[k], so = ring_count[k + 1];
    const int ibase = ring_start[k], obase = ring_start[k + 1];
    const int region = ring_region[k];
    int i = 0, o = 0;
    while (i < si || o < so) {
      bool advance_outer =
          o < so && (i == si || int64_t(o + 1) * si <= int64_t(i + 1) * so);
      if (advance_outer) {
        triangles.push_back(
            {{ibase + i % si, obase + o % so, obase + (o + 1) % so}, region});
        ++o;
      } else {
        triangles.push_back(
            {{ibase + i % si, obase + o % so, ibase + (i + 1) % si}, region});
        ++i;
      }
    }
  }

  return Mesh(std::move(vertices), std::move(triangles));
}

}  // namespace vie2d
