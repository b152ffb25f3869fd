#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

namespace exospin {

using Point = std::vector<double>;

/// Closed axis-aligned box in R^d, 1 <= d <= 4.
struct Box {
  Point lo;
  Point hi;

  std::size_t dim() const { return lo.size(); }
  double volume() const;
  static Box unit(std::size_t d);
};

/// Throws PreconditionError for a malformed box (dimension, lo > hi, non-finite).
void validate_box(const Box& b);

/// Main diagonal length.
double diameter(const Box& b);
/// Largest pairwise Euclidean distance; throws on an empty set.
double diameter(const std::vector<Point>& points);

/// Grid coverings of side delta for each delta in a strictly decreasing sequence.
struct CoveringSpec {
  std::vector<double> deltas;

  /// `levels` values halving down to delta_min.
  static CoveringSpec halving(double delta_min, int levels = 6);
  double delta_min() const { return deltas.back(); }
};

void validate_covering(const CoveringSpec& spec);

struct MeasureSeries {
  std::vector<double> deltas;
  std::vector<unsigned long long> counts;
  /// count * (delta sqrt(d))^s / d^{s/2} at each delta.
  std::vector<double> values;
  /// Value at delta_min.
  double estimate = 0.0;
  /// Relative change between the last two values.
  double trend = 0.0;
};

/// Number of origin-anchored grid cells of side delta meeting the union of `boxes`.
unsigned long long occupied_cells(const std::vector<Box>& boxes, double delta);
/// Same count on the grid whose cell corners sit at offset + delta Z^d.
unsigned long long occupied_cells(const std::vector<Box>& boxes, double delta, const Point& offset);
/// Smallest count over grid origins aligned with some box face on each axis.
/// measure_estimate uses this one: it is the cheapest grid covering of the set.
unsigned long long min_occupied_cells(const std::vector<Box>& boxes, double delta);

MeasureSeries measure_estimate(const std::vector<Box>& boxes, double s, const CoveringSpec& spec);
MeasureSeries measure_estimate(const Box& box, double s, const CoveringSpec& spec);

/// (1 - phi) U about the origin; phi must lie in (0, 1).
Box scale_set(const Box& u, double phi);

struct ScalingCheck {
  double lhs;
  double rhs;
  double gap;  ///< |lhs - rhs| / |rhs| (zero when both vanish)
};

/// lhs = H^s((1-phi)U), rhs = (1-phi)^s H^s(U). With matched_resolution the
/// scaled set is covered with deltas scaled by (1 - phi) as well.
ScalingCheck scaling_law_check(const Box& u, double phi, double s, const CoveringSpec& spec,
                               bool matched_resolution = false);

struct EquippedPiece {
  Box box;
  double phi;
};

struct EquippedLocalSet {
  std::vector<EquippedPiece> pieces;

  /// Lines `phi lo_1 .. lo_d hi_1 .. hi_d`; '#' comments.
  static EquippedLocalSet parse(std::istream& in);
  static EquippedLocalSet load(const std::string& path);
};

/// Boxes with overlapping interiors, phi outside (0, 1) or mixed dimensions throw.
void validate_equipped(const EquippedLocalSet& e);

struct EquippedMeasure {
  double total;                    ///< sum of (1 - phi)^s H^s(U_piece)
  std::vector<double> per_piece;   ///< the summands
  double direct;                   ///< H^s of the scaled union, measured directly
  double gap;                      ///< |direct - total| / total
};

EquippedMeasure equipped_measure(const EquippedLocalSet& e, double s, const CoveringSpec& spec);

struct SlowlyVarying {
  bool all_in_J = true;
  std::vector<std::size_t> offending;
};

/// A piece is in J iff max |phi - mean| / mean <= tol.
SlowlyVarying slowly_varying_check(const std::vector<std::vector<double>>& phi_samples,
                                   double tol = 1e-2);

}  // namespace exospin
