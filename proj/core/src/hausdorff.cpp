#include "exospin/hausdorff.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>

#include "exospin/errors.hpp"

namespace exospin {

double Box::volume() const {
  double v = 1.0;
  for (std::size_t a = 0; a < dim(); ++a) v *= hi[a] - lo[a];
  return v;
}

Box Box::unit(std::size_t d) { return {Point(d, 0.0), Point(d, 1.0)}; }

void validate_box(const Box& b) {
  if (b.lo.size() != b.hi.size() || b.dim() < 1 || b.dim() > 4) {
    throw PreconditionError("box dimension must be between 1 and 4");
  }
  for (std::size_t a = 0; a < b.dim(); ++a) {
    if (!std::isfinite(b.lo[a]) || !std::isfinite(b.hi[a])) throw PreconditionError("box is unbounded");
    if (b.lo[a] > b.hi[a]) throw PreconditionError("box has lo > hi");
  }
}

double diameter(const Box& b) {
  validate_box(b);
  double d2 = 0.0;
  for (std::size_t a = 0; a < b.dim(); ++a) d2 += (b.hi[a] - b.lo[a]) * (b.hi[a] - b.lo[a]);
  return std::sqrt(d2);
}

double diameter(const std::vector<Point>& points) {
  if (points.empty()) throw PreconditionError("diameter of an empty set");
  double best = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t j = i + 1; j < points.size(); ++j) {
      if (points[i].size() != points[j].size()) throw PreconditionError("points of mixed dimension");
      double d2 = 0.0;
      for (std::size_t a = 0; a < points[i].size(); ++a) {
        d2 += (points[i][a] - points[j][a]) * (points[i][a] - points[j][a]);
      }
      best = std::max(best, d2);
    }
  }
  return std::sqrt(best);
}

CoveringSpec CoveringSpec::halving(double delta_min, int levels) {
  if (!(delta_min > 0.0) || levels < 1) throw PreconditionError("covering needs delta_min > 0 and levels >= 1");
  CoveringSpec spec;
  for (int l = levels - 1; l >= 0; --l) spec.deltas.push_back(delta_min * std::ldexp(1.0, l));
  return spec;
}

void validate_covering(const CoveringSpec& spec) {
  if (spec.deltas.empty()) throw PreconditionError("covering spec has no deltas");
  for (std::size_t n = 0; n < spec.deltas.size(); ++n) {
    if (!(spec.deltas[n] > 0.0)) throw PreconditionError("covering deltas must be positive");
    if (n > 0 && !(spec.deltas[n] < spec.deltas[n - 1])) {
      throw PreconditionError("covering deltas must be strictly decreasing");
    }
  }
}

namespace {

// Cell index range [first, last) along one axis. Coordinates within a
// relative 1e-9 of a cell boundary snap to it so exact multiples of delta do
// not pick up a stray cell.
std::pair<long long, long long> cell_range(double lo, double hi, double delta) {
  const auto snap = [](double v) {
    const double r = std::round(v);
    return std::abs(v - r) <= 1e-9 * std::max(1.0, std::abs(v)) ? r : v;
  };
  const auto first = static_cast<long long>(std::floor(snap(lo / delta)));
  auto last = static_cast<long long>(std::ceil(snap(hi / delta)));
  if (last <= first) last = first + 1;
  return {first, last};
}

}  // namespace

unsigned long long occupied_cells(const std::vector<Box>& boxes, double delta) {
  if (boxes.empty()) return 0;
  return occupied_cells(boxes, delta, Point(boxes.front().dim(), 0.0));
}

unsigned long long occupied_cells(const std::vector<Box>& boxes, double delta, const Point& offset) {
  if (boxes.empty()) return 0;
  if (!(delta > 0.0)) throw PreconditionError("covering delta must be positive");
  const std::size_t d = boxes.front().dim();
  if (offset.size() != d) throw PreconditionError("grid offset has the wrong dimension");
  using Range = std::pair<long long, long long>;
  std::vector<std::vector<Range>> ranges;
  ranges.reserve(boxes.size());
  for (const Box& b : boxes) {
    validate_box(b);
    if (b.dim() != d) throw PreconditionError("boxes of mixed dimension");
    std::vector<Range> r;
    for (std::size_t a = 0; a < d; ++a) r.push_back(cell_range(b.lo[a] - offset[a], b.hi[a] - offset[a], delta));
    ranges.push_back(std::move(r));
  }
  if (ranges.size() == 1) {
    unsigned long long n = 1;
    for (const Range& r : ranges.front()) n *= static_cast<unsigned long long>(r.second - r.first);
    return n;
  }
  // Coordinate compression: walk the product of elementary intervals and add
  // the size of every one covered by some box.
  std::vector<std::vector<long long>> cuts(d);
  for (const auto& r : ranges) {
    for (std::size_t a = 0; a < d; ++a) {
      cuts[a].push_back(r[a].first);
      cuts[a].push_back(r[a].second);
    }
  }
  for (auto& c : cuts) {
    std::sort(c.begin(), c.end());
    c.erase(std::unique(c.begin(), c.end()), c.end());
  }
  std::vector<std::size_t> idx(d, 0);
  unsigned long long total = 0;
  while (true) {
    bool covered = false;
    for (const auto& r : ranges) {
      bool inside = true;
      for (std::size_t a = 0; a < d && inside; ++a) {
        inside = r[a].first <= cuts[a][idx[a]] && cuts[a][idx[a] + 1] <= r[a].second;
      }
      if (inside) {
        covered = true;
        break;
      }
    }
    if (covered) {
      unsigned long long n = 1;
      for (std::size_t a = 0; a < d; ++a) n *= static_cast<unsigned long long>(cuts[a][idx[a] + 1] - cuts[a][idx[a]]);
      total += n;
    }
    std::size_t a = 0;
    while (a < d && ++idx[a] + 1 >= cuts[a].size()) idx[a++] = 0;
    if (a == d) break;
  }
  return total;
}

unsigned long long min_occupied_cells(const std::vector<Box>& boxes, double delta) {
  if (boxes.empty()) return 0;
  if (!(delta > 0.0)) throw PreconditionError("covering delta must be positive");
  const std::size_t d = boxes.front().dim();
  // A box face on a grid line never costs a partial cell, so the faces give
  // the candidate origins along each axis.
  std::vector<std::vector<double>> cand(d, std::vector<double>{0.0});
  for (const Box& b : boxes) {
    if (b.dim() != d) throw PreconditionError("boxes of mixed dimension");
    for (std::size_t a = 0; a < d; ++a) {
      for (double v : {b.lo[a], b.hi[a]}) {
        if (std::isfinite(v)) cand[a].push_back(v - delta * std::floor(v / delta));
      }
    }
  }
  for (auto& c : cand) {
    std::sort(c.begin(), c.end());
    c.erase(std::unique(c.begin(), c.end()), c.end());
  }
  std::vector<std::size_t> idx(d, 0);
  Point offset(d, 0.0);
  unsigned long long best = std::numeric_limits<unsigned long long>::max();
  while (true) {
    for (std::size_t a = 0; a < d; ++a) offset[a] = cand[a][idx[a]];
    best = std::min(best, occupied_cells(boxes, delta, offset));
    std::size_t a = 0;
    while (a < d && ++idx[a] >= cand[a].size()) idx[a++] = 0;
    if (a == d) break;
  }
  return best;
}

MeasureSeries measure_estimate(const std::vector<Box>& boxes, double s, const CoveringSpec& spec) {
  if (!(s >= 0.0)) throw PreconditionError("Hausdorff exponent s must be >= 0");
  if (boxes.empty()) throw PreconditionError("measure of an empty set");
  validate_covering(spec);
  const double d = static_cast<double>(boxes.front().dim());
  MeasureSeries out;
  for (double delta : spec.deltas) {
    const unsigned long long n = min_occupied_cells(boxes, delta);
    // Each cell has diameter delta sqrt(d); d^{s/2} is divided out so boxes report volume.
    const double value = static_cast<double>(n) * std::pow(delta * std::sqrt(d), s) / std::pow(d, 0.5 * s);
    out.deltas.push_back(delta);
    out.counts.push_back(n);
    out.values.push_back(value);
  }
  out.estimate = out.values.back();
  if (out.values.size() > 1) {
    const double prev = out.values[out.values.size() - 2];
    out.trend = prev == 0.0 ? 0.0 : (out.estimate - prev) / prev;
  }
  return out;
}

MeasureSeries measure_estimate(const Box& box, double s, const CoveringSpec& spec) {
  return measure_estimate(std::vector<Box>{box}, s, spec);
}

Box scale_set(const Box& u, double phi) {
  validate_box(u);
  if (!(phi > 0.0 && phi < 1.0)) {
    throw PreconditionError("phi must lie in (0,1); phi -> 1 shrinks the set to nothing");
  }
  Box out = u;
  const double f = 1.0 - phi;
  for (std::size_t a = 0; a < u.dim(); ++a) {
    out.lo[a] *= f;
    out.hi[a] *= f;
  }
  return out;
}

namespace {
double relative_gap(double lhs, double rhs) {
  if (lhs == rhs) return 0.0;
  return std::abs(lhs - rhs) / std::max(std::abs(rhs), std::abs(lhs));
}
}  // namespace

ScalingCheck scaling_law_check(const Box& u, double phi, double s, const CoveringSpec& spec,
                               bool matched_resolution) {
  const Box scaled = scale_set(u, phi);
  CoveringSpec lhs_spec = spec;
  if (matched_resolution) {
    for (double& d : lhs_spec.deltas) d *= 1.0 - phi;
  }
  ScalingCheck c{};
  c.lhs = measure_estimate(scaled, s, lhs_spec).estimate;
  c.rhs = std::pow(1.0 - phi, s) * measure_estimate(u, s, spec).estimate;
  c.gap = std::abs(c.rhs) > 0.0 ? std::abs(c.lhs - c.rhs) / std::abs(c.rhs) : relative_gap(c.lhs, c.rhs);
  return c;
}

EquippedLocalSet EquippedLocalSet::parse(std::istream& in) {
  EquippedLocalSet e;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    std::istringstream ss(hash == std::string::npos ? line : line.substr(0, hash));
    std::vector<double> nums;
    for (double v; ss >> v;) nums.push_back(v);
    if (!ss.eof()) throw PreconditionError("line " + std::to_string(line_no) + ": expected numbers");
    if (nums.empty()) continue;
    if (nums.size() < 3 || nums.size() % 2 == 0 || nums.size() > 9) {
      throw PreconditionError("line " + std::to_string(line_no) +
                              ": expected 'phi lo_1 .. lo_d hi_1 .. hi_d' with d <= 4");
    }
    const std::size_t d = (nums.size() - 1) / 2;
    EquippedPiece p{{Point(nums.begin() + 1, nums.begin() + 1 + static_cast<long>(d)),
                     Point(nums.begin() + 1 + static_cast<long>(d), nums.end())},
                    nums[0]};
    e.pieces.push_back(std::move(p));
  }
  validate_equipped(e);
  return e;
}

EquippedLocalSet EquippedLocalSet::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw PreconditionError("cannot open '" + path + "'");
  return parse(in);
}

void validate_equipped(const EquippedLocalSet& e) {
  if (e.pieces.empty()) throw PreconditionError("equipped set has no pieces");
  const std::size_t d = e.pieces.front().box.dim();
  for (std::size_t i = 0; i < e.pieces.size(); ++i) {
    const auto& p = e.pieces[i];
    validate_box(p.box);
    if (p.box.dim() != d) throw PreconditionError("equipped set mixes dimensions");
    if (!(p.phi > 0.0 && p.phi < 1.0)) {
      throw PreconditionError("piece " + std::to_string(i) + " has phi outside (0,1)");
    }
    for (std::size_t j = 0; j < i; ++j) {
      const Box& a = e.pieces[j].box;
      bool overlap = true;
      for (std::size_t x = 0; x < d && overlap; ++x) overlap = a.lo[x] < p.box.hi[x] && p.box.lo[x] < a.hi[x];
      if (overlap) {
        throw PreconditionError("pieces " + std::to_string(j) + " and " + std::to_string(i) + " overlap");
      }
    }
  }
}

EquippedMeasure equipped_measure(const EquippedLocalSet& e, double s, const CoveringSpec& spec) {
  validate_equipped(e);
  EquippedMeasure out{};
  std::vector<Box> scaled;
  for (const auto& p : e.pieces) {
    const double term = std::pow(1.0 - p.phi, s) * measure_estimate(p.box, s, spec).estimate;
    out.per_piece.push_back(term);
    scaled.push_back(scale_set(p.box, p.phi));
  }
  out.total = std::accumulate(out.per_piece.begin(), out.per_piece.end(), 0.0);
  out.direct = measure_estimate(scaled, s, spec).estimate;
  out.gap = out.total != 0.0 ? std::abs(out.direct - out.total) / std::abs(out.total)
                             : relative_gap(out.direct, out.total);
  return out;
}

SlowlyVarying slowly_varying_check(const std::vector<std::vector<double>>& phi_samples, double tol) {
  if (!(tol >= 0.0)) throw PreconditionError("tolerance must be >= 0");
  SlowlyVarying out;
  for (std::size_t i = 0; i < phi_samples.size(); ++i) {
    const auto& s = phi_samples[i];
    if (s.empty()) throw PreconditionError("piece " + std::to_string(i) + " has no samples");
    const double mean = std::accumulate(s.begin(), s.end(), 0.0) / static_cast<double>(s.size());
    double spread = 0.0;
    for (double v : s) spread = std::max(spread, std::abs(v - mean));
    if (!(mean > 0.0) || spread / mean > tol) {
      out.all_in_J = false;
      out.offending.push_back(i);
    }
  }
  return out;
}

}  // namespace exospin
