#include "exospin/grid.hpp"

#include <string>

#include "exospin/errors.hpp"

namespace exospin {

Grid4 Grid4::centred(const Vec4& centre, double h, int n, std::array<bool, 4> active) {
  if (h <= 0.0) throw PreconditionError("grid spacing must be positive");
  if (n < 1) throw PreconditionError("grid needs at least one point per axis");
  Grid4 g;
  for (int mu = 0; mu < 4; ++mu) {
    const auto m = static_cast<std::size_t>(mu);
    g.dims[m] = active[m] ? n : 1;
    g.spacing[mu] = h;
    g.origin[mu] = active[m] ? centre[mu] - 0.5 * (n - 1) * h : centre[mu];
  }
  return g;
}

std::size_t Grid4::size() const {
  std::size_t n = 1;
  for (int d : dims) n *= static_cast<std::size_t>(d);
  return n;
}

std::size_t Grid4::linear(const Index4& i) const {
  std::size_t k = 0;
  for (std::size_t mu = 0; mu < 4; ++mu) {
    k = k * static_cast<std::size_t>(dims[mu]) + static_cast<std::size_t>(i[mu]);
  }
  return k;
}

Index4 Grid4::unravel(std::size_t k) const {
  Index4 i{};
  for (int mu = 3; mu >= 0; --mu) {
    const auto d = static_cast<std::size_t>(dims[static_cast<std::size_t>(mu)]);
    i[static_cast<std::size_t>(mu)] = static_cast<int>(k % d);
    k /= d;
  }
  return i;
}

Vec4 Grid4::point(const Index4& i) const {
  Vec4 x;
  for (int mu = 0; mu < 4; ++mu) x[mu] = origin[mu] + spacing[mu] * i[static_cast<std::size_t>(mu)];
  return x;
}

std::vector<Index4> Grid4::interior(int margin) const {
  std::array<int, 4> lo{}, hi{};
  for (std::size_t mu = 0; mu < 4; ++mu) {
    if (dims[mu] == 1) {
      lo[mu] = 0;
      hi[mu] = 1;
    } else {
      lo[mu] = margin;
      hi[mu] = dims[mu] - margin;
      if (hi[mu] <= lo[mu]) return {};
    }
  }
  std::vector<Index4> out;
  for (int a = lo[0]; a < hi[0]; ++a)
    for (int b = lo[1]; b < hi[1]; ++b)
      for (int c = lo[2]; c < hi[2]; ++c)
        for (int d = lo[3]; d < hi[3]; ++d) out.push_back({a, b, c, d});
  return out;
}

void Grid4::require_interior(int margin, const char* who) const {
  for (std::size_t mu = 0; mu < 4; ++mu) {
    if (dims[mu] != 1 && dims[mu] < 2 * margin + 1) {
      throw PreconditionError(std::string(who) + ": grid axis " + std::to_string(mu) + " has " +
                              std::to_string(dims[mu]) + " points, stencil needs at least " +
                              std::to_string(2 * margin + 1));
    }
  }
}

}  // namespace exospin
