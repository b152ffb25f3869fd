#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <vector>

#include "exospin/types.hpp"

namespace exospin {

/// Accuracy of central finite-difference stencils.
enum class Stencil { second = 2, fourth = 4 };

constexpr int stencil_margin(Stencil s) { return s == Stencil::second ? 1 : 2; }

using Index4 = std::array<int, 4>;

/// Uniform Cartesian spacetime grid. Axes with a single point are frozen:
/// derivatives along them are identically zero.
struct Grid4 {
  Index4 dims{1, 1, 1, 1};
  Vec4 spacing = Vec4::Ones();
  Vec4 origin = Vec4::Zero();

  /// n points per active axis centred on `centre`; `active` selects which axes vary.
  static Grid4 centred(const Vec4& centre, double h, int n, std::array<bool, 4> active = {true, true, true, true});

  std::size_t size() const;
  bool frozen(int mu) const { return dims[static_cast<std::size_t>(mu)] == 1; }
  std::size_t linear(const Index4& i) const;
  Index4 unravel(std::size_t k) const;
  Vec4 point(const Index4& i) const;

  /// Points at least `margin` sites away from the edge of every active axis.
  std::vector<Index4> interior(int margin) const;
  /// Throws PreconditionError when no interior point exists for `margin`.
  void require_interior(int margin, const char* who) const;
};

template <class T>
struct GridField {
  Grid4 grid;
  std::vector<T> values;

  GridField() = default;
  explicit GridField(const Grid4& g) : grid(g), values(g.size()) {}

  T& operator[](const Index4& i) { return values[grid.linear(i)]; }
  const T& operator[](const Index4& i) const { return values[grid.linear(i)]; }
};

template <class T, class F>
GridField<T> sample(const Grid4& g, F&& fn) {
  GridField<T> out(g);
  for (std::size_t k = 0; k < out.values.size(); ++k) out.values[k] = fn(g.point(g.unravel(k)));
  return out;
}

namespace detail {
inline Index4 shifted(Index4 i, int mu, int by) {
  i[static_cast<std::size_t>(mu)] += by;
  return i;
}
}  // namespace detail

/// Central difference of `f` along axis mu at site i (zero on frozen axes).
template <class T>
T central_derivative(const GridField<T>& f, const Index4& i, int mu, Stencil s = Stencil::second) {
  const auto& g = f.grid;
  if (g.frozen(mu)) return T(f[i] * 0.0);
  const double h = g.spacing[mu];
  using detail::shifted;
  if (s == Stencil::second) return T((f[shifted(i, mu, 1)] - f[shifted(i, mu, -1)]) / (2.0 * h));
  return T((-f[shifted(i, mu, 2)] + 8.0 * f[shifted(i, mu, 1)] - 8.0 * f[shifted(i, mu, -1)] +
            f[shifted(i, mu, -2)]) /
           (12.0 * h));
}

/// Second derivative d_mu d_nu f at site i, central in both directions.
template <class T>
T central_second_derivative(const GridField<T>& f, const Index4& i, int mu, int nu,
                            Stencil s = Stencil::second) {
  const auto& g = f.grid;
  if (g.frozen(mu) || g.frozen(nu)) return T(f[i] * 0.0);
  using detail::shifted;
  if (mu == nu) {
    const double h2 = g.spacing[mu] * g.spacing[mu];
    if (s == Stencil::second) {
      return T((f[shifted(i, mu, 1)] - 2.0 * f[i] + f[shifted(i, mu, -1)]) / h2);
    }
    return T((-f[shifted(i, mu, 2)] + 16.0 * f[shifted(i, mu, 1)] - 30.0 * f[i] +
              16.0 * f[shifted(i, mu, -1)] - f[shifted(i, mu, -2)]) /
             (12.0 * h2));
  }
  // Mixed derivative as the tensor product of 1D first-derivative stencils.
  const double hm = g.spacing[mu];
  const double hn = g.spacing[nu];
  if (s == Stencil::second) {
    return T((f[shifted(shifted(i, mu, 1), nu, 1)] - f[shifted(shifted(i, mu, 1), nu, -1)] -
              f[shifted(shifted(i, mu, -1), nu, 1)] + f[shifted(shifted(i, mu, -1), nu, -1)]) /
             (4.0 * hm * hn));
  }
  static constexpr std::array<int, 4> offs{-2, -1, 1, 2};
  static constexpr std::array<double, 4> wts{1.0, -8.0, 8.0, -1.0};
  T acc = T(f[i] * 0.0);
  for (std::size_t a = 0; a < 4; ++a) {
    for (std::size_t b = 0; b < 4; ++b) {
      acc = T(acc + (wts[a] * wts[b]) * f[shifted(shifted(i, mu, offs[a]), nu, offs[b])]);
    }
  }
  return T(acc / (144.0 * hm * hn));
}

}  // namespace exospin
