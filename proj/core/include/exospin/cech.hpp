#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace exospin {

/// Nerve of a finite cover: vertices are open sets, edges pairwise overlaps,
/// triangles triple overlaps. Simplices are stored with sorted vertex indices.
class Nerve {
 public:
  using Edge = std::array<int, 2>;
  using Triangle = std::array<int, 3>;

  Nerve() = default;

  /// Returns the vertex index; adding an existing id throws.
  int add_vertex(const std::string& id);
  /// Endpoints must exist; self-loops and duplicates throw.
  std::size_t add_edge(const std::string& a, const std::string& b);
  /// All three edges must already be present.
  std::size_t add_triangle(const std::string& a, const std::string& b, const std::string& c);

  const std::vector<std::string>& vertices() const { return vertices_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<Triangle>& triangles() const { return triangles_; }

  /// -1 when absent.
  int vertex_index(const std::string& id) const;
  /// Edge index for an unordered pair; -1 when absent.
  long edge_index(int a, int b) const;
  /// Throws PreconditionError naming the missing edge.
  std::size_t require_edge(const std::string& a, const std::string& b) const;

  std::string edge_name(std::size_t e) const;

  /// Records `v id`, `e a b`, `t a b c`, one per line; '#' starts a comment.
  static Nerve parse(std::istream& in);
  static Nerve load(const std::string& path);

 private:
  std::vector<std::string> vertices_;
  std::vector<Edge> edges_;
  std::vector<Triangle> triangles_;
};

/// +-1 per edge, indexed like Nerve::edges(). Zero marks a missing label.
struct Z2Cocycle {
  std::vector<int> label;

  static Z2Cocycle trivial(const Nerve& n);
};

/// Lines `a b +1|-1`. Edges without a line stay unlabelled.
Z2Cocycle parse_cocycle(std::istream& in, const Nerve& n);
Z2Cocycle load_cocycle(const std::string& path, const Nerve& n);

struct CocycleCheck {
  bool ok = true;
  std::vector<std::size_t> violating_triangles;
};

/// Product of labels around every triangle. Throws PreconditionError on a
/// missing or non +-1 label.
CocycleCheck cocycle_check(const Z2Cocycle& c, const Nerve& n);

/// delta_ab = c_ab c'_ab. Throws NotACocycle when either input fails the check.
Z2Cocycle difference_class(const Z2Cocycle& c, const Z2Cocycle& c_prime, const Nerve& n);

/// Vertex labelling chi with d_ab = chi(a) chi(b) on every edge, if one exists.
/// The first vertex of each connected component gets +1.
std::optional<std::vector<int>> is_coboundary(const Z2Cocycle& d, const Nerve& n);

/// dim over GF(2) of cocycles modulo coboundaries: |E| - rank(d1) - rank(d0).
int h1_dimension(const Nerve& n);

/// 2^h1.
unsigned long long spin_structure_count(const Nerve& n);

/// Rank over GF(2) of a dense 0/1 matrix given row by row.
int gf2_rank(std::vector<std::vector<std::uint64_t>> rows, std::size_t columns);

enum class GluingFunctional { identity, square };

GluingFunctional parse_gluing_functional(const std::string& name);

/// phi per vertex plus the monotone positive functional F applied before comparison.
struct OverlapDeformation {
  std::vector<double> phi;
  GluingFunctional functional = GluingFunctional::identity;
  /// Relative tolerance on F(phi_b) / F(phi_a) = 1.
  double tolerance = 1e-12;
};

/// Lines `vertex value`. Every vertex needs a value.
OverlapDeformation parse_deformation(std::istream& in, const Nerve& n);
OverlapDeformation load_deformation(const std::string& path, const Nerve& n);

struct GluingResult {
  bool global_map_exists = true;
  std::vector<std::size_t> obstructed_edges;
};

/// Edge (a, b) is obstructed iff F(phi_b) / F(phi_a) differs from 1. `chi` is the
/// vertex labelling carried by the sections and must cover every vertex.
/// Throws PreconditionError when some F(phi_a) <= 0.
GluingResult deformed_gluing_check(const std::vector<int>& chi, const OverlapDeformation& defo,
                                   const Nerve& n);

}  // namespace exospin
