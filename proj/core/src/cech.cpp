#include "exospin/cech.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <queue>
#include <sstream>

#include "exospin/errors.hpp"

namespace exospin {

namespace {

std::string strip_comment(const std::string& line) {
  const auto pos = line.find('#');
  return pos == std::string::npos ? line : line.substr(0, pos);
}

[[noreturn]] void parse_fail(std::size_t line_no, const std::string& msg) {
  throw PreconditionError("line " + std::to_string(line_no) + ": " + msg);
}

std::ifstream open_or_throw(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw PreconditionError("cannot open '" + path + "'");
  return in;
}

}  // namespace

int Nerve::add_vertex(const std::string& id) {
  if (id.empty()) throw PreconditionError("empty vertex id");
  if (vertex_index(id) >= 0) throw PreconditionError("duplicate vertex '" + id + "'");
  vertices_.push_back(id);
  return static_cast<int>(vertices_.size() - 1);
}

int Nerve::vertex_index(const std::string& id) const {
  const auto it = std::find(vertices_.begin(), vertices_.end(), id);
  return it == vertices_.end() ? -1 : static_cast<int>(it - vertices_.begin());
}

long Nerve::edge_index(int a, int b) const {
  const Edge e{std::min(a, b), std::max(a, b)};
  const auto it = std::find(edges_.begin(), edges_.end(), e);
  return it == edges_.end() ? -1 : static_cast<long>(it - edges_.begin());
}

std::size_t Nerve::add_edge(const std::string& a, const std::string& b) {
  const int ia = vertex_index(a);
  const int ib = vertex_index(b);
  if (ia < 0 || ib < 0) throw PreconditionError("edge " + a + "-" + b + " uses an unknown vertex");
  if (ia == ib) throw PreconditionError("self-loop on vertex '" + a + "'");
  if (edge_index(ia, ib) >= 0) throw PreconditionError("duplicate edge " + a + "-" + b);
  edges_.push_back({std::min(ia, ib), std::max(ia, ib)});
  return edges_.size() - 1;
}

std::size_t Nerve::require_edge(const std::string& a, const std::string& b) const {
  const int ia = vertex_index(a);
  const int ib = vertex_index(b);
  const long e = (ia < 0 || ib < 0) ? -1 : edge_index(ia, ib);
  if (e < 0) throw PreconditionError("no edge " + a + "-" + b + " in the nerve");
  return static_cast<std::size_t>(e);
}

std::size_t Nerve::add_triangle(const std::string& a, const std::string& b, const std::string& c) {
  require_edge(a, b);
  require_edge(b, c);
  require_edge(a, c);
  Triangle t{vertex_index(a), vertex_index(b), vertex_index(c)};
  std::sort(t.begin(), t.end());
  if (t[0] == t[1] || t[1] == t[2]) throw PreconditionError("degenerate triangle " + a + b + c);
  if (std::find(triangles_.begin(), triangles_.end(), t) != triangles_.end()) {
    throw PreconditionError("duplicate triangle " + a + "-" + b + "-" + c);
  }
  triangles_.push_back(t);
  return triangles_.size() - 1;
}

std::string Nerve::edge_name(std::size_t e) const {
  const Edge& ed = edges_.at(e);
  return vertices_[static_cast<std::size_t>(ed[0])] + "-" + vertices_[static_cast<std::size_t>(ed[1])];
}

Nerve Nerve::parse(std::istream& in) {
  Nerve n;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ss(strip_comment(line));
    std::string kind;
    if (!(ss >> kind)) continue;
    std::vector<std::string> ids;
    for (std::string tok; ss >> tok;) ids.push_back(tok);
    try {
      if (kind == "v" && ids.size() == 1) {
        n.add_vertex(ids[0]);
      } else if (kind == "e" && ids.size() == 2) {
        n.add_edge(ids[0], ids[1]);
      } else if (kind == "t" && ids.size() == 3) {
        n.add_triangle(ids[0], ids[1], ids[2]);
      } else {
        parse_fail(line_no, "expected 'v id', 'e a b' or 't a b c', got '" + line + "'");
      }
    } catch (const PreconditionError& e) {
      if (std::string(e.what()).rfind("line ", 0) == 0) throw;
      parse_fail(line_no, e.what());
    }
  }
  return n;
}

Nerve Nerve::load(const std::string& path) {
  auto in = open_or_throw(path);
  return parse(in);
}

Z2Cocycle Z2Cocycle::trivial(const Nerve& n) { return {std::vector<int>(n.edges().size(), 1)}; }

Z2Cocycle parse_cocycle(std::istream& in, const Nerve& n) {
  Z2Cocycle c{std::vector<int>(n.edges().size(), 0)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ss(strip_comment(line));
    std::vector<std::string> tok;
    for (std::string t; ss >> t;) tok.push_back(t);
    if (tok.empty()) continue;
    std::string a, b, value;
    if (tok.size() == 3) {
      a = tok[0];
      b = tok[1];
      value = tok[2];
    } else if (tok.size() == 2) {
      // 'a-b +1': split at the first dash that leaves two known vertices.
      for (std::size_t cut = tok[0].find('-'); cut != std::string::npos; cut = tok[0].find('-', cut + 1)) {
        if (n.vertex_index(tok[0].substr(0, cut)) >= 0 && n.vertex_index(tok[0].substr(cut + 1)) >= 0) {
          a = tok[0].substr(0, cut);
          b = tok[0].substr(cut + 1);
          break;
        }
      }
      if (a.empty()) parse_fail(line_no, "cannot read edge '" + tok[0] + "'");
      value = tok[1];
    } else {
      parse_fail(line_no, "expected 'a b +1|-1' or 'a-b +1|-1'");
    }
    int label = 0;
    if (value == "+1" || value == "1") label = 1;
    else if (value == "-1") label = -1;
    else parse_fail(line_no, "label must be +1 or -1, got '" + value + "'");
    std::size_t e = 0;
    try {
      e = n.require_edge(a, b);
    } catch (const PreconditionError& err) {
      parse_fail(line_no, err.what());
    }
    if (c.label[e] != 0) parse_fail(line_no, "edge " + a + "-" + b + " labelled twice");
    c.label[e] = label;
  }
  return c;
}

Z2Cocycle load_cocycle(const std::string& path, const Nerve& n) {
  auto in = open_or_throw(path);
  return parse_cocycle(in, n);
}

CocycleCheck cocycle_check(const Z2Cocycle& c, const Nerve& n) {
  if (c.label.size() != n.edges().size()) {
    throw PreconditionError("cocycle has " + std::to_string(c.label.size()) + " labels for " +
                            std::to_string(n.edges().size()) + " edges");
  }
  for (std::size_t e = 0; e < c.label.size(); ++e) {
    if (c.label[e] != 1 && c.label[e] != -1) {
      throw PreconditionError("edge " + n.edge_name(e) + " has no +-1 label");
    }
  }
  CocycleCheck out;
  for (std::size_t t = 0; t < n.triangles().size(); ++t) {
    const auto& tr = n.triangles()[t];
    const auto lab = [&](int a, int b) { return c.label[static_cast<std::size_t>(n.edge_index(a, b))]; };
    if (lab(tr[0], tr[1]) * lab(tr[1], tr[2]) * lab(tr[0], tr[2]) != 1) {
      out.ok = false;
      out.violating_triangles.push_back(t);
    }
  }
  return out;
}

Z2Cocycle difference_class(const Z2Cocycle& c, const Z2Cocycle& c_prime, const Nerve& n) {
  if (!cocycle_check(c, n).ok) throw NotACocycle("first input fails the cocycle condition");
  if (!cocycle_check(c_prime, n).ok) throw NotACocycle("second input fails the cocycle condition");
  Z2Cocycle d{std::vector<int>(c.label.size())};
  for (std::size_t e = 0; e < d.label.size(); ++e) d.label[e] = c.label[e] * c_prime.label[e];
  return d;
}

std::optional<std::vector<int>> is_coboundary(const Z2Cocycle& d, const Nerve& n) {
  cocycle_check(d, n);
  const std::size_t nv = n.vertices().size();
  std::vector<std::vector<std::pair<int, int>>> adj(nv);
  for (std::size_t e = 0; e < n.edges().size(); ++e) {
    const auto& ed = n.edges()[e];
    adj[static_cast<std::size_t>(ed[0])].push_back({ed[1], d.label[e]});
    adj[static_cast<std::size_t>(ed[1])].push_back({ed[0], d.label[e]});
  }
  std::vector<int> chi(nv, 0);
  for (std::size_t root = 0; root < nv; ++root) {
    if (chi[root] != 0) continue;
    chi[root] = 1;
    std::queue<int> q;
    q.push(static_cast<int>(root));
    while (!q.empty()) {
      const int a = q.front();
      q.pop();
      for (const auto& [b, lab] : adj[static_cast<std::size_t>(a)]) {
        const int want = chi[static_cast<std::size_t>(a)] * lab;
        int& cb = chi[static_cast<std::size_t>(b)];
        if (cb == 0) {
          cb = want;
          q.push(b);
        } else if (cb != want) {
          return std::nullopt;
        }
      }
    }
  }
  return chi;
}

int gf2_rank(std::vector<std::vector<std::uint64_t>> rows, std::size_t columns) {
  int rank = 0;
  std::size_t pivot_row = 0;
  for (std::size_t col = 0; col < columns && pivot_row < rows.size(); ++col) {
    const std::size_t word = col / 64;
    const std::uint64_t bit = std::uint64_t{1} << (col % 64);
    std::size_t r = pivot_row;
    while (r < rows.size() && !(rows[r][word] & bit)) ++r;
    if (r == rows.size()) continue;
    std::swap(rows[r], rows[pivot_row]);
    for (std::size_t k = 0; k < rows.size(); ++k) {
      if (k != pivot_row && (rows[k][word] & bit)) {
        for (std::size_t w = 0; w < rows[k].size(); ++w) rows[k][w] ^= rows[pivot_row][w];
      }
    }
    ++pivot_row;
    ++rank;
  }
  return rank;
}

int h1_dimension(const Nerve& n) {
  const std::size_t ne = n.edges().size();
  const std::size_t nv = n.vertices().size();
  const auto words = [](std::size_t cols) { return std::max<std::size_t>(1, (cols + 63) / 64); };
  const auto set = [](std::vector<std::uint64_t>& row, std::size_t col) {
    row[col / 64] |= std::uint64_t{1} << (col % 64);
  };

  // d0: vertex labelling -> edge labelling, one row per edge.
  std::vector<std::vector<std::uint64_t>> d0(ne, std::vector<std::uint64_t>(words(nv), 0));
  for (std::size_t e = 0; e < ne; ++e) {
    set(d0[e], static_cast<std::size_t>(n.edges()[e][0]));
    set(d0[e], static_cast<std::size_t>(n.edges()[e][1]));
  }
  // d1: edge labelling -> triangle products, one row per triangle.
  std::vector<std::vector<std::uint64_t>> d1(n.triangles().size(), std::vector<std::uint64_t>(words(ne), 0));
  for (std::size_t t = 0; t < n.triangles().size(); ++t) {
    const auto& tr = n.triangles()[t];
    set(d1[t], static_cast<std::size_t>(n.edge_index(tr[0], tr[1])));
    set(d1[t], static_cast<std::size_t>(n.edge_index(tr[1], tr[2])));
    set(d1[t], static_cast<std::size_t>(n.edge_index(tr[0], tr[2])));
  }
  return static_cast<int>(ne) - gf2_rank(std::move(d1), ne) - gf2_rank(std::move(d0), nv);
}

unsigned long long spin_structure_count(const Nerve& n) {
  const int h = h1_dimension(n);
  if (h >= 64) throw PreconditionError("structure count overflows 64 bits");
  return 1ULL << h;
}

GluingFunctional parse_gluing_functional(const std::string& name) {
  if (name == "identity") return GluingFunctional::identity;
  if (name == "square") return GluingFunctional::square;
  throw PreconditionError("unknown gluing functional '" + name + "' (expected identity, square)");
}

OverlapDeformation parse_deformation(std::istream& in, const Nerve& n) {
  OverlapDeformation d;
  d.phi.assign(n.vertices().size(), std::nan(""));
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ss(strip_comment(line));
    std::string id;
    if (!(ss >> id)) continue;
    double value = 0.0;
    if (!(ss >> value)) parse_fail(line_no, "expected 'vertex value'");
    const int v = n.vertex_index(id);
    if (v < 0) parse_fail(line_no, "unknown vertex '" + id + "'");
    if (!std::isnan(d.phi[static_cast<std::size_t>(v)])) parse_fail(line_no, "vertex '" + id + "' given twice");
    d.phi[static_cast<std::size_t>(v)] = value;
  }
  for (std::size_t v = 0; v < d.phi.size(); ++v) {
    if (std::isnan(d.phi[v])) throw PreconditionError("no deformation value for vertex '" + n.vertices()[v] + "'");
  }
  return d;
}

OverlapDeformation load_deformation(const std::string& path, const Nerve& n) {
  auto in = open_or_throw(path);
  return parse_deformation(in, n);
}

GluingResult deformed_gluing_check(const std::vector<int>& chi, const OverlapDeformation& defo,
                                   const Nerve& n) {
  const std::size_t nv = n.vertices().size();
  if (chi.size() != nv) throw PreconditionError("vertex labelling does not cover the nerve");
  if (defo.phi.size() != nv) throw PreconditionError("deformation does not cover the nerve");
  std::vector<double> f(nv);
  for (std::size_t v = 0; v < nv; ++v) {
    const double p = defo.phi[v];
    f[v] = defo.functional == GluingFunctional::square ? p * p : p;
    if (!(p > 0.0) || !(f[v] > 0.0)) {
      throw PreconditionError("F(phi) must be positive; vertex '" + n.vertices()[v] + "' has phi = " +
                              std::to_string(p));
    }
  }
  GluingResult out;
  for (std::size_t e = 0; e < n.edges().size(); ++e) {
    const auto& ed = n.edges()[e];
    const double ratio = f[static_cast<std::size_t>(ed[1])] / f[static_cast<std::size_t>(ed[0])];
    if (std::abs(ratio - 1.0) > defo.tolerance) out.obstructed_edges.push_back(e);
  }
  out.global_map_exists = out.obstructed_edges.empty();
  return out;
}

}  // namespace exospin
