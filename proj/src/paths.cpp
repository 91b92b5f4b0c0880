#include "srip/paths.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <numeric>
#include <set>

#include "srip/error.hpp"
#include "srip/parallel.hpp"
#include "srip/rng.hpp"

namespace srip {

namespace {

constexpr double kMaxAssignments = 400.0 * 399.0 * 398.0 * 397.0;

std::string fmt_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

// Distinct labels of a closed path in order of first appearance.
std::vector<unsigned> distinct_vertices(std::span<const unsigned> path) {
  std::vector<unsigned> out;
  for (const unsigned v : path) {
    if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(v);
  }
  return out;
}

void enumerate_rec(unsigned k, Path& cur, unsigned max_label, std::vector<PathClass>& out) {
  const auto j = static_cast<unsigned>(cur.size());
  if (j == k) {
    // closing step back to vertex 1
    if (cur.back() == 1) return;
    cur.push_back(1);
    out.push_back(make_class(cur));
    cur.pop_back();
    return;
  }
  for (unsigned t = 1; t <= max_label + 1; ++t) {
    if (t == cur.back()) continue;
    cur.push_back(t);
    enumerate_rec(k, cur, std::max(max_label, t), out);
    cur.pop_back();
  }
}

}  // namespace

Path canonicalize(std::span<const unsigned> path) {
  std::map<unsigned, unsigned> relabel;
  Path out;
  out.reserve(path.size());
  for (const unsigned v : path) {
    auto [it, inserted] = relabel.try_emplace(v, static_cast<unsigned>(relabel.size()) + 1);
    out.push_back(it->second);
  }
  return out;
}

bool is_closed(std::span<const unsigned> path) noexcept { return !path.empty() && path.front() == path.back(); }

bool is_strict(std::span<const unsigned> path) noexcept {
  for (std::size_t j = 0; j + 1 < path.size(); ++j) {
    if (path[j] == path[j + 1]) return false;
  }
  return true;
}

std::string PathClass::to_string() const {
  std::string s = "(";
  for (std::size_t j = 0; j < canonical.size(); ++j) {
    if (j) s += ',';
    s += std::to_string(canonical[j]);
  }
  return s + ")";
}

PathClass make_class(std::span<const unsigned> path) {
  if (path.size() < 3 || !is_closed(path) || !is_strict(path)) {
    throw Error(Errc::InvalidArgument, "not a strict closed path of positive length");
  }
  PathClass pc;
  pc.canonical = canonicalize(path);
  pc.vertex_count = *std::max_element(pc.canonical.begin(), pc.canonical.end());
  pc.is_tree = classify(pc).is_tree;
  return pc;
}

std::vector<PathClass> enumerate_classes(unsigned k) {
  if (k > kMaxPathLength) {
    throw Error(Errc::BudgetExceeded, "path length " + std::to_string(k) + " exceeds the budget of " +
                                          std::to_string(kMaxPathLength));
  }
  if (k < 2) throw Error(Errc::InvalidArgument, "path length must be at least 2");
  std::vector<PathClass> out;
  Path cur{1};
  enumerate_rec(k, cur, 1, out);
  return out;
}

GraphFacts classify(const PathClass& pc) {
  GraphFacts f;
  const auto& t = pc.canonical;
  f.vertex_count = *std::max_element(t.begin(), t.end());
  std::map<std::pair<unsigned, unsigned>, EdgeCrossing> edges;
  for (std::size_t j = 0; j + 1 < t.size(); ++j) {
    const unsigned a = std::min(t[j], t[j + 1]);
    const unsigned b = std::max(t[j], t[j + 1]);
    auto [it, inserted] = edges.try_emplace({a, b}, EdgeCrossing{a, b, 0, 0});
    if (t[j] == a) {
      ++it->second.forward;
    } else {
      ++it->second.backward;
    }
  }
  for (const auto& [key, e] : edges) f.edges.push_back(e);
  f.connected = true;  // a path visits its vertices along edges
  f.underlying_tree = f.edges.size() + 1 == f.vertex_count;
  f.is_tree = f.underlying_tree &&
              std::all_of(f.edges.begin(), f.edges.end(), [](const EdgeCrossing& e) {
                return e.forward == 1 && e.backward == 1;
              });
  return f;
}

bool DyckWord::valid() const noexcept {
  long sum = 0;
  for (const int d : letters) {
    if (d != 1 && d != -1) return false;
    sum += d;
    if (sum < 0) return false;
  }
  return sum == 0;
}

std::string DyckWord::to_string() const {
  std::string s;
  for (const int d : letters) s += d > 0 ? '+' : '-';
  return s;
}

DyckWord to_dyck(const PathClass& tree) {
  if (!tree.is_tree) throw Error(Errc::NotATree, tree.to_string() + " is not a tree path");
  DyckWord w;
  unsigned seen = 1;
  for (std::size_t i = 1; i < tree.canonical.size(); ++i) {
    if (tree.canonical[i] > seen) {
      seen = tree.canonical[i];
      w.letters.push_back(1);
    } else {
      w.letters.push_back(-1);
    }
  }
  return w;
}

PathClass from_dyck(const DyckWord& word) {
  if (word.letters.empty() || !word.valid()) {
    throw Error(Errc::InvalidArgument, "not a nonempty Dyck word: " + word.to_string());
  }
  std::vector<unsigned> stack{1};
  unsigned next = 2;
  Path path{1};
  for (const int d : word.letters) {
    if (d > 0) {
      stack.push_back(next++);
    } else {
      stack.pop_back();
    }
    path.push_back(stack.back());
  }
  return make_class(path);
}

double class_size(unsigned vertex_count, std::uint64_t n) {
  double s = 1.0;
  for (unsigned i = 0; i < vertex_count; ++i) {
    if (n < i + 1) return 0.0;
    s *= static_cast<double>(n - i);
  }
  return s;
}

double n_tau(const PathClass& pc, double n, double p) {
  const double k = pc.length();
  return std::pow(p, k / 2.0) * std::pow(n, static_cast<double>(pc.vertex_count) - 1.0 - k / 2.0);
}

cplx exact_Ew(std::span<const unsigned> path, const Dictionary& dict) {
  if (!is_closed(path)) throw Error(Errc::InvalidArgument, "exact_Ew needs a closed path");
  const auto verts = distinct_vertices(path.first(path.size() - 1 == 0 ? 1 : path.size() - 1));
  const auto nv = static_cast<unsigned>(verts.size());
  if (nv > kMaxClassVertices) {
    throw Error(Errc::BudgetExceeded, "class has " + std::to_string(nv) + " vertices; budget is " +
                                          std::to_string(kMaxClassVertices));
  }
  const std::size_t total = dict.atom_count();
  const double assignments = class_size(nv, total);
  if (assignments > kMaxAssignments) {
    throw Error(Errc::BudgetExceeded, "enumeration of " + fmt_double(assignments) +
                                          " assignments exceeds the budget of 400*399*398*397");
  }
  if (assignments == 0.0) throw Error(Errc::InvalidArgument, "dictionary has fewer atoms than the path has vertices");

  // Local vertex ids 0..nv-1; each directed step becomes a factor at the depth
  // where its later endpoint is assigned.
  auto local = [&](unsigned v) {
    return static_cast<unsigned>(std::find(verts.begin(), verts.end(), v) - verts.begin());
  };
  struct Step {
    unsigned from, to;
  };
  std::vector<std::vector<Step>> steps_at(nv);
  for (std::size_t j = 0; j + 1 < path.size(); ++j) {
    const unsigned a = local(path[j]);
    const unsigned b = local(path[j + 1]);
    if (a == b) continue;  // <x, x> = 1
    steps_at[std::max(a, b)].push_back({a, b});
  }

  std::vector<std::span<const cplx>> atoms(total);
  for (std::size_t i = 0; i < total; ++i) atoms[i] = dict.atom(i);
  const CMatrix g = gram(std::span<const std::span<const cplx>>(atoms));

  std::vector<cplx> slot(total);
  parallel_for(total, [&](std::size_t first) {
    std::vector<std::size_t> s(nv);
    s[0] = first;
    cplx acc{};
    // Depth-first over distinct atoms; same-basis pairs are orthogonal and prune.
    auto rec = [&](auto&& self, unsigned depth, cplx prod) -> void {
      if (depth == nv) {
        acc += prod;
        return;
      }
      for (std::size_t x = 0; x < total; ++x) {
        bool used = false;
        for (unsigned d = 0; d < depth; ++d) used = used || s[d] == x;
        if (used) continue;
        s[depth] = x;
        cplx q = prod;
        bool zero = false;
        for (const auto& st : steps_at[depth]) {
          if (dict.basis_of(s[st.from]) == dict.basis_of(s[st.to])) {
            zero = true;
            break;
          }
          q *= g(s[st.from], s[st.to]);
        }
        if (!zero) self(self, depth + 1, q);
      }
    };
    rec(rec, 1, cplx{1.0, 0.0});
    slot[first] = acc;
  });
  cplx sum{};
  for (const auto& v : slot) sum += v;
  return sum / assignments;
}

cplx exact_moment(unsigned k, const Dictionary& dict, std::size_t n) {
  if (k == 0) return 1.0;
  if (k == 1) return 0.0;  // E has zero diagonal
  const double p = dict.p();
  const double dn = static_cast<double>(n);
  cplx total{};
  for (const auto& pc : enumerate_classes(k)) {
    const double size = class_size(pc.vertex_count, n);
    if (size == 0.0) continue;
    total += std::pow(p / dn, k / 2.0) * size / dn * exact_Ew(pc, dict);
  }
  return total;
}

std::vector<EstimateTrajectory> fundamental_estimate_table(const std::vector<const Dictionary*>& ladder,
                                                           const std::vector<PathClass>& classes, double epsilon) {
  std::vector<EstimateTrajectory> out;
  for (const auto& pc : classes) {
    EstimateTrajectory tr;
    tr.pc = pc;
    for (const Dictionary* dict : ladder) {
      const std::uint32_t p = dict->p();
      const auto n = static_cast<std::size_t>(std::floor(std::pow(static_cast<double>(p), 1.0 - epsilon) + 1e-12));
      const double nt = n_tau(pc, static_cast<double>(n), p);
      const cplx ew = exact_Ew(pc, *dict);
      tr.rows.push_back({pc.to_string(), p, n, nt, ew, nt * ew});
    }
    bool mono = true;
    for (std::size_t i = 1; i < tr.rows.size(); ++i) {
      const cplx a = tr.rows[i - 1].value;
      const cplx b = tr.rows[i].value;
      mono = mono && (pc.is_tree ? std::abs(1.0 - b) < std::abs(1.0 - a) : std::abs(b) < std::abs(a));
    }
    tr.monotone_toward_limit = mono;
    out.push_back(std::move(tr));
  }
  return out;
}

namespace {

cplx labeled_sum(const CMatrix& m, const PathClass& pc) {
  const std::size_t n = m.rows();
  const unsigned nv = pc.vertex_count;
  if (nv > n) return 0.0;
  std::vector<std::size_t> s(nv);
  cplx acc{};
  auto rec = [&](auto&& self, unsigned depth) -> void {
    if (depth == nv) {
      cplx prod{1.0, 0.0};
      for (std::size_t j = 0; j + 1 < pc.canonical.size(); ++j) {
        prod *= m(s[pc.canonical[j] - 1], s[pc.canonical[j + 1] - 1]);
      }
      acc += prod;
      return;
    }
    for (std::size_t x = 0; x < n; ++x) {
      if (std::find(s.begin(), s.begin() + depth, x) != s.begin() + depth) continue;
      s[depth] = x;
      self(self, depth + 1);
    }
  };
  rec(rec, 0);
  return acc;
}

}  // namespace

cplx path_sum(const CMatrix& m, unsigned k) {
  if (!m.is_square()) throw Error(Errc::DimensionMismatch, "path_sum needs a square matrix");
  if (k < 2) return 0.0;
  cplx total{};
  for (const auto& pc : enumerate_classes(k)) total += labeled_sum(m, pc);
  return total;
}

cplx path_sum_bruteforce(const CMatrix& m, unsigned k) {
  if (!m.is_square()) throw Error(Errc::DimensionMismatch, "path_sum needs a square matrix");
  const std::size_t n = m.rows();
  if (k == 0 || n == 0) return 0.0;
  std::vector<std::size_t> v(k, 0);
  cplx total{};
  for (;;) {
    cplx prod{1.0, 0.0};
    bool strict = true;
    for (unsigned j = 0; j < k; ++j) {
      const std::size_t a = v[j];
      const std::size_t b = v[(j + 1) % k];
      if (a == b) {
        strict = false;
        break;
      }
      prod *= m(a, b);
    }
    if (strict) total += prod;
    unsigned pos = 0;
    while (pos < k && ++v[pos] == n) v[pos++] = 0;
    if (pos == k) break;
  }
  return total;
}

unsigned visit_count(const PathClass& pc, unsigned v) {
  return static_cast<unsigned>(std::count(pc.canonical.begin(), pc.canonical.end() - 1, v));
}

namespace {

void require_single_visit(const PathClass& pc, unsigned v) {
  if (visit_count(pc, v) != 1) {
    throw Error(Errc::VertexNotSingleVisit,
                "vertex " + std::to_string(v) + " is not visited exactly once by " + pc.to_string());
  }
}

}  // namespace

Path delete_vertex(const PathClass& pc, unsigned v) {
  require_single_visit(pc, v);
  const unsigned k = pc.length();
  const auto& t = pc.canonical;
  const auto i = static_cast<std::size_t>(std::find(t.begin(), t.end() - 1, v) - t.begin());
  // r_0 = v_l, r_1 = v, r_2 = v_r
  Path r(k);
  for (std::size_t j = 0; j < k; ++j) r[j] = t[(i + k - 1 + j) % k];
  Path out;
  if (r[0] != r[2 % k]) {
    out.push_back(r[0]);
    for (std::size_t j = 2; j < k; ++j) out.push_back(r[j]);
    out.push_back(r[0]);
  } else {
    for (std::size_t j = 2; j < k; ++j) out.push_back(r[j]);
    if (out.empty()) return Path{r[0]};  // (a,b,a) collapses to the empty walk at a
    out.push_back(out.front());
  }
  return out;
}

Path substitute_vertex(const PathClass& pc, unsigned v, unsigned u) {
  require_single_visit(pc, v);
  Path out = pc.canonical;
  std::replace(out.begin(), out.end(), v, u);
  return out;
}

CompletenessCheck completeness_identity_check(const PathClass& pc, unsigned v, const Dictionary& dict,
                                              std::size_t sample_count, std::uint64_t seed) {
  require_single_visit(pc, v);
  const std::size_t total = dict.atom_count();
  const unsigned nv = pc.vertex_count;
  if (total < nv) throw Error(Errc::InvalidArgument, "dictionary has fewer atoms than the path has vertices");
  const Path reduced = delete_vertex(pc, v);
  const double bases = static_cast<double>(dict.basis_count());

  CompletenessCheck out;
  out.samples = sample_count;
  SplitMix64 rng(seed);
  std::vector<std::size_t> pool(total);
  for (std::size_t s = 0; s < sample_count; ++s) {
    std::iota(pool.begin(), pool.end(), 0);
    std::vector<std::size_t> assign(nv + 1, 0);  // by label
    std::size_t drawn = 0;
    for (unsigned label = 1; label <= nv; ++label) {
      if (label == v) continue;
      const std::size_t j = drawn + rng.below(total - drawn);
      std::swap(pool[drawn], pool[j]);
      assign[label] = pool[drawn++];
    }
    auto weight = [&](const Path& path) {
      cplx prod{1.0, 0.0};
      for (std::size_t j = 0; j + 1 < path.size(); ++j) {
        const std::size_t a = assign[path[j]];
        const std::size_t b = assign[path[j + 1]];
        if (a != b) prod *= inner(dict.atom(a), dict.atom(b));
      }
      return prod;
    };
    cplx lhs{};
    for (std::size_t b = 0; b < total; ++b) {
      assign[v] = b;
      lhs += weight(pc.canonical);
    }
    const cplx rhs = bases * weight(reduced);
    out.max_residual = std::max(out.max_residual, std::abs(lhs - rhs));
  }
  return out;
}

RelationGap relation_gap(const PathClass& pc, unsigned v, const Dictionary& dict) {
  require_single_visit(pc, v);
  const double p = dict.p();
  const double x = static_cast<double>(dict.basis_count());
  const double d = static_cast<double>(dict.atom_count());
  const cplx ew = exact_Ew(pc, dict);
  const cplx ew_hat = exact_Ew(delete_vertex(pc, v), dict);
  cplx sum_u{};
  for (unsigned u = 1; u <= pc.vertex_count; ++u) {
    if (u != v) sum_u += exact_Ew(substitute_vertex(pc, v, u), dict);
  }
  RelationGap out;
  out.lhs = ew;
  out.rhs = ew_hat / p - sum_u / (p * x);
  out.exact_rhs = (x * ew_hat - sum_u) / (d - static_cast<double>(pc.vertex_count) + 1.0);
  out.relative_gap = std::abs(out.lhs - out.rhs) / std::abs(out.lhs);
  return out;
}

Path concat(std::span<const unsigned> g1, std::span<const unsigned> g2) {
  if (g1.size() != g2.size() || g1.size() < 3 || !is_closed(g1) || !is_closed(g2) || !is_strict(g1) ||
      !is_strict(g2)) {
    throw Error(Errc::InvalidArgument, "concat needs two strict closed paths of equal length");
  }
  const std::size_t k = g1.size() - 1;
  std::size_t i1 = 0;
  while (i1 <= k && std::find(g2.begin(), g2.end(), g1[i1]) == g2.end()) ++i1;
  if (i1 > k) throw Error(Errc::InvalidArgument, "paths share no vertex");
  const auto i2 = static_cast<std::size_t>(std::find(g2.begin(), g2.end(), g1[i1]) - g2.begin());
  Path out(2 * k + 1);
  for (std::size_t j = 0; j <= 2 * k; ++j) {
    if (j <= i1) {
      out[j] = g1[j];
    } else if (j <= i1 + k) {
      out[j] = g2[(i2 + j - i1) % k];
    } else {
      out[j] = g1[j - k];
    }
  }
  return out;
}

std::string classes_csv(const std::vector<PathClass>& classes) {
  std::string s = "canonical,k,vertex_count,is_tree,dyck\n";
  for (const auto& pc : classes) {
    std::string tuple;
    for (std::size_t j = 0; j < pc.canonical.size(); ++j) {
      if (j) tuple += '-';
      tuple += std::to_string(pc.canonical[j]);
    }
    s += tuple + ',' + std::to_string(pc.length()) + ',' + std::to_string(pc.vertex_count) + ',' +
         (pc.is_tree ? "true" : "false") + ',' + (pc.is_tree ? to_dyck(pc).to_string() : "") + '\n';
  }
  return s;
}

std::string estimates_csv(const std::vector<EstimateTrajectory>& table) {
  std::string s = "class,p,n,n_tau_Ew_real,n_tau_Ew_imag\n";
  for (const auto& tr : table) {
    for (const auto& r : tr.rows) {
      s += '"' + r.class_label + "\"," + std::to_string(r.p) + ',' + std::to_string(r.n) + ',' +
           fmt_double(r.value.real()) + ',' + fmt_double(r.value.imag()) + '\n';
    }
  }
  return s;
}

}  // namespace srip
