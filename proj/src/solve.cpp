#include "fincover/solve.hpp"

#include <algorithm>
#include <deque>

namespace fincover {

namespace mp = boost::multiprecision;

bool GluingSystem::satisfied_by(const std::vector<Int>& omega) const {
  if (omega.size() != n_cols) return false;
  for (const Int& w : omega)
    if (w <= 0) return false;
  for (const Row& row : rows) {
    Int sum = 0;
    for (int j : row.plus) sum += omega[j];
    for (int j : row.minus) sum -= omega[j];
    if (sum != 0) return false;
  }
  return true;
}

GluingSystem build_system(const std::vector<PolyPair>& pairs, const std::vector<FacePair>& faces,
                          const IncidenceTable& inc) {
  GluingSystem sys;
  sys.n_cols = pairs.size();
  for (const auto& p : pairs) sys.col_ids.push_back(p.id);
  for (std::size_t i = 0; i < faces.size(); ++i) {
    if (inc.left[i].empty() && inc.right[i].empty()) continue;  // vacuous: no slot glues here
    GluingSystem::Row row;
    row.id = faces[i].id;
    row.plus = inc.left[i];
    row.minus = inc.right[i];
    sys.rows.push_back(std::move(row));
  }
  return sys;
}

MeasureResult solve_measure(const ColourGraph& cg,
                            const std::map<int, std::pair<long, long>>& counts) {
  // Nodes: vertex colours.  Arcs: edge colours with ratio m(head)/m(tail) = nL/nR.
  struct Arc {
    int other;
    int edge_colour;
    Rational ratio;  // multiply when walking tail -> head; divide the other way
    bool forward;
  };
  std::map<int, std::vector<Arc>> adj;
  for (const auto& vc : cg.vertex_colours) adj[vc.colour];
  for (const auto& [ecolour, nlr] : counts) {
    const auto& ec = cg.edge_colour(ecolour);
    Rational ratio(nlr.first, nlr.second);  // nL / nR
    adj[ec.tail_colour].push_back({ec.head_colour, ecolour, ratio, true});
    adj[ec.head_colour].push_back({ec.tail_colour, ecolour, ratio, false});
  }

  MeasureAssignment ma;
  std::map<int, std::pair<int, int>> parent;  // colour -> (parent colour, via edge colour)
  for (const auto& [root, arcs] : adj) {
    (void)arcs;
    if (ma.vertex_colour_measure.count(root)) continue;
    ma.vertex_colour_measure[root] = 1;
    parent[root] = {-1, -1};
    std::deque<int> queue{root};
    while (!queue.empty()) {
      int u = queue.front();
      queue.pop_front();
      for (const Arc& a : adj.at(u)) {
        if (ma.vertex_colour_measure.count(a.other)) continue;
        Rational m = ma.vertex_colour_measure.at(u);
        ma.vertex_colour_measure[a.other] =
            a.forward ? Rational(m * a.ratio) : Rational(m / a.ratio);
        parent[a.other] = {u, a.edge_colour};
        queue.push_back(a.other);
      }
    }
  }

  // verify every arc; collect the offending cycle on failure
  for (const auto& [ecolour, nlr] : counts) {
    const auto& ec = cg.edge_colour(ecolour);
    const Rational& mt = ma.vertex_colour_measure.at(ec.tail_colour);
    const Rational& mh = ma.vertex_colour_measure.at(ec.head_colour);
    if (mt * nlr.first == mh * nlr.second) {
      ma.edge_colour_measure[ecolour] = mt * nlr.first;
      continue;
    }
    RatioInconsistency bad;
    // tree path tail -> root -> head, closed by this edge colour
    auto path_to_root = [&](int c) {
      std::vector<int> edges;
      while (parent.at(c).first != -1) {
        edges.push_back(parent.at(c).second);
        c = parent.at(c).first;
      }
      return edges;
    };
    bad.cycle_edge_colours = path_to_root(ec.tail_colour);
    auto up = path_to_root(ec.head_colour);
    bad.cycle_edge_colours.insert(bad.cycle_edge_colours.end(), up.rbegin(), up.rend());
    bad.cycle_edge_colours.push_back(ecolour);
    bad.message =
        concat("ratio cycle does not close: edge colour ", ecolour, " demands m(",
               ec.tail_colour, ") * ", nlr.first, " = m(", ec.head_colour, ") * ", nlr.second,
               " but propagation gave ", mt.str(), " and ", mh.str(),
               " (non-unimodular configuration)");
    return bad;
  }
  return ma;
}

Weighting weights_from_measure(const MeasureAssignment& ma, const ComplexView& x1,
                               const Colouring& c, const std::vector<PolyPair>& pairs) {
  (void)x1;
  std::vector<Rational> raw;
  raw.reserve(pairs.size());
  for (const auto& p : pairs)
    raw.push_back(ma.vertex_colour_measure.at(c.vertex_colour[0][p.u1]));

  Int lcd = 1;
  for (const auto& r : raw) lcd = mp::lcm(lcd, Int(mp::denominator(r)));
  Weighting w;
  Int g = 0;
  for (const auto& r : raw) {
    Int v = Int(mp::numerator(r)) * (lcd / Int(mp::denominator(r)));
    g = mp::gcd(g, v);
    w.omega.push_back(v);
  }
  if (g > 1)
    for (auto& v : w.omega) v /= g;
  return w;
}

namespace {

// Dense exact-rational simplex tableau for
//   minimize c^T v   s.t.  T v = rhs,  v >= 0
// with Bland's rule throughout (deterministic, cycle-free).
class Simplex {
 public:
  Simplex(std::vector<std::vector<Rational>> rows, std::vector<Rational> rhs)
      : t_(std::move(rows)), rhs_(std::move(rhs)), m_(t_.size()),
        n_(m_ ? t_[0].size() : 0), basis_(m_, -1) {}

  void set_basis(int row, int col) { basis_[row] = col; }

  // Runs to optimality of the objective c (size n_).  Entering columns are
  // restricted to j < limit (phase 2 must not reintroduce artificials).
  void optimize(const std::vector<Rational>& c, std::size_t limit) {
    while (true) {
      std::vector<Rational> cb = basic_costs(c);
      int enter = -1;
      for (std::size_t j = 0; j < limit && enter < 0; ++j) {
        if (is_basic(j)) continue;
        Rational red = c[j];
        for (std::size_t r = 0; r < m_; ++r) red -= cb[r] * t_[r][j];
        if (red < 0) enter = static_cast<int>(j);
      }
      if (enter < 0) return;
      int leave = -1;
      Rational best;
      for (std::size_t r = 0; r < m_; ++r) {
        if (t_[r][enter] <= 0) continue;
        Rational ratio = rhs_[r] / t_[r][enter];
        if (leave < 0 || ratio < best ||
            (ratio == best && basis_[r] < basis_[leave])) {
          leave = static_cast<int>(r);
          best = ratio;
        }
      }
      if (leave < 0) throw Error("simplex: unbounded objective (bug)");
      pivot(leave, enter);
    }
  }

  // The tableau is kept in B^{-1}A form, so the reduced cost of column j is
  // c_j - sum_r c_B[r] * t_[r][j].
  std::vector<Rational> basic_costs(const std::vector<Rational>& c) const {
    std::vector<Rational> cb(m_);
    for (std::size_t r = 0; r < m_; ++r) cb[r] = c[basis_[r]];
    return cb;
  }

  Rational objective(const std::vector<Rational>& c) const {
    Rational v = 0;
    for (std::size_t r = 0; r < m_; ++r) v += c[basis_[r]] * rhs_[r];
    return v;
  }

  // value of variable j in the current basic solution
  Rational value(std::size_t j) const {
    for (std::size_t r = 0; r < m_; ++r)
      if (basis_[r] == static_cast<int>(j)) return rhs_[r];
    return 0;
  }

  // reduced cost of column j under cost vector c
  Rational reduced_cost(const std::vector<Rational>& c, std::size_t j) const {
    Rational red = c[j];
    for (std::size_t r = 0; r < m_; ++r) red -= c[basis_[r]] * t_[r][j];
    return red;
  }

  bool is_basic(std::size_t j) const {
    for (std::size_t r = 0; r < m_; ++r)
      if (basis_[r] == static_cast<int>(j)) return true;
    return false;
  }

  int basic_col(std::size_t row) const { return basis_[row]; }

  void pivot(int row, int col) {
    Rational p = t_[row][col];
    for (auto& x : t_[row]) x /= p;
    rhs_[row] /= p;
    for (std::size_t r = 0; r < m_; ++r) {
      if (static_cast<int>(r) == row) continue;
      Rational f = t_[r][col];
      if (f == 0) continue;
      for (std::size_t j = 0; j < n_; ++j) t_[r][j] -= f * t_[row][j];
      rhs_[r] -= f * rhs_[row];
    }
    basis_[row] = col;
  }

  Rational entry(std::size_t r, std::size_t j) const { return t_[r][j]; }
  std::size_t rows() const { return m_; }

 private:
  std::vector<std::vector<Rational>> t_;
  std::vector<Rational> rhs_;
  std::size_t m_, n_;
  std::vector<int> basis_;
};

}  // namespace

KernelResult solve_positive_kernel(const GluingSystem& sys) {
  const std::size_t m = sys.rows.size();
  const std::size_t n = sys.n_cols;

  // Substitute omega = 1 + y, y >= 0:  A y = b  with  b = -A 1.
  // Rows are sign-normalized so b >= 0, then one artificial per row.
  std::vector<std::vector<Rational>> t(m, std::vector<Rational>(n + m, Rational(0)));
  std::vector<Rational> rhs(m);
  std::vector<int> row_sign(m, 1);
  for (std::size_t r = 0; r < m; ++r) {
    long b = static_cast<long>(sys.rows[r].minus.size()) -
             static_cast<long>(sys.rows[r].plus.size());
    row_sign[r] = b < 0 ? -1 : 1;
    for (int j : sys.rows[r].plus) t[r][j] += row_sign[r];
    for (int j : sys.rows[r].minus) t[r][j] -= row_sign[r];
    t[r][n + r] = 1;
    rhs[r] = Rational(row_sign[r] * b);
  }

  Simplex sx(std::move(t), std::move(rhs));
  for (std::size_t r = 0; r < m; ++r) sx.set_basis(static_cast<int>(r), static_cast<int>(n + r));

  std::vector<Rational> phase1(n + m, Rational(0));
  for (std::size_t r = 0; r < m; ++r) phase1[n + r] = 1;
  sx.optimize(phase1, n + m);

  if (sx.objective(phase1) > 0) {
    // Farkas: from the phase-1 duals, z^T A <= 0 with z^T b > 0; report -z
    // (sign-unnormalized) so that c^T M >= 0 and (c^T M) 1 > 0.
    InfeasibleCertificate cert;
    cert.row_combination.resize(m);
    for (std::size_t r = 0; r < m; ++r) {
      // reduced cost of artificial r is 1 - y_r
      Rational y = Rational(1) - sx.reduced_cost(phase1, n + r);
      cert.row_combination[r] = -y * row_sign[r];
    }
    // verify the certificate exactly before returning it
    std::vector<Rational> combo(n, Rational(0));
    for (std::size_t r = 0; r < m; ++r) {
      for (int j : sys.rows[r].plus) combo[j] += cert.row_combination[r];
      for (int j : sys.rows[r].minus) combo[j] -= cert.row_combination[r];
    }
    Rational total = 0;
    for (const auto& v : combo) {
      if (v < 0) throw Error("solve_positive_kernel: invalid infeasibility certificate (bug)");
      total += v;
    }
    if (total <= 0)
      throw Error("solve_positive_kernel: degenerate infeasibility certificate (bug)");
    cert.message = concat("no strictly positive integer weighting exists: a nonnegative "
                          "row combination of the gluing equations has positive total "
                          "coefficient sum");
    return cert;
  }

  // Drive any artificial still basic (at value 0) out of the basis.
  for (std::size_t r = 0; r < m; ++r) {
    if (sx.basic_col(r) < static_cast<int>(n)) continue;
    for (std::size_t j = 0; j < n; ++j) {
      if (sx.entry(r, j) != 0) {
        sx.pivot(static_cast<int>(r), static_cast<int>(j));
        break;
      }
    }
    // an all-zero row is redundant; its artificial stays basic at value 0
  }

  std::vector<Rational> phase2(n + m, Rational(0));
  for (std::size_t j = 0; j < n; ++j) phase2[j] = 1;
  sx.optimize(phase2, n);

  std::vector<Rational> x(n);
  for (std::size_t j = 0; j < n; ++j) x[j] = sx.value(j) + 1;

  Int lcd = 1;
  for (const auto& r : x) lcd = mp::lcm(lcd, Int(mp::denominator(r)));
  Weighting w;
  Int g = 0;
  for (const auto& r : x) {
    Int v = Int(mp::numerator(r)) * (lcd / Int(mp::denominator(r)));
    g = mp::gcd(g, v);
    w.omega.push_back(v);
  }
  if (g > 1)
    for (auto& v : w.omega) v /= g;

  if (!sys.satisfied_by(w.omega))
    throw Error("solve_positive_kernel: produced weighting fails the system (bug)");
  return w;
}

}  // namespace fincover
