#include "minap/zlattice.hpp"

#include <algorithm>
#include <sstream>
#include <utility>

namespace minap {

IntMatrix IntMatrix::identity(std::size_t n) {
  IntMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1;
  return m;
}

IntMatrix IntMatrix::from_rows(const std::vector<ZVec>& rows, std::size_t cols) {
  IntMatrix m(rows.size(), cols);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != cols) throw Error(ErrorCode::SupportMismatch, "row length differs from column count");
    for (std::size_t j = 0; j < cols; ++j) m.at(i, j) = rows[i][j];
  }
  return m;
}

IntMatrix IntMatrix::from_columns(const std::vector<ZVec>& cols, std::size_t rows) {
  IntMatrix m(rows, cols.size());
  for (std::size_t j = 0; j < cols.size(); ++j) {
    if (cols[j].size() != rows) throw Error(ErrorCode::SupportMismatch, "column length differs from row count");
    for (std::size_t i = 0; i < rows; ++i) m.at(i, j) = cols[j][i];
  }
  return m;
}

ZVec IntMatrix::row(std::size_t i) const {
  return ZVec(data_.begin() + static_cast<std::ptrdiff_t>(i * cols_),
              data_.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols_));
}

ZVec IntMatrix::column(std::size_t j) const {
  ZVec c(rows_);
  for (std::size_t i = 0; i < rows_; ++i) c[i] = at(i, j);
  return c;
}

IntMatrix IntMatrix::transpose() const {
  IntMatrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t.at(j, i) = at(i, j);
  return t;
}

IntMatrix IntMatrix::operator*(const IntMatrix& other) const {
  if (cols_ != other.rows_) throw Error(ErrorCode::SupportMismatch, "matrix dimensions do not match");
  IntMatrix p(rows_, other.cols_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t k = 0; k < cols_; ++k) {
      if (at(i, k) == 0) continue;
      for (std::size_t j = 0; j < other.cols_; ++j) p.at(i, j) += at(i, k) * other.at(k, j);
    }
  return p;
}

ZVec IntMatrix::operator*(const ZVec& v) const {
  if (cols_ != v.size()) throw Error(ErrorCode::SupportMismatch, "matrix/vector dimensions do not match");
  ZVec out(rows_, 0);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) out[i] += at(i, j) * v[j];
  return out;
}

bool IntMatrix::is_diagonal() const {
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j)
      if (i != j && at(i, j) != 0) return false;
  return true;
}

std::string IntMatrix::to_string() const {
  std::ostringstream os;
  os << "[";
  for (std::size_t i = 0; i < rows_; ++i) {
    os << (i ? ",[" : "[");
    for (std::size_t j = 0; j < cols_; ++j) os << (j ? "," : "") << at(i, j).get_str();
    os << "]";
  }
  os << "]";
  return os.str();
}

Integer determinant(const IntMatrix& a) {
  const std::size_t n = a.rows();
  if (n != a.cols()) throw Error(ErrorCode::SupportMismatch, "determinant of a non-square matrix");
  if (n == 0) return 1;
  IntMatrix m = a;
  Integer sign = 1;
  Integer prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m.at(k, k) == 0) {
      std::size_t p = k + 1;
      while (p < n && m.at(p, k) == 0) ++p;
      if (p == n) return 0;
      for (std::size_t j = 0; j < n; ++j) std::swap(m.at(k, j), m.at(p, j));
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        m.at(i, j) = (m.at(i, j) * m.at(k, k) - m.at(i, k) * m.at(k, j)) / prev;
      }
      m.at(i, k) = 0;
    }
    prev = m.at(k, k);
  }
  return sign * m.at(n - 1, n - 1);
}

std::vector<Integer> SmithForm::diagonal() const {
  std::vector<Integer> d;
  for (std::size_t i = 0; i < std::min(s.rows(), s.cols()); ++i) d.push_back(s.at(i, i));
  return d;
}

namespace {

struct SnfState {
  IntMatrix s, u, u_inv, v, v_inv;

  // row_i += q * row_t
  void row_addmul(std::size_t i, std::size_t t, const Integer& q) {
    if (q == 0) return;
    for (std::size_t j = 0; j < s.cols(); ++j) s.at(i, j) += q * s.at(t, j);
    for (std::size_t j = 0; j < u.cols(); ++j) u.at(i, j) += q * u.at(t, j);
    for (std::size_t r = 0; r < u_inv.rows(); ++r) u_inv.at(r, t) -= q * u_inv.at(r, i);
  }
  void row_swap(std::size_t i, std::size_t t) {
    if (i == t) return;
    for (std::size_t j = 0; j < s.cols(); ++j) std::swap(s.at(i, j), s.at(t, j));
    for (std::size_t j = 0; j < u.cols(); ++j) std::swap(u.at(i, j), u.at(t, j));
    for (std::size_t r = 0; r < u_inv.rows(); ++r) std::swap(u_inv.at(r, i), u_inv.at(r, t));
  }
  void row_neg(std::size_t t) {
    for (std::size_t j = 0; j < s.cols(); ++j) s.at(t, j) = -s.at(t, j);
    for (std::size_t j = 0; j < u.cols(); ++j) u.at(t, j) = -u.at(t, j);
    for (std::size_t r = 0; r < u_inv.rows(); ++r) u_inv.at(r, t) = -u_inv.at(r, t);
  }
  // col_j += q * col_t
  void col_addmul(std::size_t j, std::size_t t, const Integer& q) {
    if (q == 0) return;
    for (std::size_t i = 0; i < s.rows(); ++i) s.at(i, j) += q * s.at(i, t);
    for (std::size_t i = 0; i < v.rows(); ++i) v.at(i, j) += q * v.at(i, t);
    for (std::size_t c = 0; c < v_inv.cols(); ++c) v_inv.at(t, c) -= q * v_inv.at(j, c);
  }
  void col_swap(std::size_t j, std::size_t t) {
    if (j == t) return;
    for (std::size_t i = 0; i < s.rows(); ++i) std::swap(s.at(i, j), s.at(i, t));
    for (std::size_t i = 0; i < v.rows(); ++i) std::swap(v.at(i, j), v.at(i, t));
    for (std::size_t c = 0; c < v_inv.cols(); ++c) std::swap(v_inv.at(j, c), v_inv.at(t, c));
  }
};

bool smaller_abs(const Integer& a, const Integer& b) { return mpz_cmpabs(a.get_mpz_t(), b.get_mpz_t()) < 0; }

}  // namespace

SmithForm smith_normal_form(const IntMatrix& a) {
  const std::size_t r = a.rows();
  const std::size_t c = a.cols();
  SnfState st{a, IntMatrix::identity(r), IntMatrix::identity(r), IntMatrix::identity(c),
              IntMatrix::identity(c)};
  std::size_t t = 0;
  while (t < std::min(r, c)) {
    std::size_t bi = r, bj = c;
    for (std::size_t i = t; i < r; ++i)
      for (std::size_t j = t; j < c; ++j) {
        const Integer& x = st.s.at(i, j);
        if (x != 0 && (bi == r || smaller_abs(x, st.s.at(bi, bj)))) {
          bi = i;
          bj = j;
        }
      }
    if (bi == r) break;
    st.row_swap(t, bi);
    st.col_swap(t, bj);
    while (true) {
      bool changed = false;
      for (std::size_t i = t + 1; i < r; ++i) {
        if (st.s.at(i, t) == 0) continue;
        Integer q = st.s.at(i, t) / st.s.at(t, t);
        st.row_addmul(i, t, -q);
        if (st.s.at(i, t) != 0) changed = true;
      }
      for (std::size_t j = t + 1; j < c; ++j) {
        if (st.s.at(t, j) == 0) continue;
        Integer q = st.s.at(t, j) / st.s.at(t, t);
        st.col_addmul(j, t, -q);
        if (st.s.at(t, j) != 0) changed = true;
      }
      if (changed) {
        std::size_t pi = t, pj = t;
        for (std::size_t i = t + 1; i < r; ++i)
          if (st.s.at(i, t) != 0 && smaller_abs(st.s.at(i, t), st.s.at(pi, pj))) {
            pi = i;
            pj = t;
          }
        for (std::size_t j = t + 1; j < c; ++j)
          if (st.s.at(t, j) != 0 && smaller_abs(st.s.at(t, j), st.s.at(pi, pj))) {
            pi = t;
            pj = j;
          }
        st.row_swap(t, pi);
        st.col_swap(t, pj);
        continue;
      }
      bool fixed = false;
      for (std::size_t i = t + 1; i < r && !fixed; ++i)
        for (std::size_t j = t + 1; j < c; ++j) {
          Integer rem = st.s.at(i, j) % st.s.at(t, t);
          if (rem != 0) {
            st.row_addmul(t, i, 1);
            fixed = true;
            break;
          }
        }
      if (!fixed) break;
    }
    if (st.s.at(t, t) < 0) st.row_neg(t);
    ++t;
  }
  SmithForm out{std::move(st.u), std::move(st.s), std::move(st.v), std::move(st.u_inv), std::move(st.v_inv), t};
  return out;
}

IntMatrix hermite_normal_form(const IntMatrix& rows) {
  IntMatrix m = rows;
  const std::size_t r = m.rows();
  const std::size_t c = m.cols();
  auto addmul = [&](std::size_t i, std::size_t t, const Integer& q) {
    for (std::size_t j = 0; j < c; ++j) m.at(i, j) += q * m.at(t, j);
  };
  auto swap_rows = [&](std::size_t i, std::size_t t) {
    if (i == t) return;
    for (std::size_t j = 0; j < c; ++j) std::swap(m.at(i, j), m.at(t, j));
  };
  std::size_t pr = 0;
  for (std::size_t col = 0; col < c && pr < r; ++col) {
    while (true) {
      std::size_t best = r;
      for (std::size_t i = pr; i < r; ++i)
        if (m.at(i, col) != 0 && (best == r || smaller_abs(m.at(i, col), m.at(best, col)))) best = i;
      if (best == r) break;
      swap_rows(pr, best);
      bool done = true;
      for (std::size_t i = pr + 1; i < r; ++i) {
        if (m.at(i, col) == 0) continue;
        Integer q = m.at(i, col) / m.at(pr, col);
        addmul(i, pr, -q);
        if (m.at(i, col) != 0) done = false;
      }
      if (done) break;
    }
    if (m.at(pr, col) == 0) continue;
    if (m.at(pr, col) < 0)
      for (std::size_t j = 0; j < c; ++j) m.at(pr, j) = -m.at(pr, j);
    for (std::size_t i = 0; i < pr; ++i) {
      Integer q;
      mpz_fdiv_q(q.get_mpz_t(), m.at(i, col).get_mpz_t(), m.at(pr, col).get_mpz_t());
      addmul(i, pr, -q);
    }
    ++pr;
  }
  IntMatrix out(pr, c);
  for (std::size_t i = 0; i < pr; ++i)
    for (std::size_t j = 0; j < c; ++j) out.at(i, j) = m.at(i, j);
  return out;
}

std::vector<ZVec> integer_kernel(const IntMatrix& a) {
  SmithForm f = smith_normal_form(a);
  std::vector<ZVec> out;
  for (std::size_t j = f.rank; j < a.cols(); ++j) out.push_back(f.v.column(j));
  return out;
}

std::optional<ZVec> solve_integer(const IntMatrix& a, const ZVec& b) {
  if (b.size() != a.rows()) throw Error(ErrorCode::SupportMismatch, "right-hand side length differs");
  SmithForm f = smith_normal_form(a);
  ZVec ub = f.u * b;
  ZVec y(a.cols(), 0);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    if (i < f.rank) {
      const Integer& s = f.s.at(i, i);
      if (ub[i] % s != 0) return std::nullopt;
      y[i] = ub[i] / s;
    } else if (ub[i] != 0) {
      return std::nullopt;
    }
  }
  return f.v * y;
}

namespace {

IntMatrix augment_moduli(const IntMatrix& a, const ZVec& moduli) {
  if (moduli.size() != a.rows()) throw Error(ErrorCode::SupportMismatch, "one modulus per row required");
  std::size_t extra = 0;
  for (const auto& m : moduli)
    if (m != 0) ++extra;
  IntMatrix aug(a.rows(), a.cols() + extra);
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) aug.at(i, j) = a.at(i, j);
  std::size_t col = a.cols();
  for (std::size_t i = 0; i < a.rows(); ++i)
    if (moduli[i] != 0) aug.at(i, col++) = moduli[i];
  return aug;
}

}  // namespace

std::optional<ZVec> solve_congruence(const IntMatrix& a, const ZVec& moduli, const ZVec& b) {
  auto sol = solve_integer(augment_moduli(a, moduli), b);
  if (!sol) return std::nullopt;
  sol->resize(a.cols());
  return sol;
}

std::vector<ZVec> congruence_kernel(const IntMatrix& a, const ZVec& moduli) {
  std::vector<ZVec> out;
  for (auto& k : integer_kernel(augment_moduli(a, moduli))) {
    k.resize(a.cols());
    if (!is_zero(k)) out.push_back(std::move(k));
  }
  return out;
}

ZVec reduce(const ZVec& x, const ZVec& moduli) {
  if (x.size() != moduli.size()) throw Error(ErrorCode::SupportMismatch, "vector length differs from ambient");
  ZVec out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = mod_floor(x[i], moduli[i]);
  return out;
}

bool is_zero(const ZVec& x) {
  return std::all_of(x.begin(), x.end(), [](const Integer& v) { return v == 0; });
}

Integer element_order(const ZVec& x, const ZVec& moduli) {
  Integer o = 1;
  for (std::size_t i = 0; i < x.size(); ++i) {
    Integer v = mod_floor(x[i], moduli[i]);
    if (v == 0) continue;
    if (moduli[i] == 0) return 0;
    o = lcm(o, moduli[i] / gcd(v, moduli[i]));
  }
  return o;
}

namespace {

void check_dims(const std::vector<ZVec>& xs, const ZVec& moduli) {
  for (const auto& x : xs)
    if (x.size() != moduli.size()) throw Error(ErrorCode::SupportMismatch, "vector length differs from ambient");
}

}  // namespace

Membership subgroup_membership(const std::vector<ZVec>& gens, const ZVec& moduli, const ZVec& x) {
  check_dims(gens, moduli);
  check_dims({x}, moduli);
  if (gens.empty()) return Membership{is_zero(reduce(x, moduli)), {}};
  auto sol = solve_congruence(IntMatrix::from_columns(gens, moduli.size()), moduli, x);
  if (!sol) return Membership{false, {}};
  return Membership{true, *sol};
}

std::vector<ZVec> subgroup_intersection(const std::vector<ZVec>& a, const std::vector<ZVec>& b,
                                        const ZVec& moduli) {
  check_dims(a, moduli);
  check_dims(b, moduli);
  if (a.empty() || b.empty()) return {};
  std::vector<ZVec> cols = a;
  for (const auto& y : b) {
    ZVec n(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) n[i] = -y[i];
    cols.push_back(std::move(n));
  }
  const IntMatrix am = IntMatrix::from_columns(a, moduli.size());
  std::vector<ZVec> out;
  for (const auto& k : congruence_kernel(IntMatrix::from_columns(cols, moduli.size()), moduli)) {
    ZVec alpha(k.begin(), k.begin() + static_cast<std::ptrdiff_t>(a.size()));
    ZVec x = reduce(am * alpha, moduli);
    if (!is_zero(x) && std::find(out.begin(), out.end(), x) == out.end()) out.push_back(std::move(x));
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool is_independent(const std::vector<ZVec>& elems, const ZVec& moduli) {
  check_dims(elems, moduli);
  for (std::size_t i = 0; i < elems.size(); ++i) {
    std::vector<ZVec> others;
    for (std::size_t j = 0; j < elems.size(); ++j)
      if (j != i) others.push_back(elems[j]);
    if (!subgroup_intersection({elems[i]}, others, moduli).empty()) return false;
  }
  return true;
}

bool contains_all(const std::vector<ZVec>& gens, const std::vector<ZVec>& xs, const ZVec& moduli) {
  return std::all_of(xs.begin(), xs.end(),
                     [&](const ZVec& x) { return subgroup_membership(gens, moduli, x).member; });
}

bool same_subgroup(const std::vector<ZVec>& a, const std::vector<ZVec>& b, const ZVec& moduli) {
  return contains_all(a, b, moduli) && contains_all(b, a, moduli);
}

IntMatrix subgroup_hnf(const std::vector<ZVec>& gens, const ZVec& moduli) {
  check_dims(gens, moduli);
  std::vector<ZVec> rows = gens;
  for (std::size_t i = 0; i < moduli.size(); ++i) {
    if (moduli[i] == 0) continue;
    ZVec r(moduli.size(), 0);
    r[i] = moduli[i];
    rows.push_back(std::move(r));
  }
  return hermite_normal_form(IntMatrix::from_rows(rows, moduli.size()));
}

Integer ambient_order(const ZVec& moduli) {
  Integer o = 1;
  for (const auto& m : moduli) {
    if (m == 0) throw Error(ErrorCode::Unsupported, "ambient group is infinite");
    o *= m;
  }
  return o;
}

std::vector<Integer> quotient_invariants(const std::vector<ZVec>& gens, const ZVec& moduli) {
  check_dims(gens, moduli);
  ambient_order(moduli);
  IntMatrix aug = augment_moduli(IntMatrix::from_columns(gens, moduli.size()), moduli);
  std::vector<Integer> out;
  for (const auto& s : smith_normal_form(aug).diagonal())
    if (s != 1) out.push_back(s);
  return out;
}

Integer subgroup_order(const std::vector<ZVec>& gens, const ZVec& moduli) {
  Integer index = 1;
  for (const auto& s : quotient_invariants(gens, moduli)) index *= s;
  return ambient_order(moduli) / index;
}

CyclicBasis subgroup_basis(const std::vector<ZVec>& gens, const ZVec& moduli) {
  check_dims(gens, moduli);
  ambient_order(moduli);
  CyclicBasis out;
  if (gens.empty()) return out;
  const std::size_t n = gens.size();
  const IntMatrix g = IntMatrix::from_columns(gens, moduli.size());
  // Relations among the generators, as columns of an n x k matrix.
  std::vector<ZVec> rel = congruence_kernel(g, moduli);
  IntMatrix rt = IntMatrix::from_columns(rel, n);
  SmithForm f = smith_normal_form(rt);
  for (std::size_t i = 0; i < n; ++i) {
    Integer s = i < f.rank ? Integer(f.s.at(i, i)) : Integer(0);
    if (s == 0) throw Error(ErrorCode::Unsupported, "relation lattice not of full rank");
    if (s == 1) continue;
    out.gens.push_back(reduce(g * f.u_inv.column(i), moduli));
    out.orders.push_back(s);
  }
  return out;
}

namespace {

struct Flat {
  Coordinates coords;
  std::vector<ZVec> vecs;
};

Flat flatten_all(const BlockGroup& g, const std::vector<Element>& xs) {
  Coordinates coords(g, union_support(xs));
  std::vector<ZVec> vecs;
  vecs.reserve(xs.size());
  for (const auto& x : xs) vecs.push_back(coords.flatten(x));
  return Flat{std::move(coords), std::move(vecs)};
}

}  // namespace

Membership subgroup_membership(const BlockGroup& g, const std::vector<Element>& gens, const Element& x) {
  std::vector<Element> all = gens;
  all.push_back(x);
  Flat f = flatten_all(g, all);
  ZVec xv = f.vecs.back();
  f.vecs.pop_back();
  return subgroup_membership(f.vecs, f.coords.moduli(), xv);
}

std::vector<Element> subgroup_intersection(const BlockGroup& g, const std::vector<Element>& a,
                                           const std::vector<Element>& b) {
  std::vector<Element> all = a;
  all.insert(all.end(), b.begin(), b.end());
  Flat f = flatten_all(g, all);
  std::vector<ZVec> av(f.vecs.begin(), f.vecs.begin() + static_cast<std::ptrdiff_t>(a.size()));
  std::vector<ZVec> bv(f.vecs.begin() + static_cast<std::ptrdiff_t>(a.size()), f.vecs.end());
  std::vector<Element> out;
  for (const auto& v : subgroup_intersection(av, bv, f.coords.moduli())) out.push_back(f.coords.unflatten(v));
  return out;
}

bool is_independent(const BlockGroup& g, const std::vector<Element>& elems) {
  Flat f = flatten_all(g, elems);
  return is_independent(f.vecs, f.coords.moduli());
}

}  // namespace minap
