#include "ttg/sheaf.hpp"

#include <algorithm>

#include "ttg/error.hpp"
#include "ttg/perf_oracle.hpp"
#include "ttg/verdier.hpp"

namespace ttg {

Presheaf::Presheaf(FiniteSpace space, Field field, int degree_lo, int degree_hi)
    : space_(std::move(space)), field_(field), lo_(degree_lo), hi_(degree_hi) {
  if (hi_ < lo_) throw Error(ErrorKind::Schema, "empty degree window");
  dims_.assign(space_.opens().size() * static_cast<std::size_t>(hi_ - lo_ + 1), 0);
}

std::size_t Presheaf::slot(PointSet u, int d) const {
  if (d < lo_ || d > hi_) throw Error(ErrorKind::DegreeOutOfWindow, "degree " + std::to_string(d));
  return space_.open_index(u) * static_cast<std::size_t>(hi_ - lo_ + 1) + static_cast<std::size_t>(d - lo_);
}

std::size_t Presheaf::dim(PointSet u, int d) const {
  if (d < lo_ || d > hi_) return 0;
  return dims_[slot(u, d)];
}

void Presheaf::set_dim(PointSet u, int d, std::size_t n) { dims_[slot(u, d)] = n; }

Matrix Presheaf::restriction(PointSet u, PointSet v, int d) const {
  if (auto it = res_.find({u, v, d}); it != res_.end()) return it->second;
  if (u == v) return Matrix::identity(field_, dim(u, d));
  return Matrix(field_, dim(v, d), dim(u, d));
}

void Presheaf::set_restriction(PointSet u, PointSet v, int d, Matrix m) {
  if ((v & ~u) != 0) throw Error(ErrorKind::Schema, "restriction to a set that is not contained in the source");
  if (m.rows() != dim(v, d) || m.cols() != dim(u, d)) throw Error(ErrorKind::Schema, "restriction has wrong shape");
  res_[{u, v, d}] = std::move(m);
}

const CommAlgebra& Presheaf::ring(PointSet u) const {
  if (!has_ring_) throw Error(ErrorKind::Schema, "presheaf carries no ring structure");
  return rings_.at(space_.open_index(u));
}

void Presheaf::set_ring(PointSet u, CommAlgebra a) {
  if (a.dim() != dim(u, 0)) throw Error(ErrorKind::Schema, "ring dimension differs from the degree 0 sections");
  if (!has_ring_) {
    rings_.assign(space_.opens().size(), CommAlgebra(field_, {}, {}, {}));
    has_ring_ = true;
  }
  rings_[space_.open_index(u)] = std::move(a);
}

const std::vector<Matrix>& Presheaf::action(PointSet u, int d) const {
  static const std::vector<Matrix> none;
  auto it = actions_.find({u, d});
  return it == actions_.end() ? none : it->second;
}

void Presheaf::set_action(PointSet u, int d, std::vector<Matrix> a) {
  for (const auto& m : a)
    if (m.rows() != dim(u, d) || m.cols() != dim(u, d)) throw Error(ErrorKind::Schema, "action has wrong shape");
  actions_[{u, d}] = std::move(a);
}

std::vector<std::string> open_labels(const FiniteSpace& x, PointSet u) {
  std::vector<std::string> out;
  for (auto i : points_of(u)) out.push_back(x.labels()[i]);
  return out;
}

namespace {

std::string open_text(const FiniteSpace& x, PointSet u) {
  std::string s = "{";
  for (const auto& l : open_labels(x, u)) s += (s.size() > 1 ? "," : "") + l;
  return s + "}";
}

Vec solve_or_throw(const Matrix& a, const Vec& b, const char* what) {
  auto v = solve(a, b);
  if (!v) throw Error(ErrorKind::Arithmetic, what);
  return *v;
}

}  // namespace

void check_functorial(const Presheaf& f) {
  const auto& x = f.space();
  const auto& opens = x.opens();
  for (int d = f.degree_lo(); d <= f.degree_hi(); ++d)
    for (auto w : opens) {
      if (!(f.restriction(w, w, d) == Matrix::identity(f.field(), f.dim(w, d))))
        throw Error(ErrorKind::NotFunctorial, "restriction " + open_text(x, w) + " to itself is not the identity in degree " +
                                                  std::to_string(d));
      for (auto u : opens) {
        if ((u & ~w) != 0) continue;
        for (auto v : opens) {
          if ((v & ~u) != 0) continue;
          if (!(f.restriction(u, v, d) * f.restriction(w, u, d) == f.restriction(w, v, d)))
            throw Error(ErrorKind::NotFunctorial, "restrictions " + open_text(x, w) + " > " + open_text(x, u) + " > " +
                                                      open_text(x, v) + " do not compose in degree " +
                                                      std::to_string(d));
        }
      }
    }
}

std::vector<DescentFailure> check_descent(const Presheaf& f) {
  std::vector<DescentFailure> out;
  const auto& x = f.space();
  const Field k = f.field();
  for (int d = f.degree_lo(); d <= f.degree_hi(); ++d)
    for (auto u : x.opens())
      for (const auto& cover : x.covers_of(u)) {
        std::vector<std::size_t> off;
        std::size_t total = 0;
        for (auto v : cover) {
          off.push_back(total);
          total += f.dim(v, d);
        }
        const std::size_t n = f.dim(u, d);
        Matrix phi(k, total, n);
        for (std::size_t c = 0; c < cover.size(); ++c) {
          Matrix r = f.restriction(u, cover[c], d);
          for (std::size_t i = 0; i < r.rows(); ++i)
            for (std::size_t j = 0; j < n; ++j) phi(off[c] + i, j) = r(i, j);
        }
        std::vector<Vec> rows;
        for (std::size_t a = 0; a < cover.size(); ++a)
          for (std::size_t b = a + 1; b < cover.size(); ++b) {
            PointSet w = cover[a] & cover[b];
            Matrix ra = f.restriction(cover[a], w, d), rb = f.restriction(cover[b], w, d);
            for (std::size_t i = 0; i < f.dim(w, d); ++i) {
              Vec row = zeros(k, total);
              for (std::size_t j = 0; j < ra.cols(); ++j) row[off[a] + j] += ra(i, j);
              for (std::size_t j = 0; j < rb.cols(); ++j) row[off[b] + j] -= rb(i, j);
              rows.push_back(std::move(row));
            }
          }
        std::size_t eq = total - (rows.empty() ? 0 : rank(Matrix::from_rows(k, total, rows)));
        std::size_t img = rank(phi);
        if (img != n || eq != img) {
          DescentFailure fail{u, cover, d, ""};
          fail.detail = "sections over " + open_text(x, u) + " have dimension " + std::to_string(n) + ", image " +
                        std::to_string(img) + ", equalizer " + std::to_string(eq) + " in degree " + std::to_string(d);
          out.push_back(std::move(fail));
        }
      }
  return out;
}

Sheafification sheafify(const Presheaf& f, const Sheafification* acting) {
  check_functorial(f);
  if (f.has_action() && !acting) throw Error(ErrorKind::Schema, "module presheaf needs its acting ring");
  const auto& x = f.space();
  const Field k = f.field();
  Sheafification out{Presheaf(x, k, f.degree_lo(), f.degree_hi()), {}, {}};
  Presheaf& g = out.sheaf;

  struct Ambient {
    std::vector<std::size_t> points, offsets;
    std::size_t total = 0;
  };
  auto ambient = [&](PointSet u, int d) {
    Ambient a;
    for (auto p : points_of(u)) {
      a.points.push_back(p);
      a.offsets.push_back(a.total);
      a.total += f.dim(x.minimal_open(p), d);
    }
    return a;
  };
  // Family of stalk images of a section over u.
  auto family = [&](PointSet u, int d, const Ambient& a, const Vec& s) {
    Vec v = zeros(k, a.total);
    for (std::size_t i = 0; i < a.points.size(); ++i) {
      Vec part = f.restriction(u, x.minimal_open(a.points[i]), d) * s;
      std::copy(part.begin(), part.end(), v.begin() + static_cast<std::ptrdiff_t>(a.offsets[i]));
    }
    return v;
  };

  for (int d = f.degree_lo(); d <= f.degree_hi(); ++d) {
    for (auto u : x.opens()) {
      Ambient a = ambient(u, d);
      std::vector<Vec> rows;
      for (std::size_t i = 0; i < a.points.size(); ++i) {
        PointSet ux = x.minimal_open(a.points[i]);
        for (std::size_t j = 0; j < a.points.size(); ++j) {
          if (i == j || !point_in(ux, a.points[j])) continue;
          Matrix r = f.restriction(ux, x.minimal_open(a.points[j]), d);
          for (std::size_t row = 0; row < r.rows(); ++row) {
            Vec v = zeros(k, a.total);
            for (std::size_t c = 0; c < r.cols(); ++c) v[a.offsets[i] + c] = r(row, c);
            v[a.offsets[j] + row] -= k.one();
            rows.push_back(std::move(v));
          }
        }
      }
      std::vector<Vec> basis =
          rows.empty() ? [&] {
            std::vector<Vec> b;
            for (std::size_t c = 0; c < a.total; ++c) b.push_back(unit_vector(k, a.total, c));
            return b;
          }()
                       : kernel_basis(Matrix::from_rows(k, a.total, rows));
      Matrix emb = Matrix::from_columns(k, a.total, basis);
      g.set_dim(u, d, basis.size());
      Matrix can(k, basis.size(), f.dim(u, d));
      for (std::size_t c = 0; c < f.dim(u, d); ++c)
        can.set_column(c, solve_or_throw(emb, family(u, d, a, unit_vector(k, f.dim(u, d), c)),
                                         "presheaf section is not a compatible family"));
      out.canonical[{u, d}] = std::move(can);
      out.embedding[{u, d}] = std::move(emb);
    }
    for (auto u : x.opens()) {
      const Matrix& eu = out.embedding.at({u, d});
      Ambient au = ambient(u, d);
      for (auto v : x.opens()) {
        if (v == u || (v & ~u) != 0) continue;
        const Matrix& ev = out.embedding.at({v, d});
        Ambient av = ambient(v, d);
        Matrix r(k, ev.cols(), eu.cols());
        for (std::size_t c = 0; c < eu.cols(); ++c) {
          Vec col = eu.column(c);
          Vec proj = zeros(k, av.total);
          for (std::size_t i = 0; i < av.points.size(); ++i) {
            auto pos = std::find(au.points.begin(), au.points.end(), av.points[i]) - au.points.begin();
            std::size_t n = f.dim(x.minimal_open(av.points[i]), d);
            for (std::size_t t = 0; t < n; ++t) proj[av.offsets[i] + t] = col[au.offsets[static_cast<std::size_t>(pos)] + t];
          }
          r.set_column(c, solve_or_throw(ev, proj, "restricted family is not compatible"));
        }
        g.set_restriction(u, v, d, std::move(r));
      }
    }
  }

  if (f.has_ring() && f.degree_lo() <= 0 && f.degree_hi() >= 0) {
    for (auto u : x.opens()) {
      const Matrix& e = out.embedding.at({u, 0});
      Ambient a = ambient(u, 0);
      auto mul_families = [&](const Vec& p, const Vec& q) {
        Vec r = zeros(k, a.total);
        for (std::size_t i = 0; i < a.points.size(); ++i) {
          const CommAlgebra& ring = f.ring(x.minimal_open(a.points[i]));
          const std::size_t n = ring.dim();
          Vec pi(p.begin() + static_cast<std::ptrdiff_t>(a.offsets[i]),
                 p.begin() + static_cast<std::ptrdiff_t>(a.offsets[i] + n));
          Vec qi(q.begin() + static_cast<std::ptrdiff_t>(a.offsets[i]),
                 q.begin() + static_cast<std::ptrdiff_t>(a.offsets[i] + n));
          Vec prod = ring.mul(pi, qi);
          std::copy(prod.begin(), prod.end(), r.begin() + static_cast<std::ptrdiff_t>(a.offsets[i]));
        }
        return r;
      };
      const std::size_t n = e.cols();
      std::vector<std::string> names;
      for (std::size_t i = 0; i < n; ++i) names.push_back("s" + std::to_string(i));
      std::vector<std::vector<Vec>> mult(n, std::vector<Vec>(n));
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
          mult[i][j] = solve_or_throw(e, mul_families(e.column(i), e.column(j)), "product leaves the sections");
      Vec ones = zeros(k, a.total);
      for (std::size_t i = 0; i < a.points.size(); ++i) {
        const Vec& one = f.ring(x.minimal_open(a.points[i])).unit();
        std::copy(one.begin(), one.end(), ones.begin() + static_cast<std::ptrdiff_t>(a.offsets[i]));
      }
      Vec unit = solve_or_throw(e, ones, "unit is not a compatible family");
      CommAlgebra ring(k, names, mult, unit);
      ring.validate();
      g.set_ring(u, std::move(ring));
    }
  }

  if (f.has_action()) {
    for (int d = f.degree_lo(); d <= f.degree_hi(); ++d)
      for (auto u : x.opens()) {
        const Matrix& e = out.embedding.at({u, d});
        const Matrix& ea = acting->embedding.at({u, 0});
        Ambient a = ambient(u, d);
        std::vector<std::size_t> ring_off;
        std::size_t rt = 0;
        for (auto p : a.points) {
          ring_off.push_back(rt);
          rt += f.action(x.minimal_open(p), d).size();
        }
        if (rt != ea.rows()) throw Error(ErrorKind::Schema, "action does not match the acting ring");
        std::vector<Matrix> acts;
        for (std::size_t r = 0; r < ea.cols(); ++r) {
          Vec af = ea.column(r);
          Matrix m(k, e.cols(), e.cols());
          for (std::size_t c = 0; c < e.cols(); ++c) {
            Vec sf = e.column(c);
            Vec res = zeros(k, a.total);
            for (std::size_t i = 0; i < a.points.size(); ++i) {
                const auto& mats = f.action(x.minimal_open(a.points[i]), d);
                const std::size_t n = f.dim(x.minimal_open(a.points[i]), d);
                Vec si(sf.begin() + static_cast<std::ptrdiff_t>(a.offsets[i]),
                       sf.begin() + static_cast<std::ptrdiff_t>(a.offsets[i] + n));
                for (std::size_t t = 0; t < mats.size(); ++t) {
                  const Scalar& coef = af[ring_off[i] + t];
                  if (coef.is_zero()) continue;
                  Vec part = mats[t] * si;
                  for (std::size_t q = 0; q < n; ++q) res[a.offsets[i] + q] += coef * part[q];
                }
              }
            m.set_column(c, solve_or_throw(e, res, "action leaves the sections"));
          }
          acts.push_back(std::move(m));
        }
        g.set_action(u, d, std::move(acts));
      }
  }

  auto failures = check_descent(g);
  if (!failures.empty()) throw Error(ErrorKind::Arithmetic, "sheafification fails descent: " + failures.front().detail);
  return out;
}

Presheaf constant_presheaf(const FiniteSpace& x, Field field, std::size_t n) {
  Presheaf f(x, field, 0, 0);
  for (auto u : x.opens())
    if (u != 0) f.set_dim(u, 0, n);
  for (auto u : x.opens())
    for (auto v : x.opens())
      if (v != 0 && (v & ~u) == 0) f.set_restriction(u, v, 0, Matrix::identity(field, n));
  return f;
}

Matrix random_invertible(Field field, std::size_t n, std::mt19937_64& rng) {
  for (;;) {
    Matrix m(field, n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) m(i, j) = random_scalar(field, rng);
    if (rank(m) == n) return m;
  }
}

Presheaf random_presheaf(const FiniteSpace& x, Field field, std::mt19937_64& rng, int degree_lo, int degree_hi) {
  Presheaf f(x, field, degree_lo, degree_hi);
  const auto& opens = x.opens();
  std::uniform_int_distribution<int> pick_dim(0, 2);
  std::uniform_int_distribution<int> pick_mode(0, 3);
  std::uniform_int_distribution<std::size_t> pick_open(0, opens.size() - 1);

  for (int d = degree_lo; d <= degree_hi; ++d) {
    std::vector<std::size_t> n(x.size());
    for (auto& v : n) v = static_cast<std::size_t>(pick_dim(rng));
    const int mode = pick_mode(rng);
    PointSet seed = opens[pick_open(rng)];
    auto killed = [&](PointSet u) {
      if (mode == 1) return (seed & ~u) == 0 && seed != 0;  // up-set above seed
      if (mode == 2) return (u & ~seed) == 0;               // down-set below seed
      return false;
    };
    const bool constant = mode == 3;
    auto offsets = [&](PointSet u) {
      std::vector<std::size_t> off(x.size(), 0);
      std::size_t t = 0;
      for (auto p : points_of(u)) {
        off[p] = t;
        t += n[p];
      }
      return std::make_pair(off, t);
    };
    std::size_t cdim = n.empty() ? 0 : n[0];
    for (auto u : opens) {
      std::size_t dim = constant ? (u ? cdim : 0) : (killed(u) ? 0 : offsets(u).second);
      f.set_dim(u, d, dim);
    }
    std::vector<Matrix> change;
    for (auto u : opens) change.push_back(random_invertible(field, f.dim(u, d), rng));
    for (auto u : opens)
      for (auto v : opens) {
        if ((v & ~u) != 0) continue;
        Matrix r(field, f.dim(v, d), f.dim(u, d));
        if (r.rows() && r.cols()) {
          if (constant) {
            r = Matrix::identity(field, cdim);
          } else {
            auto [ou, tu] = offsets(u);
            auto [ov, tv] = offsets(v);
            for (auto p : points_of(v))
              for (std::size_t t = 0; t < n[p]; ++t) r(ov[p] + t, ou[p] + t) = field.one();
          }
        }
        Matrix inv = *inverse(change[x.open_index(u)]);
        f.set_restriction(u, v, d, change[x.open_index(v)] * r * inv);
      }
  }
  return f;
}

StructureSheaf structure_sheaf(const QuotientEngine& engine, const Spectrum& spec) {
  const Presentation& p = engine.presentation();
  const FiniteSpace& x = spec.space;
  StructureSheaf out;
  out.presheaf = Presheaf(x, p.field(), 0, 0);
  std::vector<CommAlgebra> rings;
  for (auto u : x.opens()) {
    OrbitSet cls = intersect_primes(spec.primes, u, p.all_orbits());
    out.classes.push_back(cls);
    auto h = engine.hom(cls, p.unit(), p.unit());
    out.presheaf.set_dim(u, 0, h->dim());
  }
  for (auto u : x.opens()) {
    out.presheaf.set_ring(u, engine.end_unit(out.classes[x.open_index(u)]).degree0);
    for (auto v : x.opens())
      if (v != u && (v & ~u) == 0)
        out.presheaf.set_restriction(
            u, v, 0, engine.unit_restriction(out.classes[x.open_index(u)], out.classes[x.open_index(v)]));
  }
  out.sheaf = sheafify(out.presheaf);
  return out;
}

ClassicalReport check_classical(const QuotientEngine& engine, const Spectrum& spec, int lo, int hi) {
  const Presentation& p = engine.presentation();
  ClassicalReport rep;
  for (auto u : spec.space.opens()) {
    OrbitSet cls = intersect_primes(spec.primes, u, p.all_orbits());
    for (int d = lo; d <= hi; ++d) {
      if (d == 0) continue;
      std::size_t n = engine.hom(cls, p.unit(), p.unit().shifted(d))->dim();
      if (n != 0) {
        rep.ok = false;
        rep.violations.push_back({u, d, n});
      }
    }
  }
  return rep;
}

nlohmann::json matrix_json(const Matrix& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(m(i, j).to_string());
    rows.push_back(std::move(row));
  }
  return rows;
}

nlohmann::json sheaf_json(const Presheaf& f) {
  const auto& x = f.space();
  nlohmann::json j;
  j["points"] = x.labels();
  nlohmann::json opens = nlohmann::json::array();
  for (auto u : x.opens()) opens.push_back(open_labels(x, u));
  j["opens"] = opens;
  j["degrees"] = {f.degree_lo(), f.degree_hi()};
  nlohmann::json sections = nlohmann::json::array();
  for (auto u : x.opens()) {
    nlohmann::json dims = nlohmann::json::object();
    for (int d = f.degree_lo(); d <= f.degree_hi(); ++d)
      if (f.dim(u, d)) dims[std::to_string(d)] = f.dim(u, d);
    sections.push_back({{"open", open_labels(x, u)}, {"dims", dims}});
  }
  j["sections"] = sections;
  nlohmann::json res = nlohmann::json::array();
  for (int d = f.degree_lo(); d <= f.degree_hi(); ++d)
    for (auto u : x.opens())
      for (auto v : x.opens()) {
        if (v == u || (v & ~u) != 0) continue;
        if (f.dim(u, d) == 0 && f.dim(v, d) == 0) continue;
        res.push_back({{"from", open_labels(x, u)},
                       {"to", open_labels(x, v)},
                       {"degree", d},
                       {"matrix", matrix_json(f.restriction(u, v, d))}});
      }
  j["restrictions"] = res;
  if (f.has_ring()) {
    nlohmann::json rings = nlohmann::json::array();
    for (auto u : x.opens()) {
      const CommAlgebra& a = f.ring(u);
      nlohmann::json prods = nlohmann::json::array();
      for (std::size_t i = 0; i < a.dim(); ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (std::size_t k = 0; k < a.dim(); ++k) {
          nlohmann::json v = nlohmann::json::array();
          for (const auto& s : a.product(i, k)) v.push_back(s.to_string());
          row.push_back(v);
        }
        prods.push_back(row);
      }
      nlohmann::json unit = nlohmann::json::array();
      for (const auto& s : a.unit()) unit.push_back(s.to_string());
      rings.push_back({{"open", open_labels(x, u)}, {"unit", unit}, {"products", prods}});
    }
    j["rings"] = rings;
  }
  return j;
}

}  // namespace ttg
