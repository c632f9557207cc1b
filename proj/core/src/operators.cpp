#include "nlsgs/operators.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <numeric>

#include "nlsgs/banded.hpp"
#include "nlsgs/dst.hpp"
#include "nlsgs/errors.hpp"
#include "nlsgs/krylov.hpp"
#include "nlsgs/quadrature.hpp"

namespace nlsgs {

namespace {

constexpr double kPi = std::numbers::pi;

int intervals_for(double length, double h, const char* key) {
  if (!(h > 0.0)) throw ConfigError(std::string(key) + ": h must be > 0");
  const double n = length / h;
  const double r = std::round(n);
  if (std::abs(n - r) > 1e-9 * std::max(1.0, n))
    throw ConfigError(std::string(key) + ": h must divide the domain length");
  return static_cast<int>(r);
}

// ---------------------------------------------------------------------------------------
// Sine-basis backend: SP in 1D/2D and the 5-point FD stencil in 2D.

class SpectralOperators final : public DiscreteOperators {
 public:
  SpectralOperators(GridPtr grid, Method method, double h, std::vector<double> vnodal)
      : DiscreteOperators(grid, method, 0, false, h, true),
        dst_([&] {
          std::vector<std::size_t> shape;
          for (std::size_t k = 0; k < grid->axes().size(); ++k) shape.push_back(grid->count(k));
          return shape;
        }()),
        v_(std::move(vnodal)) {
    const auto& g = this->grid();
    w_ = 1.0;
    for (const auto& ax : g.axes()) w_ *= ax.h();
    weights_.assign(size(), w_);
    std::vector<std::vector<double>> sym, jac;
    for (std::size_t k = 0; k < g.axes().size(); ++k) {
      const auto& ax = g.axes()[k];
      const std::size_t n = g.count(k);
      const double len = ax.b - ax.a;
      const double hk = ax.h();
      std::vector<double> s(n), d(n, 0.0);
      for (std::size_t m = 0; m < n; ++m) {
        const double kk = static_cast<double>(m + 1);
        if (method == Method::SP) {
          s[m] = (kk * kPi / len) * (kk * kPi / len);
        } else {
          const double t = std::sin(kk * kPi / (2.0 * ax.intervals));
          s[m] = 4.0 / (hk * hk) * t * t;
        }
      }
      if (method == Method::SP) {
        const double N = static_cast<double>(n + 1);
        for (std::size_t j = 0; j < n; ++j) {
          double acc = 0.0;
          for (std::size_t m = 0; m < n; ++m) {
            const double sn = std::sin(static_cast<double>((m + 1) * (j + 1)) * kPi / N);
            acc += s[m] * sn * sn;
          }
          d[j] = 2.0 / N * acc;
        }
      } else {
        std::fill(d.begin(), d.end(), 2.0 / (hk * hk));
      }
      sym.push_back(std::move(s));
      jac.push_back(std::move(d));
    }
    symbol_.resize(size());
    lap_diag_.resize(size());
    if (sym.size() == 1) {
      symbol_ = sym[0];
      lap_diag_ = jac[0];
    } else {
      const std::size_t ny = g.count(1);
      for (std::size_t i = 0; i < g.count(0); ++i)
        for (std::size_t j = 0; j < ny; ++j) {
          symbol_[i * ny + j] = sym[0][i] + sym[1][j];
          lap_diag_[i * ny + j] = jac[0][i] + jac[1][j];
        }
    }
    vmin_ = v_.empty() ? 0.0 : *std::min_element(v_.begin(), v_.end());
  }

  void apply_mass(std::span<const double> u, std::span<double> out) const override {
    for (std::size_t i = 0; i < u.size(); ++i) out[i] = w_ * u[i];
  }
  void solve_mass(std::span<const double> b, std::span<double> out) const override {
    for (std::size_t i = 0; i < b.size(); ++i) out[i] = b[i] / w_;
  }
  std::vector<double> mass_diagonal() const override { return weights_; }
  double dot_mass(std::span<const double> u, std::span<const double> v) const override {
    return w_ * std::inner_product(u.begin(), u.end(), v.begin(), 0.0);
  }

  void apply_stiffness(std::span<const double> u, std::span<double> out) const override {
    apply_multiplier([&](std::size_t k) { return symbol_[k]; }, u, out);
    for (double& x : out) x *= w_;
  }
  std::vector<double> stiffness_diagonal() const override {
    std::vector<double> d(lap_diag_);
    for (double& x : d) x *= w_;
    return d;
  }

  void apply_potential(std::span<const double> u, std::span<double> out) const override {
    for (std::size_t i = 0; i < u.size(); ++i) out[i] = w_ * v_[i] * u[i];
  }
  double potential_energy(std::span<const double> u) const override {
    double s = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) s += v_[i] * u[i] * u[i];
    return w_ * s;
  }
  std::vector<double> potential_diagonal() const override {
    std::vector<double> d(v_);
    for (double& x : d) x *= w_;
    return d;
  }

  std::size_t quadrature_size() const override { return size(); }
  void sample(std::span<const double> u, std::span<double> uq) const override {
    std::copy(u.begin(), u.end(), uq.begin());
  }
  std::span<const double> quadrature_weights() const override { return weights_; }
  void apply_sampled(std::span<const double> gq, std::span<const double> u,
                     std::span<double> out) const override {
    for (std::size_t i = 0; i < u.size(); ++i) out[i] = w_ * gq[i] * u[i];
  }
  std::vector<double> sampled_diagonal(std::span<const double> gq) const override {
    std::vector<double> d(gq.begin(), gq.end());
    for (double& x : d) x *= w_;
    return d;
  }

  std::unique_ptr<LinearSolver> factor_shifted(double c) const override {
    if (!(c > 0.0)) throw ContractViolation("factor_shifted: shift must be positive");
    return std::make_unique<Shifted>(*this, c);
  }

  std::unique_ptr<LinearSolver> factor_hamiltonian(double s) const override {
    return std::make_unique<Hamiltonian>(*this, s);
  }

  std::optional<double> spectrum_lower_bound() const override { return vmin_; }

  bool supports_heat() const override { return method() == Method::SP; }
  void apply_heat(double t, std::span<const double> u, std::span<double> out) const override {
    if (!supports_heat()) DiscreteOperators::apply_heat(t, u, out);
    apply_multiplier([&](std::size_t k) { return std::exp(-t * symbol_[k]); }, u, out);
  }

  const std::vector<double>& nodal_potential() const { return v_; }

 private:
  template <class F>
  void apply_multiplier(F&& f, std::span<const double> u, std::span<double> out) const {
    std::vector<double> t(u.size());
    dst_.apply(u, t);
    const double sc = dst_.inverse_scale();
    for (std::size_t k = 0; k < t.size(); ++k) t[k] *= f(k) * sc;
    dst_.apply(t, out);
  }

  // (cW + K) x = b  <=>  (c - Δ_h) x = b / W
  class Shifted final : public LinearSolver {
   public:
    Shifted(const SpectralOperators& ops, double c) : ops_(ops), c_(c) {}
    void solve(std::span<const double> b, std::span<double> x) const override {
      std::vector<double> t(b.size());
      for (std::size_t i = 0; i < b.size(); ++i) t[i] = b[i] / ops_.w_;
      ops_.apply_multiplier([&](std::size_t k) { return 1.0 / (c_ + ops_.symbol_[k]); }, t, x);
    }

   private:
    const SpectralOperators& ops_;
    double c_;
  };

  // (K + Vm - sW) x = b by PCG, preconditioned with (c - Δ_h)^{-1}.
  class Hamiltonian final : public LinearSolver {
   public:
    Hamiltonian(const SpectralOperators& ops, double s)
        : ops_(ops), s_(s), c_(std::max(-s, 0.0) + 1e-2) {}
    void solve(std::span<const double> b, std::span<double> x) const override {
      const std::size_t n = b.size();
      std::vector<double> bw(n);
      for (std::size_t i = 0; i < n; ++i) bw[i] = b[i] / ops_.w_;
      auto apply = [&](std::span<const double> u, std::span<double> out) {
        ops_.apply_multiplier([&](std::size_t k) { return ops_.symbol_[k]; }, u, out);
        for (std::size_t i = 0; i < n; ++i) out[i] += (ops_.v_[i] - s_) * u[i];
      };
      auto precond = [&](std::span<const double> r, std::span<double> z) {
        ops_.apply_multiplier([&](std::size_t k) { return 1.0 / (c_ + ops_.symbol_[k]); }, r,
                              z);
      };
      std::fill(x.begin(), x.end(), 0.0);
      pcg(apply, precond, bw, x, 1e-12, 20 * n + 100);
    }

   private:
    const SpectralOperators& ops_;
    double s_;
    double c_;
  };

  SineTransform dst_;
  std::vector<double> v_;
  double w_ = 1.0;
  std::vector<double> weights_;
  std::vector<double> symbol_;
  std::vector<double> lap_diag_;
  double vmin_ = 0.0;
};

// ---------------------------------------------------------------------------------------
// Banded backend: FD in 1D and Lagrange FE (order 1 or 2) on full or radial 1D grids.

class BandLdltSolver final : public LinearSolver {
 public:
  explicit BandLdltSolver(const SymmetricBand& a) : f_(a) {}
  void solve(std::span<const double> b, std::span<double> x) const override { f_.solve(b, x); }
  std::optional<std::size_t> negative_count() const override { return f_.negative_pivots(); }

 private:
  BandLDLT f_;
};

double shape(int p, int l, double xi) {
  if (p == 1) return l == 0 ? 1.0 - xi : xi;
  switch (l) {
    case 0: return (1.0 - xi) * (1.0 - 2.0 * xi);
    case 1: return 4.0 * xi * (1.0 - xi);
    default: return xi * (2.0 * xi - 1.0);
  }
}

double shape_d(int p, int l, double xi) {
  if (p == 1) return l == 0 ? -1.0 : 1.0;
  switch (l) {
    case 0: return 4.0 * xi - 3.0;
    case 1: return 4.0 - 8.0 * xi;
    default: return 4.0 * xi - 1.0;
  }
}

class BandedOperators final : public DiscreteOperators {
 public:
  BandedOperators(GridPtr grid, Method method, int order, bool lumped, double h,
                  const ProblemSpec& spec)
      : DiscreteOperators(grid, method, order, lumped, h,
                          !std::holds_alternative<DeltaSum>(spec.potential) &&
                              !std::holds_alternative<InversePower>(spec.potential)),
        radial_(spec.geometry == Geometry::Radial),
        sphere_(radial_ ? unit_sphere_area(spec.dim) : 1.0),
        rdim_(spec.dim),
        a_(this->grid().axes()[0].a),
        elements_(this->grid().axes()[0].intervals) {
    if (method == Method::FD2) {
      p_ = 1;
      assemble_fd(spec);
    } else {
      p_ = order;
      assemble_fe(spec);
    }
    if (diag_mass_.empty()) {
      mass_factor_ = std::make_unique<BandLDLT>(m_);
    } else {
      lumped_band_ = SymmetricBand(size(), k_.bandwidth());
      for (std::size_t i = 0; i < size(); ++i) lumped_band_.at(i, i) = diag_mass_[i];
    }
  }

  void apply_mass(std::span<const double> u, std::span<double> out) const override {
    if (!diag_mass_.empty()) {
      for (std::size_t i = 0; i < u.size(); ++i) out[i] = diag_mass_[i] * u[i];
    } else {
      m_.multiply(u, out);
    }
  }
  void solve_mass(std::span<const double> b, std::span<double> out) const override {
    if (!diag_mass_.empty()) {
      for (std::size_t i = 0; i < b.size(); ++i) out[i] = b[i] / diag_mass_[i];
    } else {
      mass_factor_->solve(b, out);
    }
  }
  std::vector<double> mass_diagonal() const override {
    return diag_mass_.empty() ? m_.diagonal() : diag_mass_;
  }

  void apply_stiffness(std::span<const double> u, std::span<double> out) const override {
    k_.multiply(u, out);
  }
  std::vector<double> stiffness_diagonal() const override { return k_.diagonal(); }

  void apply_potential(std::span<const double> u, std::span<double> out) const override {
    v_.multiply(u, out);
  }
  double potential_energy(std::span<const double> u) const override {
    std::vector<double> t(u.size());
    v_.multiply(u, t);
    return std::inner_product(u.begin(), u.end(), t.begin(), 0.0);
  }
  std::vector<double> potential_diagonal() const override { return v_.diagonal(); }

  std::size_t quadrature_size() const override { return qw_.size(); }
  std::span<const double> quadrature_weights() const override { return qw_; }

  void sample(std::span<const double> u, std::span<double> uq) const override {
    if (method() == Method::FD2) {
      std::copy(u.begin(), u.end(), uq.begin());
      return;
    }
    const std::size_t nq = qxi_.size();
    for (int e = 0; e < elements_; ++e) {
      double loc[3];
      gather(e, u, loc);
      for (std::size_t g = 0; g < nq; ++g) {
        double s = 0.0;
        for (int l = 0; l <= p_; ++l) s += qn_[g][l] * loc[l];
        uq[e * nq + g] = s;
      }
    }
  }

  void apply_sampled(std::span<const double> gq, std::span<const double> u,
                     std::span<double> out) const override {
    if (method() == Method::FD2) {
      for (std::size_t i = 0; i < u.size(); ++i) out[i] = qw_[i] * gq[i] * u[i];
      return;
    }
    std::fill(out.begin(), out.end(), 0.0);
    const std::size_t nq = qxi_.size();
    for (int e = 0; e < elements_; ++e) {
      double loc[3];
      gather(e, u, loc);
      double res[3] = {0.0, 0.0, 0.0};
      for (std::size_t g = 0; g < nq; ++g) {
        double s = 0.0;
        for (int l = 0; l <= p_; ++l) s += qn_[g][l] * loc[l];
        const double c = qw_[e * nq + g] * gq[e * nq + g] * s;
        for (int l = 0; l <= p_; ++l) res[l] += c * qn_[g][l];
      }
      scatter(e, res, out);
    }
  }

  std::vector<double> sampled_diagonal(std::span<const double> gq) const override {
    std::vector<double> d(size(), 0.0);
    if (method() == Method::FD2) {
      for (std::size_t i = 0; i < d.size(); ++i) d[i] = qw_[i] * gq[i];
      return d;
    }
    const std::size_t nq = qxi_.size();
    for (int e = 0; e < elements_; ++e) {
      double res[3] = {0.0, 0.0, 0.0};
      for (std::size_t g = 0; g < nq; ++g) {
        const double c = qw_[e * nq + g] * gq[e * nq + g];
        for (int l = 0; l <= p_; ++l) res[l] += c * qn_[g][l] * qn_[g][l];
      }
      scatter(e, res, d);
    }
    return d;
  }

  std::unique_ptr<LinearSolver> factor_shifted(double c) const override {
    if (!(c > 0.0)) throw ContractViolation("factor_shifted: shift must be positive");
    return std::make_unique<BandLdltSolver>(k_.combine(1.0, mass_band(), c));
  }

  std::unique_ptr<LinearSolver> factor_hamiltonian(double s) const override {
    SymmetricBand a = k_.combine(1.0, v_, 1.0).combine(1.0, mass_band(), -s);
    return std::make_unique<BandLdltSolver>(a);
  }
  bool reveals_inertia() const override { return true; }

  std::optional<double> spectrum_lower_bound() const override {
    if (!diag_mass_.empty() && method() == Method::FD2) {
      // K is positive semidefinite and Vm, M are diagonal.
      const auto vd = v_.diagonal();
      double lb = 0.0;
      for (std::size_t i = 0; i < vd.size(); ++i) lb = std::min(lb, vd[i] / diag_mass_[i]);
      return lb;
    }
    return std::nullopt;
  }

  double value_at(std::span<const double> u, double x) const override {
    if (method() == Method::FD2) return DiscreteOperators::value_at(u, x);
    int e;
    double xi;
    locate(x, e, xi);
    if (e < 0) return 0.0;
    double loc[3];
    gather(e, u, loc);
    double s = 0.0;
    for (int l = 0; l <= p_; ++l) s += shape(p_, l, xi) * loc[l];
    return s;
  }

  double derivative_at(std::span<const double> u, double x) const override {
    if (method() == Method::FD2) return DiscreteOperators::derivative_at(u, x);
    int e;
    double xi;
    locate(x, e, xi);
    if (e < 0) return 0.0;
    double loc[3];
    gather(e, u, loc);
    double s = 0.0;
    for (int l = 0; l <= p_; ++l) s += shape_d(p_, l, xi) * loc[l];
    return s / h();
  }

 private:
  long dof(int e, int l) const {
    const long g = static_cast<long>(e) * p_ + l;
    const long last = static_cast<long>(elements_) * p_;
    if (g == last) return -1;
    if (radial_) return g;
    return g == 0 ? -1 : g - 1;
  }

  void gather(int e, std::span<const double> u, double* loc) const {
    for (int l = 0; l <= p_; ++l) {
      const long d = dof(e, l);
      loc[l] = d < 0 ? 0.0 : u[d];
    }
  }

  void scatter(int e, const double* res, std::span<double> out) const {
    for (int l = 0; l <= p_; ++l) {
      const long d = dof(e, l);
      if (d >= 0) out[d] += res[l];
    }
  }

  void locate(double x, int& e, double& xi) const {
    const double t = (x - a_) / h();
    if (t < 0.0 || t > elements_) {
      e = -1;
      return;
    }
    e = std::min(static_cast<int>(std::floor(t)), elements_ - 1);
    xi = t - e;
  }

  double measure_at(double x) const {
    if (!radial_) return 1.0;
    return sphere_ * std::pow(std::abs(x), rdim_ - 1);
  }

  const SymmetricBand& mass_band() const {
    return diag_mass_.empty() ? m_ : lumped_band_;
  }

  void assemble_fd(const ProblemSpec& spec) {
    const std::size_t n = size();
    const double hh = h();
    k_ = SymmetricBand(n, 1);
    v_ = SymmetricBand(n, 1);
    for (std::size_t i = 0; i < n; ++i) {
      k_.at(i, i) = 2.0 / hh;
      if (i > 0) k_.at(i, i - 1) = -1.0 / hh;
    }
    diag_mass_.assign(n, hh);
    qw_.assign(n, hh);
    if (const auto* tab = std::get_if<Tabulated>(&spec.potential)) {
      if (tab->values.size() != n)
        throw ConfigError("potential.values: sample count does not match the grid");
      for (std::size_t i = 0; i < n; ++i) v_.at(i, i) = hh * tab->values[i];
    } else {
      for (std::size_t i = 0; i < n; ++i) {
        const double x = grid().coordinate(0, i);
        v_.at(i, i) = hh * evaluate(spec.potential, std::span<const double>(&x, 1));
      }
    }
    add_delta_sites(spec);
  }

  void add_delta_sites(const ProblemSpec& spec) {
    const auto* ds = std::get_if<DeltaSum>(&spec.potential);
    if (!ds) return;
    for (const auto& s : ds->sites) {
      const long node = grid().node_at(s.center, 1e-9 * h());
      if (node < 0)
        throw ConfigError("potential.sites: delta center " + std::to_string(s.center) +
                          " is not an interior grid node");
      v_.at(node, node) -= s.strength;
    }
  }

  void add_local(SymmetricBand& a, int e, const double loc[3][3]) const {
    for (int l = 0; l <= p_; ++l) {
      const long dl = dof(e, l);
      if (dl < 0) continue;
      for (int m = 0; m <= l; ++m) {
        const long dm = dof(e, m);
        if (dm < 0) continue;
        a.add(dl, dm, loc[l][m]);
      }
    }
  }

  void assemble_fe(const ProblemSpec& spec) {
    if (std::holds_alternative<Tabulated>(spec.potential))
      throw ConfigError("potential.kind=tabulated is not supported with discretization.kind=fe");
    if (lumped() && p_ != 1) throw ConfigError("discretization.lumped requires fe_order = 1");
    const std::size_t n = size();
    const double hh = h();
    k_ = SymmetricBand(n, p_);
    m_ = SymmetricBand(n, p_);
    v_ = SymmetricBand(n, p_);

    const auto g4 = gauss_legendre01(4);
    for (int e = 0; e < elements_; ++e) {
      double kl[3][3] = {}, ml[3][3] = {};
      for (std::size_t q = 0; q < g4.nodes.size(); ++q) {
        const double xi = g4.nodes[q];
        const double x = a_ + (e + xi) * hh;
        const double wq = g4.weights[q] * hh * measure_at(x);
        for (int l = 0; l <= p_; ++l)
          for (int m = 0; m <= l; ++m) {
            kl[l][m] += wq * shape_d(p_, l, xi) * shape_d(p_, m, xi) / (hh * hh);
            ml[l][m] += wq * shape(p_, l, xi) * shape(p_, m, xi);
          }
      }
      add_local(k_, e, kl);
      add_local(m_, e, ml);
    }
    if (lumped()) {
      diag_mass_.assign(n, 0.0);
      std::vector<double> ones(n, 1.0);
      m_.multiply(ones, diag_mass_);
      // Boundary-adjacent rows lose the coupling to the eliminated node; lumping uses the
      // full element row sum so the quadrature stays exact for constants.
      for (int e = 0; e < elements_; ++e) {
        for (int l = 0; l <= 1; ++l) {
          const long d = dof(e, l);
          if (d < 0) continue;
          if (dof(e, 1 - l) < 0) diag_mass_[d] += element_mass_offdiag(e);
        }
      }
    }

    // nonlinear quadrature: 3-point Gauss per element
    const auto g3 = gauss_legendre01(3);
    qxi_ = g3.nodes;
    qn_.assign(qxi_.size(), {0.0, 0.0, 0.0});
    for (std::size_t g = 0; g < qxi_.size(); ++g)
      for (int l = 0; l <= p_; ++l) qn_[g][l] = shape(p_, l, qxi_[g]);
    qw_.resize(static_cast<std::size_t>(elements_) * qxi_.size());
    for (int e = 0; e < elements_; ++e)
      for (std::size_t g = 0; g < qxi_.size(); ++g) {
        const double x = a_ + (e + qxi_[g]) * hh;
        qw_[e * qxi_.size() + g] = g3.weights[g] * hh * measure_at(x);
      }

    assemble_fe_potential(spec);
    add_delta_sites(spec);
  }

  double element_mass_offdiag(int e) const {
    const auto g4 = gauss_legendre01(4);
    double s = 0.0;
    for (std::size_t q = 0; q < g4.nodes.size(); ++q) {
      const double xi = g4.nodes[q];
      const double x = a_ + (e + xi) * h();
      s += g4.weights[q] * h() * measure_at(x) * xi * (1.0 - xi);
    }
    return s;
  }

  // Element integrals of V u v. Elements are split at the discontinuities of V; pieces that
  // end at the singular point of an inverse-power potential use Gauss-Jacobi rules carrying
  // the singular factor of V times the radial measure, so no quadrature point sits at 0.
  void assemble_fe_potential(const ProblemSpec& spec) {
    if (std::holds_alternative<ZeroPotential>(spec.potential) ||
        std::holds_alternative<DeltaSum>(spec.potential))
      return;
    const double hh = h();
    const auto g6 = gauss_legendre01(6);
    const auto* ip = std::get_if<InversePower>(&spec.potential);
    QuadratureRule gj;
    double beta = 0.0;
    if (ip) {
      beta = (radial_ ? rdim_ - 1.0 : 0.0) - ip->sigma;
      gj = gauss_jacobi01(6, beta);
    }
    std::vector<double> breaks;
    for (double s : singular_points_1d(spec.potential)) breaks.push_back(radial_ ? std::abs(s) : s);
    std::sort(breaks.begin(), breaks.end());

    for (int e = 0; e < elements_; ++e) {
      const double x0 = a_ + e * hh;
      const double x1 = x0 + hh;
      std::vector<double> pts{x0};
      for (double b : breaks)
        if (b > x0 + 1e-12 * hh && b < x1 - 1e-12 * hh) pts.push_back(b);
      pts.push_back(x1);
      double loc[3][3] = {};
      for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
        const double s0 = pts[k];
        const double s1 = pts[k + 1];
        const double len = s1 - s0;
        auto add = [&](double x, double nu) {
          const double xi = (x - x0) / hh;
          for (int l = 0; l <= p_; ++l)
            for (int m = 0; m <= l; ++m) loc[l][m] += nu * shape(p_, l, xi) * shape(p_, m, xi);
        };
        const bool at0 = ip && std::abs(s0) <= 1e-12 * hh;
        const bool at1 = ip && std::abs(s1) <= 1e-12 * hh;
        if (at0 || at1) {
          const double c = -ip->gamma * (radial_ ? sphere_ : 1.0) * std::pow(len, beta + 1.0);
          for (std::size_t q = 0; q < gj.nodes.size(); ++q) {
            const double t = gj.nodes[q];
            const double x = at0 ? s0 + t * len : s1 - t * len;
            add(x, c * gj.weights[q]);
          }
        } else {
          for (std::size_t q = 0; q < g6.nodes.size(); ++q) {
            const double x = s0 + g6.nodes[q] * len;
            const double v = evaluate(spec.potential, std::span<const double>(&x, 1));
            add(x, g6.weights[q] * len * measure_at(x) * v);
          }
        }
      }
      add_local(v_, e, loc);
    }
  }

  bool radial_;
  double sphere_;
  int rdim_;
  double a_;
  int elements_;
  int p_ = 1;
  SymmetricBand k_, m_, v_;
  std::vector<double> diag_mass_;
  std::unique_ptr<BandLDLT> mass_factor_;
  SymmetricBand lumped_band_;
  std::vector<double> qxi_;
  std::vector<std::array<double, 3>> qn_;
  std::vector<double> qw_;
};

void check_compatibility(const ProblemSpec& spec, const DiscretizationSpec& disc) {
  const auto& v = spec.potential;
  const bool delta = std::holds_alternative<DeltaSum>(v);
  const bool inv = std::holds_alternative<InversePower>(v);
  if (disc.method == Method::FE) {
    if (spec.geometry == Geometry::Tensor2D)
      throw ConfigError("discretization.kind=fe is available for 1D and radial geometries only");
    if (disc.fe_order != 1 && disc.fe_order != 2)
      throw ConfigError("discretization.fe_order must be 1 or 2");
    return;
  }
  if (spec.geometry == Geometry::Radial)
    throw ConfigError("problem.geometry=radial requires discretization.kind=fe");
  if (inv)
    throw ConfigError("potential.kind=inverse_power requires discretization.kind=fe (got " +
                      to_string(disc.method) + ")");
  if (delta && disc.method == Method::SP)
    throw ConfigError("potential.kind=delta is incompatible with discretization.kind=sp");
  if (disc.lumped) throw ConfigError("discretization.lumped applies to fe only");
}

}  // namespace

// ---------------------------------------------------------------------------------------

double DiscreteOperators::dot_mass(std::span<const double> u, std::span<const double> v) const {
  std::vector<double> t(u.size());
  apply_mass(u, t);
  return std::inner_product(t.begin(), t.end(), v.begin(), 0.0);
}

double DiscreteOperators::power_integral(std::span<const double> u, double p) const {
  std::vector<double> uq(quadrature_size());
  sample(u, uq);
  const auto w = quadrature_weights();
  double s = 0.0;
  for (std::size_t q = 0; q < uq.size(); ++q) s += w[q] * std::pow(std::abs(uq[q]), p);
  return s;
}

void DiscreteOperators::apply_power(std::span<const double> u, double alpha,
                                    std::span<double> out) const {
  std::vector<double> g(quadrature_size());
  sample(u, g);
  for (double& x : g) x = std::pow(std::abs(x), 2.0 * alpha);
  apply_sampled(g, u, out);
}

void DiscreteOperators::apply_heat(double, std::span<const double>, std::span<double>) const {
  throw ConfigError("flow.scheme=ts requires discretization.kind=sp");
}

void DiscreteOperators::apply_hamiltonian_strong(std::span<const double> u, double omega,
                                                 std::span<double> out) const {
  const std::size_t n = u.size();
  std::vector<double> a(n), b(n);
  apply_stiffness(u, a);
  apply_potential(u, b);
  for (std::size_t i = 0; i < n; ++i) a[i] += b[i];
  solve_mass(a, out);
  for (std::size_t i = 0; i < n; ++i) out[i] += omega * u[i];
}

double DiscreteOperators::value_at(std::span<const double> u, double x) const {
  const auto& g = grid();
  if (g.axes().size() != 1) throw ContractViolation("value_at: 1D grids only");
  const double dx = g.node_spacing(0);
  const double a = g.axes()[0].a;
  const std::size_t offset = g.geometry() == Geometry::Radial ? 0 : 1;
  const double t = (x - a) / dx;
  const long total = static_cast<long>(g.count(0) + offset + 1);
  if (t < 0.0 || t > static_cast<double>(total - 1)) return 0.0;
  const long k = std::min(static_cast<long>(std::floor(t)), total - 2);
  const double s = t - k;
  auto node = [&](long m) {
    const long d = m - static_cast<long>(offset);
    return (d < 0 || d >= static_cast<long>(g.count(0))) ? 0.0 : u[d];
  };
  return (1.0 - s) * node(k) + s * node(k + 1);
}

double DiscreteOperators::derivative_at(std::span<const double> u, double x) const {
  const auto& g = grid();
  if (g.axes().size() != 1) throw ContractViolation("derivative_at: 1D grids only");
  const double dx = g.node_spacing(0);
  const double a = g.axes()[0].a;
  const std::size_t offset = g.geometry() == Geometry::Radial ? 0 : 1;
  const double t = (x - a) / dx;
  const long total = static_cast<long>(g.count(0) + offset + 1);
  if (t < 0.0 || t > static_cast<double>(total - 1)) return 0.0;
  const long k = std::min(static_cast<long>(std::floor(t)), total - 2);
  auto node = [&](long m) {
    const long d = m - static_cast<long>(offset);
    return (d < 0 || d >= static_cast<long>(g.count(0))) ? 0.0 : u[d];
  };
  return (node(k + 1) - node(k)) / dx;
}

double DiscreteOperators::measure(double x) const {
  if (grid().geometry() != Geometry::Radial) return 1.0;
  return unit_sphere_area(grid().dim()) * std::pow(std::abs(x), grid().dim() - 1);
}

double unit_sphere_area(int d) {
  switch (d) {
    case 1: return 2.0;
    case 2: return 2.0 * kPi;
    case 3: return 4.0 * kPi;
    default: throw ContractViolation("unit_sphere_area: d must be 1, 2 or 3");
  }
}

OperatorsPtr assemble(const ProblemSpec& spec, const DiscretizationSpec& disc) {
  validate(spec);
  if (spec.geometry == Geometry::Radial) return radial_reduce(spec, disc);
  check_compatibility(spec, disc);
  const int npc = disc.method == Method::FE ? disc.fe_order : 1;
  std::vector<Axis> axes;
  for (std::size_t k = 0; k < spec.box.size(); ++k) {
    const auto& iv = spec.box[k];
    axes.push_back(Axis{iv.a, iv.b, intervals_for(iv.length(), disc.h, "discretization.h")});
  }
  auto grid = std::make_shared<const Grid>(spec.geometry, spec.dim, std::move(axes), npc);

  const bool spectral = disc.method == Method::SP || spec.geometry == Geometry::Tensor2D;
  if (spectral) {
    std::vector<double> vn(grid->size());
    if (const auto* tab = std::get_if<Tabulated>(&spec.potential)) {
      if (tab->values.size() != vn.size())
        throw ConfigError("potential.values: sample count does not match the grid");
      vn = tab->values;
    } else {
      for (std::size_t i = 0; i < vn.size(); ++i) {
        const auto x = grid->point(i);
        vn[i] = evaluate(spec.potential, x);
      }
    }
    return std::make_shared<SpectralOperators>(grid, disc.method, disc.h, std::move(vn));
  }
  return std::make_shared<BandedOperators>(grid, disc.method, disc.fe_order, disc.lumped, disc.h,
                                           spec);
}

OperatorsPtr radial_reduce(const ProblemSpec& spec, const DiscretizationSpec& disc) {
  validate(spec);
  if (spec.geometry != Geometry::Radial)
    throw ConfigError("problem.geometry: radial_reduce needs geometry=radial");
  if (!radially_symmetric(spec.potential))
    throw ConfigError("problem.potential: radial geometry needs a radially symmetric potential");
  if (std::holds_alternative<DeltaSum>(spec.potential))
    throw ConfigError("potential.kind=delta is not available in radial geometry");
  check_compatibility(spec, disc);
  std::vector<Axis> axes{
      Axis{0.0, spec.radius, intervals_for(spec.radius, disc.h, "discretization.h")}};
  auto grid = std::make_shared<const Grid>(Geometry::Radial, spec.dim, std::move(axes),
                                           disc.fe_order);
  return std::make_shared<BandedOperators>(grid, Method::FE, disc.fe_order, disc.lumped, disc.h,
                                           spec);
}

std::vector<double> implicit_solve(const DiscreteOperators& ops, std::span<const double> rhs,
                                   double tau, const ProblemSpec& spec) {
  if (!(tau > 0.0)) throw ContractViolation("implicit_solve: tau must be > 0");
  const double c = 1.0 / tau + spec.omega + spec.theta;
  if (!(c > 0.0)) throw ContractViolation("implicit_solve: 1/tau + omega + theta must be > 0");
  std::vector<double> b(rhs.size()), x(rhs.size());
  ops.apply_mass(rhs, b);
  ops.factor_shifted(c)->solve(b, x);
  return x;
}

}  // namespace nlsgs
