#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <numbers>
#include <string>
#include <vector>

#include "nullflow/diffalg.hpp"

namespace nullflow {

enum class Stencil { central4, central6 };

inline int stencil_accuracy(Stencil s) { return s == Stencil::central4 ? 4 : 6; }

/// Numerical values for parameter symbols.
using Bindings = std::map<std::string, double>;

struct SimConfig {
  double a = 1.0;
  int eps1 = 1;
  int eps2 = 1;
  int grid_points = 512;
  double domain_length = 64.0;
  double sigma0 = 0.0;  // left end of the periodic cell
  double dt = 1e-4;
  double t_end = 1.0;
  Stencil stencil = Stencil::central4;
  int output_stride = 1000;
  double stability_constant = 0.1;

  double spacing() const { return domain_length / grid_points; }

  void validate() const {
    if (!(a > 0)) throw std::invalid_argument("a must be positive");
    if ((eps1 != 1 && eps1 != -1) || (eps2 != 1 && eps2 != -1))
      throw std::invalid_argument("eps1 and eps2 must be +1 or -1");
    if (eps1 == -1 && eps2 == -1) throw std::invalid_argument("eps1 = eps2 = -1 gives index 3; only q = 1, 2 are supported");
    if (grid_points < 8) throw std::invalid_argument("grid_points must be at least 8");
    if (!(domain_length > 0) || !(dt > 0) || !(t_end >= 0)) throw std::invalid_argument("lengths and times must be positive");
    if (output_stride < 1) throw std::invalid_argument("output_stride must be positive");
  }

  /// a, eps1, eps2 as bindings for compile_flow.
  Bindings frame_bindings() const { return {{"a", a}, {"eps1", double(eps1)}, {"eps2", double(eps2)}}; }
};

struct CurvatureGrid {
  std::vector<double> sigma;
  std::vector<double> k1;
  std::vector<double> k2;
  double t = 0.0;
};

inline CurvatureGrid make_grid(const SimConfig& cfg, const std::function<double(double)>& k1,
                               const std::function<double(double)>& k2) {
  CurvatureGrid g;
  double h = cfg.spacing();
  for (int j = 0; j < cfg.grid_points; ++j) {
    double s = cfg.sigma0 + j * h;
    g.sigma.push_back(s);
    g.k1.push_back(k1(s));
    g.k2.push_back(k2(s));
  }
  return g;
}

/// Finite-difference weights for the derivatives of order 0..m at z from
/// values at nodes x (Fornberg's recursion). w[k][j] multiplies f(x_j).
inline std::vector<std::vector<double>> fornberg_weights(double z, const std::vector<double>& x, int m) {
  const int n = static_cast<int>(x.size()) - 1;
  std::vector<std::vector<double>> c(m + 1, std::vector<double>(n + 1, 0.0));
  double c1 = 1.0, c4 = x[0] - z;
  c[0][0] = 1.0;
  for (int i = 1; i <= n; ++i) {
    int mn = std::min(i, m);
    double c2 = 1.0, c5 = c4;
    c4 = x[i] - z;
    for (int j = 0; j < i; ++j) {
      double c3 = x[i] - x[j];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k) c[k][i] = c1 * (k * c[k - 1][i - 1] - c5 * c[k][i - 1]) / c2;
        c[0][i] = -c1 * c5 * c[0][i - 1] / c2;
      }
      for (int k = mn; k >= 1; --k) c[k][j] = (c4 * c[k][j] - k * c[k - 1][j]) / c3;
      c[0][j] = c4 * c[0][j] / c3;
    }
    c1 = c2;
  }
  return c;
}

/// Central stencil for the m-th derivative on a unit grid: offsets -r..r.
inline std::vector<double> central_weights(int m, Stencil s) {
  int r = (m + 1) / 2 - 1 + stencil_accuracy(s) / 2;
  std::vector<double> x;
  for (int j = -r; j <= r; ++j) x.push_back(j);
  return fornberg_weights(0.0, x, m)[m];
}

/// Periodic m-th derivative of samples with spacing h.
inline std::vector<double> periodic_derivative(const std::vector<double>& f, int m, double h, Stencil s) {
  if (m == 0) return f;
  std::vector<double> w = central_weights(m, s);
  const int n = static_cast<int>(f.size());
  const int r = static_cast<int>(w.size()) / 2;
  const double scale = 1.0 / std::pow(h, m);
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i) {
    double acc = 0.0;
    for (int j = -r; j <= r; ++j) acc += w[j + r] * f[((i + j) % n + n) % n];
    out[i] = acc * scale;
  }
  return out;
}

/// A flow pair with numeric coefficients, ready for method-of-lines evaluation.
class CompiledFlow {
 public:
  struct Factor {
    int slot;
    int order;
    int exp;
  };
  struct Term {
    double coeff;
    std::vector<Factor> factors;
  };

  CompiledFlow(const FlowPair& fp, const Bindings& params) {
    for (int s = 0; s < 2; ++s) {
      for (const auto& [k, c] : fp[s].terms()) {
        double value = c.get_d();
        for (const auto& [name, e] : k.params.factors()) {
          auto it = params.find(name);
          if (it == params.end()) throw UnboundParameter("parameter '" + name + "' has no numeric value");
          value *= std::pow(it->second, e);
        }
        Term t{value, {}};
        for (const auto& p : k.gens.powers()) {
          if (p.gen.var != Var::k1 && p.gen.var != Var::k2)
            throw std::invalid_argument("only k1, k2 flows can be simulated");
          t.factors.push_back({slot(p.gen.var), p.gen.order, p.exp});
          order_ = std::max(order_, p.gen.order);
        }
        terms_[s].push_back(std::move(t));
      }
    }
  }

  /// Highest derivative order; sets the time-step restriction.
  int order() const { return order_; }

  void operator()(const std::vector<double>& k1, const std::vector<double>& k2, double h, Stencil st,
                  std::vector<double>& d1, std::vector<double>& d2) const {
    const std::size_t n = k1.size();
    std::array<std::map<int, std::vector<double>>, 2> derivs;
    const std::array<const std::vector<double>*, 2> base{&k1, &k2};
    for (int s = 0; s < 2; ++s)
      for (const auto& t : terms_[s])
        for (const auto& f : t.factors)
          if (!derivs[f.slot].count(f.order))
            derivs[f.slot].emplace(f.order, periodic_derivative(*base[f.slot], f.order, h, st));
    std::array<std::vector<double>*, 2> out{&d1, &d2};
    for (int s = 0; s < 2; ++s) {
      out[s]->assign(n, 0.0);
      for (const auto& t : terms_[s]) {
        for (std::size_t i = 0; i < n; ++i) {
          double v = t.coeff;
          for (const auto& f : t.factors) {
            double x = derivs[f.slot].at(f.order)[i];
            for (int e = 0; e < f.exp; ++e) v *= x;
          }
          (*out[s])[i] += v;
        }
      }
    }
  }

 private:
  std::array<std::vector<Term>, 2> terms_;
  int order_ = 0;
};

inline CompiledFlow compile_flow(const FlowPair& fp, const Bindings& params) { return CompiledFlow(fp, params); }

/// Largest admissible time step: C * h^order. Flows without derivatives are
/// pointwise ODEs and get no grid restriction.
inline double stability_bound(const SimConfig& cfg, int flow_order) {
  if (flow_order == 0) return std::numeric_limits<double>::infinity();
  return cfg.stability_constant * std::pow(cfg.spacing(), flow_order);
}

inline double periodic_integral(const std::vector<double>& f, double h) {
  double s = 0.0;
  for (double x : f) s += x;
  return s * h;
}

struct Trajectory {
  std::vector<CurvatureGrid> frames;
  std::vector<double> mass_k1;
  std::vector<double> mass_k2;
  double dt_used = 0.0;
  long steps = 0;
  double stability_bound = 0.0;
  int flow_order = 0;

  /// max |M(t) - M(0)| for the mass of k1 (slot 0) or k2 (slot 1).
  double mass_drift(int s) const {
    const auto& m = s == 0 ? mass_k1 : mass_k2;
    double d = 0.0;
    for (double x : m) d = std::max(d, std::abs(x - m.front()));
    return d;
  }
};

/// Non-finite values appeared; carries the last finite state.
struct SimulationBlowUp : BlowUp {
  SimulationBlowUp(const std::string& what, CurvatureGrid last)
      : BlowUp(what, last.t), last_good(std::move(last)) {}
  CurvatureGrid last_good;
};

/// Fixed-step RK4 method of lines. The step is dt shrunk so that a whole
/// number of steps reaches t_end; frames are kept every output_stride steps
/// and at t_end.
inline Trajectory evolve(const CurvatureGrid& grid0, const CompiledFlow& rhs, const SimConfig& cfg) {
  cfg.validate();
  if (grid0.k1.size() != static_cast<std::size_t>(cfg.grid_points) || grid0.k2.size() != grid0.k1.size())
    throw std::invalid_argument("grid size does not match the configuration");
  Trajectory tr;
  tr.flow_order = rhs.order();
  tr.stability_bound = stability_bound(cfg, rhs.order());
  if (cfg.dt > tr.stability_bound)
    throw std::invalid_argument("dt = " + std::to_string(cfg.dt) + " exceeds the stability bound " +
                                std::to_string(tr.stability_bound));
  const long steps = std::max(1L, static_cast<long>(std::ceil(cfg.t_end / cfg.dt - 1e-9)));
  const double dt = cfg.t_end / steps;
  const double h = cfg.spacing();
  tr.dt_used = dt;
  tr.steps = steps;

  CurvatureGrid cur = grid0;
  auto record = [&](const CurvatureGrid& g) {
    tr.frames.push_back(g);
    tr.mass_k1.push_back(periodic_integral(g.k1, h));
    tr.mass_k2.push_back(periodic_integral(g.k2, h));
  };
  record(cur);

  const std::size_t n = cur.k1.size();
  std::vector<double> a1(n), a2(n), b1(n), b2(n), c1(n), c2(n), d1(n), d2(n), t1(n), t2(n);
  auto axpy = [n](const std::vector<double>& x, double s, const std::vector<double>& y, std::vector<double>& out) {
    for (std::size_t i = 0; i < n; ++i) out[i] = x[i] + s * y[i];
  };
  for (long step = 1; step <= steps; ++step) {
    rhs(cur.k1, cur.k2, h, cfg.stencil, a1, a2);
    axpy(cur.k1, dt / 2, a1, t1);
    axpy(cur.k2, dt / 2, a2, t2);
    rhs(t1, t2, h, cfg.stencil, b1, b2);
    axpy(cur.k1, dt / 2, b1, t1);
    axpy(cur.k2, dt / 2, b2, t2);
    rhs(t1, t2, h, cfg.stencil, c1, c2);
    axpy(cur.k1, dt, c1, t1);
    axpy(cur.k2, dt, c2, t2);
    rhs(t1, t2, h, cfg.stencil, d1, d2);
    CurvatureGrid next = cur;
    bool finite = true;
    for (std::size_t i = 0; i < n; ++i) {
      next.k1[i] += dt / 6 * (a1[i] + 2 * b1[i] + 2 * c1[i] + d1[i]);
      next.k2[i] += dt / 6 * (a2[i] + 2 * b2[i] + 2 * c2[i] + d2[i]);
      finite = finite && std::isfinite(next.k1[i]) && std::isfinite(next.k2[i]);
    }
    next.t = step * dt;
    if (!finite) throw SimulationBlowUp("non-finite curvature at t = " + std::to_string(next.t), cur);
    cur = std::move(next);
    if (step % cfg.output_stride == 0 || step == steps) record(cur);
  }
  return tr;
}

using Vec4 = std::array<double, 4>;

/// Frame (T, W1, N, W2) and position at one node, in coordinates where the
/// metric is diag(-1, 1, eps1, eps2).
struct FrameNode {
  std::array<Vec4, 4> frame;
  Vec4 gamma{};
};

struct FramePath {
  std::vector<double> sigma;
  std::vector<FrameNode> nodes;
  double gram_drift = 0.0;       // max deviation of the frame Gram matrix from the Cartan table
  double null_drift = 0.0;       // max |<gamma', gamma'>|
  double curvature_drift = 0.0;  // max |<gamma'', gamma''> - eps1 a^2|
};

inline double minkowski(const Vec4& x, const Vec4& y, const SimConfig& cfg) {
  return -x[0] * y[0] + x[1] * y[1] + cfg.eps1 * x[2] * y[2] + cfg.eps2 * x[3] * y[3];
}

/// T = (e0 + e1)/sqrt2, N = (e0 - e1)/sqrt2, W1 = e2, W2 = e3, gamma = 0.
inline FrameNode standard_initial_frame() {
  const double r = 1.0 / std::numbers::sqrt2;
  FrameNode n;
  n.frame[0] = {r, r, 0, 0};
  n.frame[1] = {0, 0, 1, 0};
  n.frame[2] = {r, -r, 0, 0};
  n.frame[3] = {0, 0, 0, 1};
  return n;
}

/// Deviation of the frame Gram matrix from <T,N> = -1, <Wi,Wi> = eps_i.
inline double gram_deviation(const FrameNode& node, const SimConfig& cfg) {
  const double table[4][4] = {{0, 0, -1, 0}, {0, double(cfg.eps1), 0, 0}, {-1, 0, 0, 0}, {0, 0, 0, double(cfg.eps2)}};
  double d = 0.0;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) d = std::max(d, std::abs(minkowski(node.frame[i], node.frame[j], cfg) - table[i][j]));
  return d;
}

/// Integrates the Cartan equations along one period of the grid with RK4.
/// Mid-step curvatures come from periodic cubic interpolation. The result has
/// grid_points + 1 nodes; the frame is never re-orthonormalized.
inline FramePath reconstruct_curve(const CurvatureGrid& grid, const SimConfig& cfg,
                                   const FrameNode& initial = standard_initial_frame()) {
  cfg.validate();
  const int n = static_cast<int>(grid.k1.size());
  const double h = cfg.spacing();
  const double a = cfg.a, e1 = cfg.eps1, e2 = cfg.eps2;
  auto at = [n](const std::vector<double>& v, int i) { return v[((i % n) + n) % n]; };
  auto mid = [&](const std::vector<double>& v, int i) {
    return (-at(v, i - 1) + 9 * at(v, i) + 9 * at(v, i + 1) - at(v, i + 2)) / 16;
  };
  // d/dsigma of (T, W1, N, W2, gamma).
  auto deriv = [&](const FrameNode& s, double k1, double k2) {
    FrameNode d;
    const auto& [T, W1, N, W2] = s.frame;
    for (int c = 0; c < 4; ++c) {
      d.frame[0][c] = a * W1[c];
      d.frame[1][c] = -k1 * T[c] + a * e1 * N[c];
      d.frame[2][c] = -e1 * k1 * W1[c] + e2 * k2 * W2[c];
      d.frame[3][c] = k2 * T[c];
      d.gamma[c] = T[c];
    }
    return d;
  };
  auto step = [](const FrameNode& s, double f, const FrameNode& d) {
    FrameNode r = s;
    for (int i = 0; i < 4; ++i)
      for (int c = 0; c < 4; ++c) r.frame[i][c] += f * d.frame[i][c];
    for (int c = 0; c < 4; ++c) r.gamma[c] += f * d.gamma[c];
    return r;
  };

  FramePath path;
  FrameNode cur = initial;
  auto record = [&](double s) {
    path.sigma.push_back(s);
    path.nodes.push_back(cur);
    path.gram_drift = std::max(path.gram_drift, gram_deviation(cur, cfg));
    path.null_drift = std::max(path.null_drift, std::abs(minkowski(cur.frame[0], cur.frame[0], cfg)));
    Vec4 acc;  // gamma'' = a W1
    for (int c = 0; c < 4; ++c) acc[c] = a * cur.frame[1][c];
    path.curvature_drift = std::max(path.curvature_drift, std::abs(minkowski(acc, acc, cfg) - e1 * a * a));
  };
  double s0 = grid.sigma.empty() ? cfg.sigma0 : grid.sigma.front();
  record(s0);
  for (int i = 0; i < n; ++i) {
    double k1a = at(grid.k1, i), k2a = at(grid.k2, i);
    double k1m = mid(grid.k1, i), k2m = mid(grid.k2, i);
    double k1b = at(grid.k1, i + 1), k2b = at(grid.k2, i + 1);
    FrameNode d1 = deriv(cur, k1a, k2a);
    FrameNode d2 = deriv(step(cur, h / 2, d1), k1m, k2m);
    FrameNode d3 = deriv(step(cur, h / 2, d2), k1m, k2m);
    FrameNode d4 = deriv(step(cur, h, d3), k1b, k2b);
    for (int f = 0; f < 4; ++f)
      for (int c = 0; c < 4; ++c)
        cur.frame[f][c] += h / 6 * (d1.frame[f][c] + 2 * d2.frame[f][c] + 2 * d3.frame[f][c] + d4.frame[f][c]);
    for (int c = 0; c < 4; ++c) cur.gamma[c] += h / 6 * (d1.gamma[c] + 2 * d2.gamma[c] + 2 * d3.gamma[c] + d4.gamma[c]);
    record(s0 + (i + 1) * h);
  }
  return path;
}

struct NlieResult {
  Trajectory trajectory;
  std::vector<FramePath> curves;  // one per saved frame, sharing the initial frame
};

/// Evolves the curvatures under the given flow (normally V1's) and rebuilds the
/// curve at every saved frame.
inline NlieResult nlie_run(const SimConfig& cfg, const CurvatureGrid& initial, const CompiledFlow& flow) {
  NlieResult r;
  r.trajectory = evolve(initial, flow, cfg);
  for (const auto& g : r.trajectory.frames) r.curves.push_back(reconstruct_curve(g, cfg));
  return r;
}

/// Max |x - y| over two sample vectors.
inline double linf_distance(const std::vector<double>& x, const std::vector<double>& y) {
  double d = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) d = std::max(d, std::abs(x[i] - y[i]));
  return d;
}

/// k = s sech^2(sqrt(s)/2 (sigma - x0 + s t)): a solitary wave of k_t = k''' + 3 k k',
/// moving towards smaller sigma with speed s.
inline double kdv_soliton(double sigma, double t, double s, double x0 = 0.0) {
  double ch = std::cosh(std::sqrt(s) / 2 * (sigma - x0 + s * t));
  return s / (ch * ch);
}

}  // namespace nullflow
