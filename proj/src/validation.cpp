#include "hlab/validation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "hlab/ensemble.hpp"
#include "hlab/hashimoto.hpp"
#include "hlab/llg.hpp"

namespace hlab {

double fit_order(const std::vector<double>& h, const std::vector<double>& err) {
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < std::min(h.size(), err.size()); ++i) {
    if (!(h[i] > 0.0) || !(err[i] > 0.0)) continue;
    lx.push_back(std::log(h[i]));
    ly.push_back(std::log(err[i]));
  }
  if (lx.size() < 2) return std::numeric_limits<double>::quiet_NaN();
  const double n = static_cast<double>(lx.size());
  const double mx = std::accumulate(lx.begin(), lx.end(), 0.0) / n;
  const double my = std::accumulate(ly.begin(), ly.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxy += (lx[i] - mx) * (ly[i] - my);
    sxx += (lx[i] - mx) * (lx[i] - mx);
  }
  return sxy / sxx;
}

Vec3Field bump_test_function(const Grid1D& g, const Vec3& dir, double lo, double hi) {
  if (!(hi > lo)) throw PreconditionError("bump_test_function: empty support");
  const double len = g.extent();
  Vec3Field out(g.size());
  for (std::size_t j = 0; j < g.size(); ++j) {
    const double s = (g.x(j) - g.domain().x_min) / len;
    if (s <= lo || s >= hi) continue;
    const double v = std::sin(std::numbers::pi * (s - lo) / (hi - lo));
    out[j] = (v * v * v * v) * dir;
  }
  return out;
}

std::vector<std::pair<Vec3Field, Vec3Field>> covariance_test_pairs(const Grid1D& g) {
  const std::size_t n = g.size();
  const double k = 2.0 * std::numbers::pi / g.extent();
  Vec3Field a(n), b(n), c(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double x = k * (g.x(j) - g.domain().x_min);
    a[j] = {std::cos(x), 0.5, std::sin(2.0 * x)};
    b[j] = {0.3, std::sin(x), 0.7 * std::cos(x)};
    c[j] = {1.0, -std::cos(3.0 * x), 0.2};
  }
  return {{a, a}, {a, b}, {b, c}};
}

// ---------------------------------------------------------------- crosscheck

CrossCheckReport crosscheck_deterministic(const MapFamily& u0, const CrossCheckConfig& cfg) {
  if (cfg.ns.empty()) throw ConfigError("crosscheck: no refinement levels");
  std::vector<std::size_t> ns = cfg.ns;
  std::sort(ns.begin(), ns.end());

  CrossCheckReport rep;
  for (std::size_t level = 0; level < ns.size(); ++level) {
    const Grid1D g = make_grid(cfg.domain, ns[level]);
    const SphereField u_init = u0(g);
    const ComplexField q_init = transform(u_init, g);
    const double dt = std::min(cfg.dt_max, stability_limit(g, cfg.alpha, cfg.beta));

    LLGConfig lc;
    lc.alpha = cfg.alpha;
    lc.beta = cfg.beta;
    lc.dt = dt;
    lc.t_end = cfg.t_end;
    lc.output_stride = cfg.output_stride;
    HeatConfig hc;
    hc.alpha = cfg.alpha;
    hc.beta = cfg.beta;
    hc.dt = dt;
    hc.t_end = cfg.t_end;
    hc.output_stride = cfg.output_stride;
    const LLGTrajectory lt = llg_integrate(u_init, g, lc);
    const HeatTrajectory ht = heat_integrate(q_init, g, hc);

    CrossCheckLevel row;
    row.n = g.size();
    row.h = g.spacing();
    row.dt = lt.dt;
    row.decay_ok = !ht.decay_warning;
    const bool finest = level + 1 == ns.size();
    for (std::size_t k = 0; k < lt.states.size(); ++k) {
      const ComplexField qu = transform(lt.states[k], g);
      const ComplexField& qh = ht.states[k];
      Complex overlap{};
      double mx = 0.0, l2 = 0.0;
      for (std::size_t j = 0; j < qu.size(); ++j) {
        const double d = std::abs(qu[j] - qh[j]);
        mx = std::max(mx, d);
        l2 += d * d;
        overlap += qu[j] * std::conj(qh[j]);
      }
      l2 = std::sqrt(l2 * g.spacing());
      const double phase = std::abs(overlap) > 0.0 ? std::arg(overlap) : 0.0;
      const Complex rot = std::polar(1.0, phase);
      double aligned = 0.0;
      for (std::size_t j = 0; j < qu.size(); ++j)
        aligned = std::max(aligned, std::abs(qu[j] - qh[j] * rot));
      row.max_discrepancy = std::max(row.max_discrepancy, mx);
      row.l2_discrepancy = std::max(row.l2_discrepancy, l2);
      row.aligned_discrepancy = std::max(row.aligned_discrepancy, aligned);
      row.max_gauge_phase = std::max(row.max_gauge_phase, std::abs(phase));
      if (finest) {
        rep.times.push_back(lt.times[k]);
        rep.max_discrepancy.push_back(mx);
        rep.l2_discrepancy.push_back(l2);
        rep.gauge_phase.push_back(phase);
        rep.monitors.push_back(ht.monitors[k]);
      }
    }
    rep.flagged = rep.flagged || !row.decay_ok;
    rep.table.push_back(row);
  }

  std::vector<double> hs, errs;
  for (const auto& r : rep.table) {
    hs.push_back(r.h);
    errs.push_back(r.max_discrepancy);
  }
  rep.observed_order = rep.table.size() > 1 ? fit_order(hs, errs) : 0.0;
  return rep;
}

// ------------------------------------------------------------- identities

const IdentityResidual* IdentityReport::find(const std::string& name) const {
  for (const auto& r : rows)
    if (r.name == name) return &r;
  return nullptr;
}

IdentityReport identity_suite(const SphereField& u, const Grid1D& g, double eps_rel) {
  detail::check_length(u.size(), g, "identity_suite");
  const std::size_t n = u.size();
  const CurvatureTorsion ct = curvature_torsion(u, g, eps_rel);
  IdentityReport rep;
  rep.rows = {{"lagrange", 0.0, true}, {"uxx_norm", 0.0, false}, {"u_uxxx", 0.0, false},
              {"ratio", 0.0, false}};

  const std::size_t lo = g.periodic() ? 0 : 2;
  const std::size_t hi = g.periodic() ? n : n - 2;
  for (std::size_t j = lo; j < hi; ++j)
    if (ct.valid[j]) ++rep.valid_count;
  if (rep.valid_count == 0) {
    rep.skipped = true;
    return rep;
  }

  const Vec3Field ux = diff1(u.values(), g);
  const Vec3Field uxx = diff2(u.values(), g);
  const Vec3Field uxxx = diff1(uxx, g);
  const RealField th_x = diff1(ct.theta, g);
  for (std::size_t j = lo; j < hi; ++j) {
    if (!ct.valid[j]) continue;
    const double th = ct.theta[j];
    const double eta = ct.eta[j];

    const double lhs = norm2(ux[j]) * norm2(uxx[j]);
    const double rhs = norm2(cross(ux[j], uxx[j])) + dot(ux[j], uxx[j]) * dot(ux[j], uxx[j]);
    if (lhs > 0.0) rep.rows[0].max_residual = std::max(rep.rows[0].max_residual, std::abs(lhs - rhs) / lhs);

    const double norm_rhs = th * th * th * th + th_x[j] * th_x[j] + eta * eta * th * th;
    rep.rows[1].max_residual = std::max(rep.rows[1].max_residual, std::abs(norm2(uxx[j]) - norm_rhs));

    rep.rows[2].max_residual =
        std::max(rep.rows[2].max_residual, std::abs(dot(u[j], uxxx[j]) + 3.0 * th * th_x[j]));

    const double ratio = (th_x[j] * th_x[j] - norm2(cross(u[j], uxx[j]))) / th;
    rep.rows[3].max_residual = std::max(rep.rows[3].max_residual, std::abs(ratio + eta * eta * th));
  }
  return rep;
}

// --------------------------------------------------------------- holonomy

HolonomyStats holonomy_defect(const QPath& path, const Grid1D& g, double alpha, double beta) {
  HolonomyStats st;
  if (path.q.size() < 2) return st;
  const std::size_t n = g.size();
  for (const auto& q : path.q) detail::check_length(q.size(), g, "holonomy_defect");
  if (!path.noise.empty() && path.noise.size() + 1 != path.q.size())
    throw PreconditionError("holonomy_defect: need one noise entry per interval");
  const double h = g.spacing();
  const double dt = path.dt;

  std::vector<InternalCoeffs> coeffs;
  coeffs.reserve(path.q.size());
  for (const auto& q : path.q) coeffs.push_back(internal_coeffs(q, g, alpha, beta, {}, {}, {}));

  auto spatial = [&](const ComplexField& q, std::size_t j) {
    const Complex mid = 0.5 * (q[j] + q[j + 1]);
    return Rotation3::exp({h * mid.real(), h * mid.imag(), 0.0});
  };

  const std::size_t cells = n - 1;  // the wrap cell of a circle is left out
  double sum = 0.0;
  for (std::size_t k = 0; k + 1 < path.q.size(); ++k) {
    const ComplexField& q0 = path.q[k];
    const ComplexField& q1 = path.q[k + 1];
    const InternalCoeffs avg = average(coeffs[k], coeffs[k + 1]);
    RealField dpsi(n, 0.0);
    const NoiseFields* nf = path.noise.empty() ? nullptr : &path.noise[k];
    if (nf && !nf->dw1.empty()) {
      ComplexField mid(n);
      for (std::size_t j = 0; j < n; ++j) mid[j] = 0.5 * (q0[j] + q1[j]);
      dpsi = psi_increment(mid, g, nf->dw1, nf->dw2);
    }
    auto temporal = [&](std::size_t j) {
      const double w1 = nf && !nf->dw1.empty() ? nf->dw1[j] : 0.0;
      const double w2 = nf && !nf->dw2.empty() ? nf->dw2[j] : 0.0;
      return Rotation3::exp(time_generator(avg.p[j], avg.C[j], dpsi[j], w1, w2, dt));
    };
    for (std::size_t j = 0; j < cells; ++j) {
      const Rotation3 x_then_t = temporal(j + 1) * spatial(q0, j);
      const Rotation3 t_then_x = spatial(q1, j) * temporal(j);
      const double angle = (x_then_t.transpose() * t_then_x).angle();
      st.max_defect = std::max(st.max_defect, angle);
      sum += angle;
      ++st.plaquettes;
    }
  }
  st.mean_defect = st.plaquettes > 0 ? sum / static_cast<double>(st.plaquettes) : 0.0;
  return st;
}

HolonomyStudy holonomy_study(const ProfileFamily& q0, const HolonomyConfig& cfg) {
  if (cfg.ns.empty()) throw ConfigError("holonomy: no refinement levels");
  if (!(cfg.dt_over_h > 0.0)) throw ConfigError("holonomy: dt_over_h must be positive");
  if (cfg.intervals == 0) throw ConfigError("holonomy: intervals must be positive");
  std::vector<std::size_t> ns = cfg.ns;
  std::sort(ns.begin(), ns.end());

  HolonomyStudy study;
  std::vector<double> hs, pos, neg;
  for (std::size_t n : ns) {
    const Grid1D g = make_grid(cfg.domain, n);
    const ComplexField q_init = q0(g);
    const double dt_out = cfg.dt_over_h * g.spacing();
    const double limit = stability_limit(g, cfg.alpha, cfg.beta);
    const std::size_t sub = static_cast<std::size_t>(std::ceil(dt_out / limit));

    HeatConfig hc;
    hc.alpha = cfg.alpha;
    hc.beta = cfg.beta;
    hc.dt = dt_out / static_cast<double>(sub);
    hc.t_end = dt_out * static_cast<double>(cfg.intervals);
    hc.output_stride = sub;
    const HeatTrajectory ht = heat_integrate(q_init, g, hc);

    QPath solved{ht.states, dt_out, {}};
    QPath frozen{std::vector<ComplexField>(ht.states.size(), q_init), dt_out, {}};
    study.positive.push_back({n, g.spacing(), dt_out, holonomy_defect(solved, g, cfg.alpha, cfg.beta)});
    study.negative.push_back({n, g.spacing(), dt_out, holonomy_defect(frozen, g, cfg.alpha, cfg.beta)});
    hs.push_back(g.spacing());
    pos.push_back(study.positive.back().stats.max_defect);
    neg.push_back(study.negative.back().stats.max_defect);
  }
  study.positive_order = fit_order(hs, pos);
  study.negative_order = fit_order(hs, neg);
  return study;
}

// ----------------------------------------------------------- weak residual

WeakResidual::WeakResidual(const Grid1D& g, std::vector<Vec3Field> phis, double alpha, double beta)
    : g_(g), phis_(std::move(phis)), alpha_(alpha), beta_(beta), r_(phis_.size(), 0.0) {
  for (const auto& phi : phis_) detail::check_length(phi.size(), g_, "WeakResidual");
}

void WeakResidual::operator()(const SLLGStep& s) {
  const FrameField& fo = *s.frame_old;
  const FrameField& fn = *s.frame_new;
  const Vec3Field drift_old = llg_rhs(fo.u, g_, alpha_, beta_);
  const Vec3Field drift_new = llg_rhs(fn.u, g_, alpha_, beta_);
  const Vec3Field dwt_new = assemble_dw_tilde(fn, *s.noise);
  const Vec3Field& dwt_old = *s.dw_tilde;
  const double h = g_.spacing();
  for (std::size_t j = 0; j < fo.size(); ++j) {
    const Vec3 d = fn.u[j] - fo.u[j] - 0.5 * s.dt * (drift_old[j] + drift_new[j]) -
                   0.5 * (cross(fo.u[j], dwt_old[j]) + cross(fn.u[j], dwt_new[j]));
    for (std::size_t i = 0; i < phis_.size(); ++i) r_[i] += h * dot(d, phis_[i][j]);
  }
}

namespace {

struct MeanStd {
  double mean = 0.0;
  double std_error = 0.0;  // of the mean
  double sd = 0.0;
};

MeanStd mean_std(const std::vector<double>& v) {
  MeanStd r;
  if (v.empty()) return r;
  const double n = static_cast<double>(v.size());
  r.mean = std::accumulate(v.begin(), v.end(), 0.0) / n;
  if (v.size() < 2) return r;
  double ss = 0.0;
  for (double x : v) ss += (x - r.mean) * (x - r.mean);
  r.sd = std::sqrt(ss / (n - 1.0));
  r.std_error = r.sd / std::sqrt(n);
  return r;
}

}  // namespace

WeakResidualReport sllg_weak_residual(const ComplexField& q0, const Grid1D& g, const Vec3& m,
                                      const Vec3& e0, const std::vector<double>& coeffs,
                                      const std::vector<Vec3Field>& phis,
                                      const WeakResidualConfig& cfg) {
  if (cfg.levels.empty()) throw ConfigError("weak residual: no dt levels");
  if (cfg.paths < 2) throw ConfigError("weak residual: need at least two paths");
  const NoiseModel base(g, coeffs, 0);
  const std::size_t nphi = phis.size();

  WeakResidualReport rep;
  for (unsigned mult : cfg.levels) {
    if (mult == 0) throw ConfigError("weak residual: level multiplier must be positive");
    SLLGConfig sc = cfg.sllg;
    sc.dt = cfg.sllg.dt * mult;
    sc.substeps = mult;
    sc.record_stride = 0;
    std::vector<std::vector<double>> values(cfg.paths);
    parallel_for(cfg.paths, cfg.threads, [&](std::size_t p) {
      const NoiseModel nm = base.with_seed(derive_seed(cfg.master_seed, seed_tag::weak_residual, p));
      WeakResidual acc(g, phis, sc.alpha, sc.beta);
      run_sllg(q0, g, m, e0, nm, sc, [&acc](const SLLGStep& s) { acc(s); });
      values[p] = acc.values();
    });
    ResidualLevel lvl;
    lvl.dt = sc.dt;
    lvl.substeps = mult;
    for (std::size_t i = 0; i < nphi; ++i) {
      std::vector<double> col(cfg.paths);
      for (std::size_t p = 0; p < cfg.paths; ++p) col[p] = values[p][i];
      const MeanStd ms = mean_std(col);
      lvl.mean.push_back(ms.mean);
      lvl.std_error.push_back(ms.std_error);
    }
    rep.levels.push_back(std::move(lvl));
  }

  for (std::size_t i = 0; i < nphi; ++i) {
    bool band = true, dec = true;
    for (std::size_t l = 0; l < rep.levels.size(); ++l) {
      const auto& lv = rep.levels[l];
      band = band && std::abs(lv.mean[i]) <= 3.0 * lv.std_error[i];
      if (l > 0) dec = dec && std::abs(lv.mean[i]) < std::abs(rep.levels[l - 1].mean[i]);
    }
    rep.within_band.push_back(band);
    rep.decreasing.push_back(dec);
  }
  return rep;
}

// -------------------------------------------------------------- covariance

double covariance_density(const FrameField& f, const NoiseModel& nm, const Vec3Field& phi,
                          const Vec3Field& psi, const Grid1D& g) {
  const std::size_t n = f.size();
  const Vec3Field w = f.binormal();
  const Vec3Field* dirs[3] = {&f.e, &f.u, &w};
  RealField a(n), b(n);
  double total = 0.0;
  for (const Vec3Field* dir : dirs) {
    for (std::size_t j = 0; j < n; ++j) {
      a[j] = dot(phi[j], (*dir)[j]);
      b[j] = dot(psi[j], (*dir)[j]);
    }
    for (std::size_t l = 0; l < nm.modes(); ++l) {
      const double c = nm.coeffs()[l];
      total += c * c * inner(a, nm.basis(l), g) * inner(b, nm.basis(l), g);
    }
  }
  return total;
}

std::vector<CovarianceReport> covariance_check(
    const ComplexField& q0, const Grid1D& g, const Vec3& m, const Vec3& e0,
    const std::vector<double>& coeffs,
    const std::vector<std::pair<Vec3Field, Vec3Field>>& pairs, const CovarianceConfig& cfg) {
  if (cfg.paths < 2) throw ConfigError("covariance: need at least two paths");
  for (const auto& pr : pairs) {
    detail::check_length(pr.first.size(), g, "covariance phi");
    detail::check_length(pr.second.size(), g, "covariance psi");
  }
  const NoiseModel base(g, coeffs, 0);
  const std::size_t np = pairs.size();
  std::vector<std::vector<double>> mc(cfg.paths), formula(cfg.paths);
  SLLGConfig sc = cfg.sllg;
  sc.record_stride = 0;

  parallel_for(cfg.paths, cfg.threads, [&](std::size_t p) {
    const NoiseModel nm = base.with_seed(derive_seed(cfg.master_seed, seed_tag::covariance, p));
    std::vector<double> f(np, 0.0);
    const SLLGPath path = run_sllg(q0, g, m, e0, nm, sc, [&](const SLLGStep& s) {
      for (std::size_t i = 0; i < np; ++i)
        f[i] += s.dt * covariance_density(*s.frame_old, nm, pairs[i].first, pairs[i].second, g);
    });
    const Vec3Field& wt = path.w_tilde.back();
    std::vector<double> x(np);
    for (std::size_t i = 0; i < np; ++i)
      x[i] = inner(wt, pairs[i].first, g) * inner(wt, pairs[i].second, g);
    mc[p] = std::move(x);
    formula[p] = std::move(f);
  });

  std::vector<CovarianceReport> out;
  const double t_end = step_count(sc.dt, sc.t_end) == 0 ? 0.0 : sc.t_end;
  for (std::size_t i = 0; i < np; ++i) {
    std::vector<double> x(cfg.paths), f(cfg.paths), d(cfg.paths);
    for (std::size_t p = 0; p < cfg.paths; ++p) {
      x[p] = mc[p][i];
      f[p] = formula[p][i];
      d[p] = x[p] - f[p];
    }
    const MeanStd ms_x = mean_std(x), ms_f = mean_std(f), ms_d = mean_std(d);
    CovarianceReport r;
    r.t = t_end;
    r.samples = cfg.paths;
    r.monte_carlo = ms_x.mean;
    r.formula = ms_f.mean;
    r.half_width = 3.0 * ms_d.std_error;
    r.mc_half_width = 3.0 * ms_x.std_error;
    out.push_back(r);
  }
  return out;
}

}  // namespace hlab
