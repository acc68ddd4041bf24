#include "dcl/picard.hpp"

#include "dcl/error.hpp"
#include "dcl/fft.hpp"

#include <numbers>

namespace dcl {

double eta(double t) {
  const double a = std::abs(t);
  if (a <= 1.0) return 1.0;
  if (a >= 2.0) return 0.0;
  const double d = a - 1.0;
  return std::exp(1.0 - 1.0 / (1.0 - d * d));
}

std::string to_string(Quadrature q) { return q == Quadrature::Simpson ? "simpson" : "trapezoid"; }

Quadrature parse_quadrature(const std::string& name) {
  if (name == "simpson") return Quadrature::Simpson;
  if (name == "trapezoid") return Quadrature::Trapezoid;
  throw ValidationError("unknown quadrature '" + name + "' (expected simpson or trapezoid)");
}

const SpatialSpectrum& PicardResult::final_at(double t) const {
  require(!times.empty(), "empty Picard result");
  const double h = cfg.time_step;
  const long i = std::lround((t - times.front()) / h);
  require(i >= 0 && static_cast<std::size_t>(i) < times.size() && std::abs(times[static_cast<std::size_t>(i)] - t) <= 1e-9,
          "t is not a node of the Picard time grid");
  return iterates.back()[static_cast<std::size_t>(i)];
}

namespace {

// Cumulative integral from node `origin` to every node of g sampled on a uniform grid.
std::vector<SpatialSpectrum> cumulative(const std::vector<SpatialSpectrum>& g, std::size_t origin,
                                        double h, Quadrature q) {
  const std::size_t n = g.size();
  std::vector<SpatialSpectrum> out(n, SpatialSpectrum(g[0].params()));
  auto sweep = [&](int dir) {
    // Nodes origin + dir*m, m = 0, 1, ...; integral signed by dir.
    auto node = [&](long m) -> const SpatialSpectrum& {
      return g[static_cast<std::size_t>(static_cast<long>(origin) + dir * m)];
    };
    const long last = dir > 0 ? static_cast<long>(n - 1 - origin) : static_cast<long>(origin);
    const double hs = dir * h;
    SpatialSpectrum even(g[0].params());  // integral up to the last even node
    for (long m = 1; m <= last; ++m) {
      SpatialSpectrum val(g[0].params());
      if (q == Quadrature::Trapezoid) {
        val = out[static_cast<std::size_t>(static_cast<long>(origin) + dir * (m - 1))];
        val += (0.5 * hs) * (node(m - 1) + node(m));
      } else if (m % 2 == 0) {
        even += (hs / 3.0) * (node(m - 2) + 4.0 * node(m - 1) + node(m));
        val = even;
      } else if (m + 1 <= last) {
        // First half of the Simpson panel [m-1, m+1].
        val = even + (hs / 12.0) * (5.0 * node(m - 1) + 8.0 * node(m) - node(m + 1));
      } else if (m >= 2) {
        // Final odd node: second half of the panel [m-2, m].
        val = even + (hs / 12.0) * (-1.0 * node(m - 2) + 8.0 * node(m - 1) + 5.0 * node(m));
      } else {
        val = (0.5 * hs) * (node(0) + node(1));
      }
      out[static_cast<std::size_t>(static_cast<long>(origin) + dir * m)] = std::move(val);
    }
  };
  sweep(+1);
  sweep(-1);
  return out;
}

struct Run {
  std::vector<double> times;
  std::vector<std::vector<SpatialSpectrum>> v;       // interaction-picture iterates
  std::vector<std::vector<SpatialSpectrum>> dv;      // increments, dv[n-1] = v^n - v^{n-1}
};

Run run_picard(const SpatialSpectrum& u0, const PicardConfig& cfg, double h) {
  const double steps_d = 2.0 / h;
  const long half = std::lround(steps_d);
  require(half >= 2 && std::abs(steps_d - static_cast<double>(half)) <= 1e-9 * steps_d,
          "Picard time step must divide 2 (grid covers supp eta = [-2, 2] with t = 0 a node)");
  const std::size_t n = static_cast<std::size_t>(2 * half + 1);
  const std::size_t origin = static_cast<std::size_t>(half);
  Run r;
  r.times.resize(n);
  for (std::size_t i = 0; i < n; ++i) r.times[i] = (static_cast<double>(i) - static_cast<double>(half)) * h;

  std::vector<SpatialSpectrum> v0(n, u0);
  std::vector<double> cut(n);
  for (std::size_t i = 0; i < n; ++i) {
    cut[i] = eta(r.times[i]);
    v0[i] *= cut[i];
  }
  r.v.push_back(v0);

  auto to_w = [&](const SpatialSpectrum& v, std::size_t i) { return free_evolution(v, r.times[i]); };

  for (int it = 1; it <= cfg.iterations; ++it) {
    std::vector<SpatialSpectrum> g(n, SpatialSpectrum(u0.params()));
    for (std::size_t i = 0; i < n; ++i) {
      if (cut[i] == 0.0) continue;
      SpatialSpectrum f(u0.params());
      if (it == 1) {
        const SpatialSpectrum w = to_w(r.v[0][i], i);
        f = nonlinearity_F(w, w, cfg.eq);
      } else {
        const SpatialSpectrum a = to_w(r.v[static_cast<std::size_t>(it - 1)][i] + r.v[static_cast<std::size_t>(it - 2)][i], i);
        const SpatialSpectrum d = to_w(r.dv[static_cast<std::size_t>(it - 2)][i], i);
        f = nonlinearity_F(a, d, cfg.eq);
      }
      g[i] = free_evolution(f, -r.times[i]);
    }
    std::vector<SpatialSpectrum> integral = cumulative(g, origin, h, cfg.quadrature);
    std::vector<SpatialSpectrum> next = r.v.back();
    for (std::size_t i = 0; i < n; ++i) {
      integral[i] *= -cut[i];
      next[i] += integral[i];
    }
    r.dv.push_back(std::move(integral));
    r.v.push_back(std::move(next));
  }
  return r;
}

}  // namespace

SpaceTimeSpectrum time_transform(const std::vector<double>& times,
                                 const std::vector<SpatialSpectrum>& v, double dtau_target,
                                 double sigma_window) {
  require(times.size() == v.size() && times.size() >= 2, "time transform needs matching samples");
  require(dtau_target > 0.0, "tau step must be positive");
  const double h = times[1] - times[0];
  const auto& p = v[0].params();
  const auto nt = times.size();
  std::size_t npad = static_cast<std::size_t>(std::lround(2.0 * std::numbers::pi / (h * dtau_target)));
  npad = fft::good_size(std::max(npad, nt));
  const double dtau = 2.0 * std::numbers::pi / (static_cast<double>(npad) * h);
  const auto mwin = static_cast<long>(std::min<double>(std::floor(sigma_window / dtau),
                                                         static_cast<double>(npad / 2 - 1)));
  const double t0 = times.front();
  const double norm = h / std::sqrt(2.0 * std::numbers::pi);

  SpaceTimeSpectrum out(p, dtau);
  std::vector<cplx> in(npad), spec(npad);
  for (int n = -p.modes; n <= p.modes; ++n) {
    if (n == 0) continue;
    bool any = false;
    std::fill(in.begin(), in.end(), cplx{});
    for (std::size_t i = 0; i < nt; ++i) {
      in[i] = v[i][n];
      any = any || in[i] != cplx{};
    }
    if (!any) continue;
    fft::forward(in, spec);
    Block b{-mwin, std::vector<cplx>(static_cast<std::size_t>(2 * mwin + 1))};
    for (long m = -mwin; m <= mwin; ++m) {
      const double sg = static_cast<double>(m) * dtau;
      const std::size_t bin = static_cast<std::size_t>(m >= 0 ? m : static_cast<long>(npad) + m);
      const cplx phase = std::polar(1.0, -sg * t0);
      b.amps[static_cast<std::size_t>(m + mwin)] = norm * phase * spec[bin];
    }
    out.set_row(n, {std::move(b)});
  }
  return out;
}

PicardResult picard_iterate(const SpatialSpectrum& u0, const PicardConfig& cfg) {
  require(cfg.iterations >= 1, "Picard needs at least one iteration");
  require(std::isfinite(cfg.time_step) && cfg.time_step > 0.0, "Picard time step must be positive");
  PicardResult res;
  res.cfg = cfg;
  res.params = u0.params();
  const double h = cfg.time_step;
  Run r = run_picard(u0, cfg, h);
  res.times = r.times;

  for (const auto& vs : r.v) {
    std::vector<SpatialSpectrum> ws;
    ws.reserve(vs.size());
    for (std::size_t i = 0; i < vs.size(); ++i) ws.push_back(free_evolution(vs[i], r.times[i]));
    res.iterates.push_back(std::move(ws));
  }

  const bool zs_ok = u0.params().j >= 2;
  const double window = std::numbers::pi / h;
  int above = 0;
  for (std::size_t k = 0; k < r.dv.size(); ++k) {
    PicardStep st;
    st.n = static_cast<int>(k) + 1;
    for (const auto& d : r.dv[k]) st.sup_hs = std::max(st.sup_hs, hs_norm(d, cfg.s));
    if (zs_ok) {
      const auto T = time_transform(r.times, r.dv[k], cfg.dtau, window);
      res.dtau_used = T.dtau();
      st.zs = zs_norm(T, cfg.s);
    }
    if (k > 0) {
      const auto& prev = res.steps.back();
      st.ratio_hs = prev.sup_hs > 0.0 ? st.sup_hs / prev.sup_hs : 0.0;
      st.ratio_zs = prev.zs > 0.0 ? st.zs / prev.zs : 0.0;
      above = st.ratio_hs > 1.0 ? above + 1 : 0;
      if (above >= 3) res.diverged = true;
    }
    res.steps.push_back(st);
  }

  if (cfg.self_check && std::lround(1.0 / h) % 2 == 0) {
    PicardConfig coarse = cfg;
    coarse.time_step = 2.0 * h;
    coarse.self_check = false;
    Run rc = run_picard(u0, coarse, 2.0 * h);
    const long fine_i = std::lround((0.5 + 2.0) / h), coarse_i = std::lround((0.5 + 2.0) / (2.0 * h));
    const SpatialSpectrum a = free_evolution(r.v.back()[static_cast<std::size_t>(fine_i)], 0.5);
    const SpatialSpectrum b = free_evolution(rc.v.back()[static_cast<std::size_t>(coarse_i)], 0.5);
    const double na = hs_norm(a, cfg.s);
    res.self_check_change = na > 0.0 ? hs_norm(a - b, cfg.s) / na : 0.0;
  }
  return res;
}

}  // namespace dcl
