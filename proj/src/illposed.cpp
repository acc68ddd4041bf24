#include "dcl/illposed.hpp"

#include "dcl/error.hpp"
#include "dcl/parallel.hpp"
#include "dcl/symbols.hpp"

#include <cmath>

namespace dcl {

CounterexamplePair build_counterexample(int N, int j, double dtau) {
  require(N >= 2, "counterexample needs N >= 2");
  require(j >= 1, "j must be >= 1");
  require(std::isfinite(dtau) && dtau > 0.0, "tau step must be positive");
  require(dtau <= 2.0, "tau step wider than the unit slab |sigma| <= 1");
  ModelParams p = ModelParams::with_kmax(j, 1.0, N);
  const auto half = static_cast<std::int64_t>(std::floor(1.0 / dtau + 1e-12));
  const Block slab{-half, std::vector<cplx>(static_cast<std::size_t>(2 * half + 1), cplx(1.0, 0.0))};
  CounterexamplePair out{SpaceTimeSpectrum(p, dtau), SpaceTimeSpectrum(p, dtau)};
  out.u1.set_row(N, {slab});
  out.u1.set_row(-N, {slab});
  out.u2.set_row(N - 1, {slab});
  out.u2.set_row(1 - N, {slab});
  return out;
}

WeightedBilinear duhamel_weighted_bilinear(const SpaceTimeSpectrum& u1, const SpaceTimeSpectrum& u2,
                                           double s) {
  WeightedBilinear w;
  const NonlinearityForm full{};
  auto prod = spacetime_product(u1, u2, [&](double k1, double k2) { return pair_symbol(k1, k2, full); });
  w.exact_binning = prod.exact_binning;
  if (prod.spectrum.is_zero()) {
    w.empty_overlap = true;
    return w;
  }
  w.value = ws_norm(inverse_modulation(std::move(prod.spectrum)), s);
  return w;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  require(x.size() == y.size() && x.size() >= 2, "slope fit needs at least two points");
  double mx = 0.0, my = 0.0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    require(x[i] > 0.0 && y[i] > 0.0, "log-log fit needs positive data");
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = std::log(x[i]) - mx;
    sxy += dx * (std::log(y[i]) - my);
    sxx += dx * dx;
  }
  require(sxx > 0.0, "slope fit needs distinct x values");
  return sxy / sxx;
}

std::string collision_verdict(double slopeL, double slopeR, double band) {
  const double g = slopeL - slopeR;
  if (g > band) return "BREAKS";
  if (g < -band) return "HOLDS-AT-THIS-PROBE";
  return "INCONCLUSIVE";
}

namespace {

std::vector<CollisionRow> scan_rows(const CounterexampleConfig& cfg, double dtau) {
  std::vector<CollisionRow> rows(cfg.N_list.size());
  parallel_for(rows.size(), [&](std::size_t i) {
    const int N = cfg.N_list[i];
    const auto pair = build_counterexample(N, cfg.j, dtau);
    rows[i] = {N, duhamel_weighted_bilinear(pair.u1, pair.u2, cfg.s).value,
               ws_norm(pair.u1, cfg.s) * ws_norm(pair.u2, cfg.s)};
  });
  return rows;
}

void fit(const std::vector<CollisionRow>& rows, double& sl, double& sr) {
  std::vector<double> n, l, r;
  for (const auto& row : rows) {
    n.push_back(row.N);
    l.push_back(row.L);
    r.push_back(row.R);
  }
  sl = loglog_slope(n, l);
  sr = loglog_slope(n, r);
}

}  // namespace

CollisionReport collision_scan(const CounterexampleConfig& cfg) {
  require(!cfg.N_list.empty(), "collision scan needs a non-empty N_list");
  for (std::size_t i = 0; i < cfg.N_list.size(); ++i) {
    require(cfg.N_list[i] >= 2, "every N must be >= 2");
    if (i > 0) require(cfg.N_list[i] > cfg.N_list[i - 1], "N_list must be increasing");
  }
  CollisionReport rep;
  rep.cfg = cfg;
  rep.critical_s = 1.0 - 0.5 * cfg.j;
  rep.rows = scan_rows(cfg, cfg.dtau);
  rep.regression = cfg.N_list.size() >= 3;
  if (!rep.regression) {
    rep.verdict = "NO-REGRESSION";
    return rep;
  }
  fit(rep.rows, rep.slopeL, rep.slopeR);
  if (cfg.refine_check) fit(scan_rows(cfg, 0.5 * cfg.dtau), rep.slopeL_refined, rep.slopeR_refined);
  rep.verdict = collision_verdict(rep.slopeL, rep.slopeR);
  return rep;
}

}  // namespace dcl
