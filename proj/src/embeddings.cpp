#include "dcl/embeddings.hpp"

#include "dcl/error.hpp"
#include "dcl/parallel.hpp"

#include <algorithm>
#include <array>
#include <limits>
#include <random>
#include <sstream>

namespace dcl {

SWindow admissible_window(int j, double epsilon) {
  return {-j + 1.5 + j * epsilon, 1.0 - 0.5 * j - j * epsilon};
}

namespace {

// ratio = <k>^ka <sigma>^sa on the points of `regions` (bitmask over D1..D5).
struct WeightCheck {
  const char* name;
  const char* regions_name;
  unsigned regions;
  double ka, sa;
};

constexpr unsigned bit(RegionLabel r) { return 1u << static_cast<unsigned>(r); }

// (2 int_0^smax <sigma>^{-2b} dsigma)^{1/2}: Cauchy-Schwarz constant of Y^s <= C X_{s,b}.
double cs_constant(double b, double smax) {
  auto f = [b](double x) { return std::pow(1.0 + x * x, -b); };
  auto simpson = [&](auto g, double a, double c, int panels) {
    const double h = (c - a) / panels;
    double acc = g(a) + g(c);
    for (int i = 1; i < panels; ++i) acc += (i % 2 ? 4.0 : 2.0) * g(a + i * h);
    return acc * h / 3.0;
  };
  const double head = simpson(f, 0.0, std::min(1.0, smax), 64);
  double tail = 0.0;
  if (smax > 1.0) {
    // x = e^y
    const double ymax = std::log(smax);
    const int panels = 2 * std::max(32, static_cast<int>(64 * ymax));
    tail = simpson([&](double y) { return f(std::exp(y)) * std::exp(y); }, 0.0, ymax, panels);
  }
  return std::sqrt(2.0 * (head + tail));
}

}  // namespace

EmbeddingReport verify_embeddings(double s, const ModelParams& params, const EmbeddingScan& scan) {
  params.validate();
  const int j = params.j;
  require(j >= 2, "embedding scans need j >= 2 (the Z^s norm is defined for j >= 2)");
  require(!scan.bounds.empty(), "embedding scan needs at least one bound");
  EmbeddingReport rep;
  rep.j = j;
  rep.s = s;
  rep.epsilon = params.epsilon;
  rep.window = admissible_window(j, params.epsilon);
  rep.in_window = rep.window.contains(s);
  if (!rep.in_window && !scan.force) {
    std::ostringstream msg;
    msg << "s = " << s << " lies outside the admissible window [" << rep.window.lo << ", "
        << rep.window.hi << "] for j = " << j << ", epsilon = " << params.epsilon;
    throw ValidationError(msg.str());
  }

  const double jj = j;
  const double b_lo = 1.0 / (2.0 * jj), b_hi = (2.0 * jj - 1.0) / (2.0 * jj);
  // Z^s weights per region family.
  const double z15k = s, z15s = b_hi;
  const double z2k = (1.0 - 2.0 * jj) * (s - 1.0), z2s = s;
  const double z34k = -(s - 1.0) / jj - 1.0, z34s = (s - 1.0) / jj + 1.0;
  const unsigned d15 = bit(RegionLabel::D1) | bit(RegionLabel::D5);
  const unsigned d2 = bit(RegionLabel::D2);
  const unsigned d34 = bit(RegionLabel::D3) | bit(RegionLabel::D4);
  const WeightCheck checks[] = {
      {"lower X_{s,1/(2j)} <= Z", "D1+D5", d15, s - z15k, b_lo - z15s},
      {"lower X_{s,1/(2j)} <= Z", "D2", d2, s - z2k, b_lo - z2s},
      {"lower X_{s,1/(2j)} <= Z", "D3+D4", d34, s - z34k, b_lo - z34s},
      {"upper Z <= X_{s,(2j-1)/(2j)}", "D1+D5", d15, z15k - s, z15s - b_hi},
      {"upper Z <= X_{s,(2j-1)/(2j)}", "D2", d2, z2k - s, z2s - b_hi},
      {"upper Z <= X_{s,(2j-1)/(2j)}", "D3+D4", d34, z34k - s, z34s - b_hi},
      {"half X_{s,1/2} <= Z", "D1", bit(RegionLabel::D1), s - z15k, 0.5 - z15s},
      {"half X_{s,1/2} <= Z", "D2", d2, s - z2k, 0.5 - z2s},
  };
  constexpr std::size_t nchecks = std::size(checks);
  const double c = region_constant(j);

  for (std::size_t i = 0; i < nchecks; ++i)
    rep.checks.push_back({checks[i].name, checks[i].regions_name, {}, 0.0, false});
  EmbeddingCheck ycheck{"upper Y^s <= X_{s,(2j-1)/(2j)}", "all", {}, 0.0, false};

  for (int bound : scan.bounds) {
    require(bound >= 1, "scan bounds must be positive");
    ModelParams p = params;
    p.modes = static_cast<int>(std::lround(bound * params.lambda));
    const double smax = 4.0 * c * std::pow(static_cast<double>(bound), 2 * j + 1);
    std::vector<double> grid = {0.0};
    for (int i = 0;; ++i) {
      const double v = std::exp2(-4.0 + i / 8.0);
      if (v > smax) break;
      grid.push_back(v);
    }
    grid.push_back(smax);

    // Per-chunk maxima, merged in chunk order for determinism.
    struct Best {
      double ratio = -1.0, k = 0.0, sigma = 0.0;
    };
    const std::size_t rows = static_cast<std::size_t>(p.modes);
    const std::size_t nchunks = std::min<std::size_t>(thread_count(), rows);
    std::vector<std::array<Best, nchecks>> partial(std::max<std::size_t>(nchunks, 1));
    parallel_chunks(
        rows,
        [&](std::size_t chunk, std::size_t begin, std::size_t end) {
          auto& best = partial[chunk];
          std::vector<double> pts;
          for (std::size_t idx = begin; idx < end; ++idx) {
            const int n = static_cast<int>(idx) + 1;
            const double k = p.frequency(n);
            const double lk = std::log(bracket(k));
            pts = grid;
            for (double t : {c * std::pow(k, 2 * j), c * std::pow(k, 2 * j + 1)}) {
              pts.push_back(t);
              pts.push_back(std::nextafter(t, 0.0));
              pts.push_back(std::nextafter(t, std::numeric_limits<double>::infinity()));
            }
            for (double sg : pts) {
              const RegionLabel lab = classify_sigma(n, sg, p);
              if (lab == RegionLabel::Excluded) continue;
              const unsigned b = bit(lab);
              const double ls = std::log(bracket(sg));
              for (std::size_t ci = 0; ci < nchecks; ++ci) {
                if (!(checks[ci].regions & b)) continue;
                const double r = std::exp(checks[ci].ka * lk + checks[ci].sa * ls);
                if (r > best[ci].ratio || !std::isfinite(r)) best[ci] = {r, k, sg};
              }
            }
          }
        },
        nchunks);

    for (std::size_t ci = 0; ci < nchecks; ++ci) {
      Best b;
      for (const auto& part : partial)
        if (part[ci].ratio > b.ratio || !std::isfinite(part[ci].ratio)) b = part[ci];
      rep.checks[ci].trend.push_back({bound, std::max(b.ratio, 0.0), b.k, b.sigma});
    }
    ycheck.trend.push_back({bound, cs_constant(b_hi, smax), 0.0, smax});
  }
  rep.checks.push_back(ycheck);

  rep.pass = true;
  for (auto& chk : rep.checks) {
    bool ok = true;
    double growth = 1.0;
    for (std::size_t i = 0; i < chk.trend.size(); ++i) {
      const double m = chk.trend[i].max_ratio;
      if (!std::isfinite(m)) ok = false;
      if (i > 0) {
        const double prev = chk.trend[i - 1].max_ratio;
        const double g = prev > 0.0 ? m / prev : (m > 0.0 ? std::numeric_limits<double>::infinity() : 1.0);
        growth = std::max(growth, g);
      }
    }
    chk.growth = growth;
    chk.pass = ok && growth <= scan.growth_tolerance;
    rep.pass = rep.pass && chk.pass;
  }
  return rep;
}

// ---------------------------------------------------------------------------

std::string to_string(BilinearForm f) {
  switch (f) {
    case BilinearForm::DxDxSmoothed: return "dxdx_smoothed";
    case BilinearForm::ProductDx: return "product_dx";
    case BilinearForm::ProductSmoothed: return "product_smoothed";
  }
  return "?";
}

BilinearForm parse_bilinear_form(const std::string& name) {
  if (name == "dxdx_smoothed") return BilinearForm::DxDxSmoothed;
  if (name == "product_dx") return BilinearForm::ProductDx;
  if (name == "product_smoothed") return BilinearForm::ProductSmoothed;
  throw ValidationError("unknown bilinear form '" + name +
                        "' (expected dxdx_smoothed, product_dx or product_smoothed)");
}

cplx bilinear_symbol(BilinearForm f, double k1, double k2) {
  const double k = k1 + k2;
  const cplx ik(0.0, k);
  switch (f) {
    case BilinearForm::DxDxSmoothed: return ik / (1.0 + k * k) * (cplx(0.0, k1) * cplx(0.0, k2));
    case BilinearForm::ProductDx: return ik;
    case BilinearForm::ProductSmoothed: return ik / (1.0 + k * k);
  }
  return {};
}

SpaceTimeSpectrum bilinear_output(const SpaceTimeSpectrum& u, const SpaceTimeSpectrum& v,
                                  BilinearForm form) {
  auto prod = spacetime_product(u, v, [form](double k1, double k2) { return bilinear_symbol(form, k1, k2); });
  return inverse_modulation(std::move(prod.spectrum));
}

ProbeResult bilinear_probe(const SpaceTimeSpectrum& u, const SpaceTimeSpectrum& v, double s,
                           BilinearForm form) {
  ProbeResult r;
  r.zs_u = zs_norm(u, s);
  r.zs_v = zs_norm(v, s);
  if (r.zs_u == 0.0 || r.zs_v == 0.0) return r;
  r.zs_out = zs_norm(bilinear_output(u, v, form), s);
  r.ratio = r.zs_out / (r.zs_u * r.zs_v);
  r.defined = true;
  return r;
}

SpaceTimeSpectrum random_spectrum(const ModelParams& params, int data_modes, double sigma_width,
                                  double dtau, double s, std::uint64_t seed) {
  require(data_modes >= 1 && data_modes <= params.modes, "random data modes must fit the lattice");
  require(sigma_width >= 0.0, "sigma width must be >= 0");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  const auto half = static_cast<std::int64_t>(std::floor(sigma_width / dtau + 1e-12));
  SpaceTimeSpectrum u(params, dtau);
  for (int n = 1; n <= data_modes; ++n) {
    Block pos{-half, std::vector<cplx>(static_cast<std::size_t>(2 * half + 1))};
    for (auto& a : pos.amps) {
      const double re = normal(rng);
      const double im = normal(rng);
      a = {re, im};
    }
    // Real field: a(-k, -tau) = conj a(k, tau), and sigma flips sign with (k, tau).
    Block neg{-half, std::vector<cplx>(pos.amps.size())};
    for (std::size_t i = 0; i < pos.amps.size(); ++i) neg.amps[pos.amps.size() - 1 - i] = std::conj(pos.amps[i]);
    u.set_row(n, {pos});
    u.set_row(-n, {neg});
  }
  const double z = zs_norm(u, s);
  if (z > 0.0) u *= 1.0 / z;
  return u;
}

ProbeBatch bilinear_probe_batch(const ProbeBatchConfig& cfgIn) {
  ProbeBatchConfig cfg = cfgIn;
  require(cfg.pairs >= 1, "probe needs at least one random pair");
  require(cfg.j >= 2, "bilinear probes need j >= 2");
  ModelParams p = ModelParams::with_kmax(cfg.j, 1.0, cfg.data_modes, cfg.epsilon);
  cfg.epsilon = p.epsilon;
  const SWindow w = admissible_window(cfg.j, p.epsilon);
  if (!cfg.force && !w.contains(cfg.s)) {
    std::ostringstream msg;
    msg << "s = " << cfg.s << " lies outside the admissible window [" << w.lo << ", " << w.hi << "]";
    throw ValidationError(msg.str());
  }
  ProbeBatch out;
  out.cfg = cfg;
  out.ratios.resize(static_cast<std::size_t>(cfg.pairs));
  // Each pair draws from its own stream so results do not depend on scheduling.
  std::seed_seq seq{static_cast<std::uint32_t>(cfg.seed), static_cast<std::uint32_t>(cfg.seed >> 32)};
  std::vector<std::uint64_t> seeds(2 * static_cast<std::size_t>(cfg.pairs));
  {
    std::vector<std::uint32_t> raw(2 * seeds.size());
    seq.generate(raw.begin(), raw.end());
    for (std::size_t i = 0; i < seeds.size(); ++i)
      seeds[i] = (static_cast<std::uint64_t>(raw[2 * i]) << 32) | raw[2 * i + 1];
  }
  parallel_for(out.ratios.size(), [&](std::size_t i) {
    const auto u = random_spectrum(p, cfg.data_modes, cfg.sigma_width, cfg.dtau, cfg.s, seeds[2 * i]);
    const auto v = random_spectrum(p, cfg.data_modes, cfg.sigma_width, cfg.dtau, cfg.s, seeds[2 * i + 1]);
    out.ratios[i] = bilinear_probe(u, v, cfg.s, cfg.form).ratio;
  });
  std::vector<double> sorted = out.ratios;
  std::sort(sorted.begin(), sorted.end());
  out.max_ratio = sorted.back();
  const std::size_t mid = sorted.size() / 2;
  out.median_ratio = sorted.size() % 2 ? sorted[mid] : 0.5 * (sorted[mid - 1] + sorted[mid]);
  return out;
}

}  // namespace dcl
