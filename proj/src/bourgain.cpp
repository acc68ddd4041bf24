#include "dcl/bourgain.hpp"

#include "dcl/error.hpp"
#include "dcl/symbols.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <numbers>

namespace dcl {

// ---------------------------------------------------------------------------
// SpaceTimeSpectrum

SpaceTimeSpectrum::SpaceTimeSpectrum(ModelParams params, double dtau)
    : params_(params), dtau_(dtau), rows_(2 * static_cast<std::size_t>(params.modes) + 1) {
  require(params.modes >= 1, "space-time spectrum needs at least one mode");
  require(std::isfinite(dtau) && dtau > 0.0, "tau step must be positive");
}

const std::vector<Block>& SpaceTimeSpectrum::row(int n) const {
  static const std::vector<Block> empty;
  if (n == 0 || n > params_.modes || n < -params_.modes) return empty;
  return rows_[static_cast<std::size_t>(n + params_.modes)];
}

std::vector<Block>& SpaceTimeSpectrum::row_ref(int n) {
  if (n == 0 || n > params_.modes || n < -params_.modes)
    throw ValidationError("space-time row " + std::to_string(n) + " outside 0 < |n| <= " +
                          std::to_string(params_.modes));
  return rows_[static_cast<std::size_t>(n + params_.modes)];
}

void SpaceTimeSpectrum::set_row(int n, std::vector<Block> blocks) {
  for (std::size_t i = 1; i < blocks.size(); ++i)
    require(blocks[i - 1].end() <= blocks[i].start, "row blocks must be sorted and disjoint");
  row_ref(n) = std::move(blocks);
}

cplx SpaceTimeSpectrum::get(int n, i128 m) const {
  const auto& r = row(n);
  auto it = std::upper_bound(r.begin(), r.end(), m, [](i128 v, const Block& b) { return v < b.end(); });
  if (it == r.end() || it->start > m) return {};
  return it->amps[static_cast<std::size_t>(m - it->start)];
}

void SpaceTimeSpectrum::set(int n, i128 m, cplx a) {
  auto& r = row_ref(n);
  auto it = std::upper_bound(r.begin(), r.end(), m, [](i128 v, const Block& b) { return v < b.end(); });
  if (it != r.end() && it->start <= m) {
    it->amps[static_cast<std::size_t>(m - it->start)] = a;
    return;
  }
  if (it != r.begin() && std::prev(it)->end() == m) {
    auto prev = std::prev(it);
    prev->amps.push_back(a);
    if (it != r.end() && it->start == m + 1) {
      prev->amps.insert(prev->amps.end(), it->amps.begin(), it->amps.end());
      r.erase(it);
    }
    return;
  }
  if (it != r.end() && it->start == m + 1) {
    it->amps.insert(it->amps.begin(), a);
    it->start = m;
    return;
  }
  r.insert(it, Block{m, {a}});
}

void SpaceTimeSpectrum::add(int n, i128 m, cplx a) { set(n, m, get(n, m) + a); }

double SpaceTimeSpectrum::tau(int n, i128 m) const {
  return dispersion_symbol(params_.frequency(n), params_.j) + sigma(m);
}

std::size_t SpaceTimeSpectrum::cell_count() const {
  std::size_t c = 0;
  for (const auto& r : rows_)
    for (const auto& b : r) c += b.amps.size();
  return c;
}

bool SpaceTimeSpectrum::is_zero() const {
  for (const auto& r : rows_)
    for (const auto& b : r)
      for (cplx a : b.amps)
        if (a != cplx{}) return false;
  return true;
}

void SpaceTimeSpectrum::for_each(const std::function<void(int, i128, cplx)>& f) const {
  for (int n = -params_.modes; n <= params_.modes; ++n)
    for (const auto& b : row(n))
      for (std::size_t i = 0; i < b.amps.size(); ++i) f(n, b.start + static_cast<i128>(i), b.amps[i]);
}

SpaceTimeSpectrum& SpaceTimeSpectrum::operator*=(cplx c) {
  for (auto& r : rows_)
    for (auto& b : r)
      for (auto& a : b.amps) a *= c;
  return *this;
}

SpaceTimeSpectrum& SpaceTimeSpectrum::operator+=(const SpaceTimeSpectrum& o) {
  require(params_.j == o.params_.j && params_.lambda == o.params_.lambda && dtau_ == o.dtau_,
          "space-time spectra live on different grids");
  require(o.modes() <= modes(), "right operand has rows beyond this spectrum's truncation");
  o.for_each([this](int n, i128 m, cplx a) { add(n, m, a); });
  return *this;
}

// ---------------------------------------------------------------------------
// Regions

std::string to_string(RegionLabel r) {
  switch (r) {
    case RegionLabel::D1: return "D1";
    case RegionLabel::D2: return "D2";
    case RegionLabel::D3: return "D3";
    case RegionLabel::D4: return "D4";
    case RegionLabel::D5: return "D5";
    case RegionLabel::Excluded: return "excluded";
  }
  return "?";
}

double region_constant(int j) {
  return (2.0 * j + 1.0) * std::pow(4.0, -j) / 3.0;
}

double sigma(double k, double tau, const ModelParams& params) {
  return tau - dispersion_symbol(k, params.j);
}

namespace {

struct Thresholds {
  double lower;   // c |k|^{2j}
  double upper;   // c |k|^{2j+1}
  bool large;     // |k| >= 1
  bool small;     // 1/lambda <= |k| <= 1
};

Thresholds thresholds(int n, const ModelParams& p) {
  const long double k = std::abs(static_cast<long double>(n)) / p.lambda;
  long double pw = 1.0L;
  for (int i = 0; i < 2 * p.j; ++i) pw *= k;
  const long double c = (2.0L * p.j + 1.0L) / (3.0L * std::pow(4.0L, p.j));
  const double an = std::abs(static_cast<double>(n));
  return {static_cast<double>(c * pw), static_cast<double>(c * pw * k), an >= p.lambda,
          an <= p.lambda};
}

inline unsigned mask_of(double a, const Thresholds& t) {
  unsigned m = 0;
  m |= static_cast<unsigned>(t.large && a <= t.lower) << 0;
  m |= static_cast<unsigned>(t.lower < a && a < t.upper) << 1;
  m |= static_cast<unsigned>(t.large && a >= t.upper) << 2;
  m |= static_cast<unsigned>(t.small && a > t.upper) << 3;
  m |= static_cast<unsigned>(t.small && a <= t.upper) << 4;
  return m;
}

}  // namespace

unsigned region_membership(int n, double sig, const ModelParams& params) {
  if (n == 0 || n > params.modes || n < -params.modes) return 0;
  return mask_of(std::abs(sig), thresholds(n, params));
}

RegionLabel classify_sigma(int n, double sig, const ModelParams& params) {
  const unsigned m = region_membership(n, sig, params);
  if (m == 0) return RegionLabel::Excluded;
  return static_cast<RegionLabel>(std::countr_zero(m));
}

RegionLabel classify_region(int n, double tau, const ModelParams& params) {
  return classify_sigma(n, sigma(params.frequency(n), tau, params), params);
}

PartitionReport verify_partition(const ModelParams& params, double dtau, double sigma_bound) {
  require(dtau > 0.0 && sigma_bound >= 0.0, "partition scan needs dtau > 0 and sigma_bound >= 0");
  PartitionReport rep;
  rep.j = params.j;
  rep.lambda = params.lambda;
  rep.dtau = dtau;
  rep.sigma_bound = sigma_bound;
  rep.kmax_index = params.modes;
  const auto mmax = static_cast<std::int64_t>(std::floor(sigma_bound / dtau));
  for (int n = -params.modes; n <= params.modes; ++n) {
    if (n == 0) continue;
    const Thresholds t = thresholds(n, params);
    const bool unit = std::abs(static_cast<double>(n)) == params.lambda;
    std::uint64_t counts[32] = {};
    for (std::int64_t m = -mmax; m <= mmax; ++m) {
      const double a = std::abs(static_cast<double>(m) * dtau);
      ++counts[mask_of(a, t)];
    }
    for (unsigned mask = 0; mask < 32; ++mask) {
      const std::uint64_t c = counts[mask];
      if (c == 0) continue;
      rep.points += c;
      const int bits = std::popcount(mask);
      if (bits == 0)
        rep.uncovered += c;
      else if (bits > 1)
        (unit ? rep.tie_points : rep.overlaps) += c;
      if (bits > 0) rep.per_region[std::countr_zero(mask)] += c;
    }
  }
  rep.pass = rep.uncovered == 0 && rep.overlaps == 0 && rep.points > 0;
  return rep;
}

// ---------------------------------------------------------------------------
// Norms

namespace {

double kweight(const ModelParams& p, int n, double s) {
  return std::pow(bracket(p.frequency(n)), 2.0 * s);
}

double xsb_sq(const SpaceTimeSpectrum& u, double s, double b) {
  const auto& p = u.params();
  const double dt = u.dtau();
  double total = 0.0;
  for (int n = -p.modes; n <= p.modes; ++n) {
    const auto& r = u.row(n);
    if (r.empty()) continue;
    double row = 0.0;
    for (const auto& blk : r)
      for (std::size_t i = 0; i < blk.amps.size(); ++i) {
        const double e = std::norm(blk.amps[i]);
        if (e == 0.0) continue;
        const double sg = u.sigma(blk.start + static_cast<i128>(i));
        row += std::pow(bracket(sg), 2.0 * b) * e;
      }
    total += kweight(p, n, s) * row * dt;
  }
  return total / p.lambda;
}

}  // namespace

double xsb_norm(const SpaceTimeSpectrum& u, double s, double b) {
  require(std::isfinite(b), "X_{s,b} needs a finite b");
  return std::sqrt(xsb_sq(u, s, b));
}

double ys_norm(const SpaceTimeSpectrum& u, double s) {
  const auto& p = u.params();
  double total = 0.0;
  for (int n = -p.modes; n <= p.modes; ++n) {
    const auto& r = u.row(n);
    if (r.empty()) continue;
    double l1 = 0.0;
    for (const auto& blk : r)
      for (cplx a : blk.amps) l1 += std::abs(a);
    l1 *= u.dtau();
    total += kweight(p, n, s) * l1 * l1;
  }
  return std::sqrt(total / p.lambda);
}

double zs_norm(const SpaceTimeSpectrum& u, double s) {
  const auto& p = u.params();
  const int j = p.j;
  require(j >= 2, "the Z^s norm is defined for j >= 2 only (got j = " + std::to_string(j) + ")");
  const double jj = j;
  // (k exponent, sigma exponent) of the three region-projected X_{s,b} terms.
  const double ks[3] = {s, (1.0 - 2.0 * jj) * (s - 1.0), -(s - 1.0) / jj - 1.0};
  const double bs[3] = {(2.0 * jj - 1.0) / (2.0 * jj), s, (s - 1.0) / jj + 1.0};
  // D1..D5 -> term index
  constexpr int term_of[5] = {0, 1, 2, 2, 0};
  double sq[3] = {0.0, 0.0, 0.0};
  for (int n = -p.modes; n <= p.modes; ++n) {
    const auto& r = u.row(n);
    if (r.empty()) continue;
    double row[3] = {0.0, 0.0, 0.0};
    for (const auto& blk : r)
      for (std::size_t i = 0; i < blk.amps.size(); ++i) {
        const double e = std::norm(blk.amps[i]);
        if (e == 0.0) continue;
        const double sg = u.sigma(blk.start + static_cast<i128>(i));
        const RegionLabel lab = classify_sigma(n, sg, p);
        if (lab == RegionLabel::Excluded) continue;
        const int t = term_of[static_cast<int>(lab)];
        row[t] += std::pow(bracket(sg), 2.0 * bs[t]) * e;
      }
    for (int t = 0; t < 3; ++t)
      if (row[t] != 0.0) sq[t] += kweight(p, n, ks[t]) * row[t] * u.dtau();
  }
  double total = ys_norm(u, s);
  for (double v : sq) total += std::sqrt(v / p.lambda);
  return total;
}

double ws_norm(const SpaceTimeSpectrum& u, double s) { return xsb_norm(u, s, 0.5) + ys_norm(u, s); }

double norm(const SpaceTimeSpectrum& u, const NormSpec& spec) {
  switch (spec.kind) {
    case NormKind::Hs: return xsb_norm(u, spec.s, 0.0);
    case NormKind::Xsb: return xsb_norm(u, spec.s, spec.b);
    case NormKind::Ys: return ys_norm(u, spec.s);
    case NormKind::Zs: return zs_norm(u, spec.s);
    case NormKind::Ws: return ws_norm(u, spec.s);
  }
  throw ValidationError("unknown norm kind");
}

SpaceTimeSpectrum project(const SpaceTimeSpectrum& u, std::initializer_list<RegionLabel> regions) {
  unsigned bits = 0;
  for (auto r : regions) bits |= 1u << static_cast<unsigned>(r);
  SpaceTimeSpectrum out(u.params(), u.dtau());
  const auto& p = u.params();
  for (int n = -p.modes; n <= p.modes; ++n) {
    std::vector<Block> kept;
    for (const auto& blk : u.row(n)) {
      Block cur;
      for (std::size_t i = 0; i < blk.amps.size(); ++i) {
        const i128 m = blk.start + static_cast<i128>(i);
        const bool in = (bits & (1u << static_cast<unsigned>(classify_sigma(n, u.sigma(m), p)))) != 0;
        if (in) {
          if (cur.amps.empty()) cur.start = m;
          cur.amps.push_back(blk.amps[i]);
        } else if (!cur.amps.empty()) {
          kept.push_back(std::move(cur));
          cur = Block{};
        }
      }
      if (!cur.amps.empty()) kept.push_back(std::move(cur));
    }
    if (!kept.empty()) out.set_row(n, std::move(kept));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Products

namespace {

// Integer q with dtau = 1/q, or 0.
std::int64_t inverse_step(double dtau) {
  const double q = 1.0 / dtau;
  const double r = std::round(q);
  if (r >= 1.0 && r < 9.0e15 && std::abs(q - r) <= 1e-12 * r) return static_cast<std::int64_t>(r);
  return 0;
}

i128 exact_shift(std::int64_t n1, std::int64_t n2, int j, std::int64_t q) {
  const int e = 2 * j + 1;
  auto p1 = checked_pow(n1, e), p2 = checked_pow(n2, e), p = checked_pow(n1 + n2, e);
  if (p1 && p2 && p) {
    // |P| < 2^126 leaves headroom for the sum only when the factors are small;
    // fall through to the wide path if any piece is large.
    const i128 lim = static_cast<i128>(1) << 100;
    if (abs128(*p1) < lim && abs128(*p2) < lim && abs128(*p) < lim && q < (std::int64_t{1} << 24)) {
      i128 d = *p1 + *p2 - *p;
      if (j % 2 == 0) d = -d;
      return d * q;
    }
  }
  BigInt d = big_pow(n1, e) + big_pow(n2, e) - big_pow(n1 + n2, e);
  if (j % 2 == 0) d = -d;
  d *= q;
  const BigInt lim = BigInt(1) << 126;
  if (abs(d) >= lim) throw NumericalError("space-time cell shift exceeds 126 bits");
  return static_cast<i128>(d);
}

i128 rounded_shift(double k1, double k2, int j, double dtau) {
  auto pw = [j](long double k) {
    long double r = k;
    for (int i = 0; i < j; ++i) r *= k * k;
    return j % 2 == 1 ? r : -r;
  };
  const long double d = (pw(k1) + pw(k2) - pw(k1 + k2)) / static_cast<long double>(dtau);
  if (!std::isfinite(d) || std::abs(d) > 1e37L) throw NumericalError("space-time cell shift overflow");
  return static_cast<i128>(std::round(d));
}

void merge_into(std::vector<Block>& segs) {
  std::sort(segs.begin(), segs.end(), [](const Block& a, const Block& b) { return a.start < b.start; });
  std::vector<Block> out;
  for (auto& s : segs) {
    if (!out.empty() && s.start <= out.back().end()) {
      Block& cur = out.back();
      const i128 need = s.end() - cur.start;
      if (need > static_cast<i128>(cur.amps.size())) cur.amps.resize(static_cast<std::size_t>(need));
      const auto off = static_cast<std::size_t>(s.start - cur.start);
      for (std::size_t i = 0; i < s.amps.size(); ++i) cur.amps[off + i] += s.amps[i];
    } else {
      out.push_back(std::move(s));
    }
  }
  segs = std::move(out);
}

}  // namespace

SpaceTimeProduct spacetime_product(const SpaceTimeSpectrum& u, const SpaceTimeSpectrum& v,
                                   const PairSymbol& m, int out_modes) {
  const auto& pu = u.params();
  const auto& pv = v.params();
  require(pu.j == pv.j && pu.lambda == pv.lambda, "space-time product: inputs differ in j or lambda");
  require(u.dtau() == v.dtau(), "space-time product: inputs differ in tau step");
  if (out_modes <= 0) out_modes = pu.modes + pv.modes;
  ModelParams po = pu;
  po.modes = out_modes;

  const double dtau = u.dtau();
  const std::int64_t q = inverse_step(dtau);
  const bool exact = pu.lambda == 1.0 && q > 0;
  const double weight = dtau / (2.0 * std::numbers::pi * pu.lambda);

  std::map<int, std::vector<Block>> segs;
  for (int n1 = -pu.modes; n1 <= pu.modes; ++n1) {
    const auto& r1 = u.row(n1);
    if (r1.empty()) continue;
    for (int n2 = -pv.modes; n2 <= pv.modes; ++n2) {
      const auto& r2 = v.row(n2);
      if (r2.empty()) continue;
      const int n = n1 + n2;
      if (n == 0 || std::abs(n) > out_modes) continue;
      const double k1 = pu.frequency(n1), k2 = pu.frequency(n2);
      const cplx sym = m(k1, k2) * weight;
      if (sym == cplx{}) continue;
      const i128 shift = exact ? exact_shift(n1, n2, pu.j, q) : rounded_shift(k1, k2, pu.j, dtau);
      auto& dst = segs[n];
      for (const auto& b1 : r1)
        for (const auto& b2 : r2) {
          Block out{b1.start + b2.start + shift, std::vector<cplx>(b1.amps.size() + b2.amps.size() - 1)};
          for (std::size_t i = 0; i < b1.amps.size(); ++i) {
            if (b1.amps[i] == cplx{}) continue;
            const cplx a = sym * b1.amps[i];
            for (std::size_t l = 0; l < b2.amps.size(); ++l) out.amps[i + l] += a * b2.amps[l];
          }
          dst.push_back(std::move(out));
        }
    }
  }

  SpaceTimeProduct res{SpaceTimeSpectrum(po, dtau), exact};
  for (auto& [n, list] : segs) {
    merge_into(list);
    res.spectrum.set_row(n, std::move(list));
  }
  return res;
}

SpaceTimeSpectrum inverse_modulation(SpaceTimeSpectrum u) {
  const auto& p = u.params();
  for (int n = -p.modes; n <= p.modes; ++n) {
    auto blocks = u.row(n);
    if (blocks.empty()) continue;
    for (auto& b : blocks)
      for (std::size_t i = 0; i < b.amps.size(); ++i)
        b.amps[i] /= bracket(u.sigma(b.start + static_cast<i128>(i)));
    u.set_row(n, std::move(blocks));
  }
  return u;
}

}  // namespace dcl
