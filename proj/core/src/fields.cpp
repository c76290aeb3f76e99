#include "marcink/fields.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <random>
#include <stdexcept>

namespace marcink::fields {

namespace {

bool is_pow2(int n) { return n > 0 && (n & (n - 1)) == 0; }

void check_grid(const Grid& g) {
  if (g.d < 1 || g.d > 3)
    throw std::invalid_argument("Grid: d must be 1, 2 or 3");
  if (!is_pow2(g.n) || g.n < 2)
    throw std::invalid_argument("Grid: n must be a power of two >= 2");
  if (!(g.L > 0.0)) throw std::invalid_argument("Grid: L must be positive");
}

}  // namespace

std::size_t Grid::size() const {
  std::size_t s = 1;
  for (int i = 0; i < d; ++i) s *= static_cast<std::size_t>(n);
  return s;
}

double Grid::cell_volume() const {
  double v = 1.0;
  for (int i = 0; i < d; ++i) v *= spacing();
  return v;
}

double Grid::freq(int j) const {
  return 3.14159265358979323846 * freq_index(j) / L;
}

double Grid::max_abs_freq() const {
  return 3.14159265358979323846 * (n / 2) / L;
}

Grid make_grid(int d, int n, double L) {
  Grid g{d, n, L};
  check_grid(g);
  return g;
}

Field make_field(const Grid& g, Side side) {
  check_grid(g);
  return Field{g, side, std::vector<cplx>(g.size())};
}

std::array<int, 3> unflatten(const Grid& g, std::size_t flat) {
  std::array<int, 3> idx{0, 0, 0};
  for (int ax = g.d - 1; ax >= 0; --ax) {
    idx[ax] = static_cast<int>(flat % g.n);
    flat /= g.n;
  }
  return idx;
}

void for_each_freq(const Grid& g,
                   const std::function<void(std::size_t,
                                            std::span<const double>)>& fn) {
  std::array<double, 3> xi{};
  const std::size_t total = g.size();
  std::array<int, 3> idx{0, 0, 0};
  for (std::size_t flat = 0; flat < total; ++flat) {
    std::size_t rem = flat;
    for (int ax = g.d - 1; ax >= 0; --ax) {
      idx[ax] = static_cast<int>(rem % g.n);
      rem /= g.n;
    }
    for (int ax = 0; ax < g.d; ++ax) xi[ax] = g.freq(idx[ax]);
    fn(flat, std::span<const double>(xi.data(), g.d));
  }
}

namespace {

// FFTW plan cache. Plans are created once per (d, n, direction) with
// FFTW_ESTIMATE (deterministic) and FFTW_UNALIGNED so they can be executed
// on any caller-provided buffers via the new-array interface.
struct PlanKey {
  int d, n, sign;
  bool operator<(const PlanKey& o) const {
    return std::tie(d, n, sign) < std::tie(o.d, o.n, o.sign);
  }
};

fftw_plan acquire_plan(const Grid& g, int sign) {
  static std::mutex mu;
  static std::map<PlanKey, fftw_plan> cache;
  std::lock_guard<std::mutex> lock(mu);
  PlanKey key{g.d, g.n, sign};
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;

  std::vector<cplx> in(g.size()), out(g.size());
  int dims[3] = {g.n, g.n, g.n};
  fftw_plan plan = fftw_plan_dft(
      g.d, dims, reinterpret_cast<fftw_complex*>(in.data()),
      reinterpret_cast<fftw_complex*>(out.data()), sign,
      FFTW_ESTIMATE | FFTW_UNALIGNED);
  if (!plan) throw std::runtime_error("FFTW plan creation failed");
  cache.emplace(key, plan);
  return plan;
}

// Parity of the sum of index components; the (-1)^{sum k_i} phase moves the
// spatial origin to the box center (index n/2 per axis).
bool odd_parity(const Grid& g, std::size_t flat) {
  unsigned parity = 0;
  for (int ax = 0; ax < g.d; ++ax) {
    parity ^= static_cast<unsigned>(flat % g.n) & 1u;
    flat /= g.n;
  }
  return parity & 1u;
}

void run_plan(const Grid& g, int sign, const std::vector<cplx>& in,
              std::vector<cplx>& out) {
  fftw_plan plan = acquire_plan(g, sign);
  fftw_execute_dft(plan,
                   reinterpret_cast<fftw_complex*>(
                       const_cast<cplx*>(in.data())),
                   reinterpret_cast<fftw_complex*>(out.data()));
}

}  // namespace

Field transform_forward(const Field& f) {
  if (f.side != Side::Space)
    throw std::invalid_argument("transform_forward: field not on space side");
  if (f.samples.size() != f.grid.size())
    throw std::invalid_argument("transform_forward: size mismatch");
  Field out = make_field(f.grid, Side::Frequency);
  run_plan(f.grid, FFTW_FORWARD, f.samples, out.samples);
  const double scale = 1.0 / std::sqrt(static_cast<double>(f.grid.size()));
  for (std::size_t i = 0; i < out.samples.size(); ++i) {
    out.samples[i] *= odd_parity(f.grid, i) ? -scale : scale;
  }
  return out;
}

Field transform_inverse(const Field& f) {
  if (f.side != Side::Frequency)
    throw std::invalid_argument(
        "transform_inverse: field not on frequency side");
  if (f.samples.size() != f.grid.size())
    throw std::invalid_argument("transform_inverse: size mismatch");
  std::vector<cplx> tmp(f.samples.size());
  const double scale = 1.0 / std::sqrt(static_cast<double>(f.grid.size()));
  for (std::size_t i = 0; i < tmp.size(); ++i) {
    tmp[i] = f.samples[i] * (odd_parity(f.grid, i) ? -scale : scale);
  }
  Field out = make_field(f.grid, Side::Space);
  run_plan(f.grid, FFTW_BACKWARD, tmp, out.samples);
  return out;
}

double lp_norm(const Field& f, double p) {
  if (!(p > 0.0)) throw std::invalid_argument("lp_norm: p must be positive");
  if (std::isinf(p)) {
    double m = 0.0;
    for (const cplx& z : f.samples) m = std::max(m, std::abs(z));
    return m;
  }
  const double vol = f.grid.cell_volume();
  double acc = 0.0;
  if (p == 2.0) {
    for (const cplx& z : f.samples) acc += std::norm(z);
  } else if (p == 1.0) {
    for (const cplx& z : f.samples) acc += std::abs(z);
  } else {
    for (const cplx& z : f.samples) acc += std::pow(std::abs(z), p);
  }
  return std::pow(acc * vol, 1.0 / p);
}

CachedSymbol precompute_symbol(const Grid& g, const SymbolFn& sigma) {
  CachedSymbol out;
  out.grid = g;
  out.values.resize(g.size());
  for_each_freq(g, [&](std::size_t flat, std::span<const double> xi) {
    cplx v = sigma(xi);
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      throw std::domain_error("symbol evaluates non-finite on the lattice");
    out.values[flat] = v;
  });
  return out;
}

double CachedSymbol::max_abs() const {
  double m = 0.0;
  for (const cplx& z : values) m = std::max(m, std::abs(z));
  return m;
}

std::size_t CachedSymbol::argmax_abs() const {
  std::size_t arg = 0;
  double m = -1.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double a = std::abs(values[i]);
    if (a > m) {
      m = a;
      arg = i;
    }
  }
  return arg;
}

CachedSymbol CachedSymbol::adjoint() const {
  CachedSymbol out = *this;
  for (cplx& z : out.values) z = std::conj(z);
  return out;
}

Field apply_symbol(const Field& f, const CachedSymbol& sigma) {
  if (!(f.grid == sigma.grid))
    throw std::invalid_argument("apply_symbol: grid mismatch");
  Field fhat = transform_forward(f);
  for (std::size_t i = 0; i < fhat.samples.size(); ++i)
    fhat.samples[i] *= sigma.values[i];
  return transform_inverse(fhat);
}

Field apply_symbol(const Field& f, const SymbolFn& sigma) {
  return apply_symbol(f, precompute_symbol(f.grid, sigma));
}

void multiply_symbol(Field& fhat, const SymbolFn& sigma) {
  if (fhat.side != Side::Frequency)
    throw std::invalid_argument("multiply_symbol: field not on frequency side");
  for_each_freq(fhat.grid, [&](std::size_t flat, std::span<const double> xi) {
    cplx v = sigma(xi);
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      throw std::domain_error("symbol evaluates non-finite on the lattice");
    fhat.samples[flat] *= v;
  });
}

namespace {

// splitmix64; used to decorrelate seeds.
std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

}  // namespace

Field random_gaussian(const Grid& g, std::uint64_t seed) {
  Field f = make_field(g, Side::Space);
  std::mt19937_64 rng(mix64(seed));
  auto unit = [&rng]() {
    // top 53 bits -> (0, 1]
    return (static_cast<double>(rng() >> 11) + 1.0) * 0x1.0p-53;
  };
  for (std::size_t i = 0; i < f.samples.size(); ++i) {
    const double u1 = unit();
    const double u2 = unit();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double th = 2.0 * 3.14159265358979323846 * u2;
    f.samples[i] = cplx(r * std::cos(th), r * std::sin(th));
  }
  return f;
}

Field operator-(const Field& a, const Field& b) {
  if (!(a.grid == b.grid) || a.side != b.side)
    throw std::invalid_argument("field subtraction: mismatched operands");
  Field out = a;
  for (std::size_t i = 0; i < out.samples.size(); ++i)
    out.samples[i] -= b.samples[i];
  return out;
}

Field operator+(const Field& a, const Field& b) {
  if (!(a.grid == b.grid) || a.side != b.side)
    throw std::invalid_argument("field addition: mismatched operands");
  Field out = a;
  for (std::size_t i = 0; i < out.samples.size(); ++i)
    out.samples[i] += b.samples[i];
  return out;
}

Field scaled(const Field& a, cplx c) {
  Field out = a;
  for (cplx& z : out.samples) z *= c;
  return out;
}

}  // namespace marcink::fields
