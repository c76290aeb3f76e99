#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace marcink::fields {

using cplx = std::complex<double>;

enum class Side { Space, Frequency };

// Periodic grid on [-L, L)^d with a power-of-two point count per axis.
// The frequency lattice is { pi k / L : -n/2 <= k_i < n/2 }.
struct Grid {
  int d = 2;
  int n = 64;
  double L = 3.14159265358979323846;

  std::size_t size() const;
  double spacing() const { return 2.0 * L / n; }
  double cell_volume() const;
  int freq_index(int j) const { return j < n / 2 ? j : j - n; }
  double freq(int j) const;
  double coord(int j) const { return -L + j * spacing(); }
  double max_abs_freq() const;

  bool operator==(const Grid&) const = default;
};

Grid make_grid(int d, int n, double L);

struct Field {
  Grid grid;
  Side side = Side::Space;
  std::vector<cplx> samples;
};

Field make_field(const Grid& g, Side side = Side::Space);

// Decompose a row-major flat index into per-axis indices.
std::array<int, 3> unflatten(const Grid& g, std::size_t flat);

// Call fn(flat, xi) for every frequency-lattice point, xi of length d.
void for_each_freq(const Grid& g,
                   const std::function<void(std::size_t,
                                            std::span<const double>)>& fn);

// Symbol: bounded evaluation rule on the frequency lattice.
using SymbolFn = std::function<cplx(std::span<const double>)>;

// Unitary transforms with the spatial origin at the box center; a discrete
// delta at x = 0 maps to a constant frequency field. inverse(forward(f)) = f
// to round-off and ||f_hat||_2 = ||f||_2 exactly in the quadrature norm.
Field transform_forward(const Field& f);
Field transform_inverse(const Field& f);

// Riemann-sum norm (sum |f|^p h^d)^{1/p}; p = infinity gives max modulus.
// Valid for every p > 0 (quasinorms included). Serial summation order.
double lp_norm(const Field& f, double p);

// forward -> pointwise multiply -> inverse. Throws std::domain_error if the
// symbol is non-finite anywhere on the lattice.
Field apply_symbol(const Field& f, const SymbolFn& sigma);

// Pretabulated symbol on a fixed grid, for hot loops.
struct CachedSymbol {
  Grid grid;
  std::vector<cplx> values;

  double max_abs() const;
  std::size_t argmax_abs() const;
  CachedSymbol adjoint() const;  // complex conjugate
};

CachedSymbol precompute_symbol(const Grid& g, const SymbolFn& sigma);
Field apply_symbol(const Field& f, const CachedSymbol& sigma);

// Frequency-side in-place multiply (f must be on the frequency side).
void multiply_symbol(Field& fhat, const SymbolFn& sigma);

// Deterministic complex gaussian field (space side), Box-Muller over a
// seeded 64-bit generator so results are platform independent.
Field random_gaussian(const Grid& g, std::uint64_t seed);

// Small helpers used across modules.
Field operator-(const Field& a, const Field& b);
Field operator+(const Field& a, const Field& b);
Field scaled(const Field& a, cplx c);

}  // namespace marcink::fields
