#pragma once

// Periodic spectral grids on [0, L)^3 with the symmetric Fourier convention
//
//   u_hat(xi) = (2pi)^{-3/2} \int e^{-i x.xi} u(x) dx,
//
// discretized as u_hat(k dxi) = (2pi)^{-3/2} h^3 FFT(u), dxi = 2pi/L,
// h = L/n. Products therefore carry the convolution weight (2pi)^{-3/2}:
// widehat{uv} = (2pi)^{-3/2} (u_hat * v_hat).

#include <array>
#include <complex>
#include <cstddef>
#include <string>
#include <vector>

namespace pmflow {

inline constexpr double pi = 3.141592653589793238462643383279502884;

using cplx = std::complex<double>;

struct GridSpec {
  int n = 32;                        // modes per axis (even)
  double box_length = 16.0;          // L
  double dealias_fraction = 2.0 / 3.0;

  void validate() const;  // throws std::invalid_argument

  double dxi() const { return 2.0 * pi / box_length; }
  double spacing() const { return box_length / n; }
  std::size_t size() const {
    return static_cast<std::size_t>(n) * n * n;
  }

  // Largest |k|_inf kept by the dealias mask (mask is a cube in k-space).
  int max_retained_k() const {
    return static_cast<int>(dealias_fraction * n / 2 + 1e-9);
  }
  // Euclidean radius of the largest ball inscribed in the retained cube;
  // norm bands must stay inside this.
  double max_retained_xi() const { return max_retained_k() * dxi(); }

  // Storage is FFT-natural row-major: axis index i in [0,n) represents the
  // integer frequency k = i for i <= n/2, k = i - n otherwise.
  static int index_to_k(int i, int n) { return i <= n / 2 ? i : i - n; }
  int k_to_index(int k) const { return k >= 0 ? k : k + n; }

  std::size_t index(int i1, int i2, int i3) const {
    return (static_cast<std::size_t>(i1) * n + i2) * n + i3;
  }

  std::array<int, 3> mode(std::size_t idx) const {
    const int i3 = static_cast<int>(idx % n);
    const int i2 = static_cast<int>((idx / n) % n);
    const int i1 = static_cast<int>(idx / (static_cast<std::size_t>(n) * n));
    return {index_to_k(i1, n), index_to_k(i2, n), index_to_k(i3, n)};
  }

  std::array<double, 3> xi(std::size_t idx) const {
    const auto k = mode(idx);
    const double d = dxi();
    return {k[0] * d, k[1] * d, k[2] * d};
  }

  double xi_norm_sq(std::size_t idx) const {
    const auto k = mode(idx);
    return (static_cast<double>(k[0]) * k[0] + static_cast<double>(k[1]) * k[1] +
            static_cast<double>(k[2]) * k[2]) *
           dxi() * dxi();
  }

  bool keep_mode(const std::array<int, 3>& k) const {
    const int kmax = max_retained_k();
    return std::abs(k[0]) <= kmax && std::abs(k[1]) <= kmax &&
           std::abs(k[2]) <= kmax;
  }

  // Collocation point x_j = j h (component-wise).
  std::array<double, 3> point(std::size_t idx) const {
    const int i3 = static_cast<int>(idx % n);
    const int i2 = static_cast<int>((idx / n) % n);
    const int i1 = static_cast<int>(idx / (static_cast<std::size_t>(n) * n));
    const double h = spacing();
    return {i1 * h, i2 * h, i3 * h};
  }

  // Minimum-image displacement of the point at idx from `center`.
  std::array<double, 3> displacement(std::size_t idx,
                                     const std::array<double, 3>& center) const;

  bool operator==(const GridSpec& o) const {
    return n == o.n && box_length == o.box_length &&
           dealias_fraction == o.dealias_fraction;
  }
};

struct FourierVectorField {
  GridSpec grid;
  std::array<std::vector<cplx>, 3> c;
  bool divergence_free = false;

  static FourierVectorField zeros(const GridSpec& g);
  cplx& at(int comp, std::size_t idx) { return c[comp][idx]; }
  const cplx& at(int comp, std::size_t idx) const { return c[comp][idx]; }
};

struct PhysicalVectorField {
  GridSpec grid;
  std::array<std::vector<double>, 3> c;

  static PhysicalVectorField zeros(const GridSpec& g);
  double magnitude(std::size_t idx) const {
    const double a = c[0][idx], b = c[1][idx], d = c[2][idx];
    return std::sqrt(a * a + b * b + d * d);
  }
};

// 3x3 tensor of spectral components; entry (l,m) lives at l*3+m.
struct FourierTensorField {
  GridSpec grid;
  std::array<std::vector<cplx>, 9> c;

  static FourierTensorField zeros(const GridSpec& g);
  std::vector<cplx>& comp(int l, int m) { return c[l * 3 + m]; }
  const std::vector<cplx>& comp(int l, int m) const { return c[l * 3 + m]; }
};

// Forward transform of a real field sampled on the collocation lattice.
FourierVectorField to_fourier(const PhysicalVectorField& f);

// Inverse transform; takes the real part (callers own the guarantee that the
// spectral data is Hermitian up to roundoff).
PhysicalVectorField to_physical(const FourierVectorField& f);

// Zero every mode outside the cube |k|_inf <= dealias_fraction * n/2.
void dealias(FourierVectorField& f);
void dealias(FourierTensorField& f);

// Lattice convolution with the (2pi)^{-3/2} product weight:
// result(l,m) = widehat{u_l v_m}. Computed by pointwise physical-space
// multiplication; the output is dealiased with the grid mask.
FourierTensorField convolve_tensor(const FourierVectorField& u,
                                   const FourierVectorField& v);

// Max over modes of |u_hat(-k) - conj(u_hat(k))| (Hermitian-symmetry defect;
// zero for transforms of real fields).
double hermitian_defect(const FourierVectorField& f);

// PMNS container: little-endian binary snapshot of a spectral vector field
// ("PMNS" magic, version, grid header, then modes in row-major order with
// k running from -n/2 upward on each axis, components interleaved re,im).
void save_pmns(const std::string& path, const FourierVectorField& f);
FourierVectorField load_pmns(const std::string& path);

}  // namespace pmflow
