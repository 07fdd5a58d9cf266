#include "pmflow/spectral_grid.hpp"

#include <fftw3.h>

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <mutex>
#include <stdexcept>

#include "pmflow/detail/fft.hpp"
#include "pmflow/detail/threading.hpp"

namespace pmflow {

void GridSpec::validate() const {
  if (n < 4 || n % 2 != 0)
    throw std::invalid_argument("GridSpec: n must be even and >= 4");
  if (!(box_length > 0.0))
    throw std::invalid_argument("GridSpec: box_length must be positive");
  if (!(dealias_fraction > 0.0) || dealias_fraction > 1.0)
    throw std::invalid_argument("GridSpec: dealias_fraction must lie in (0,1]");
}

std::array<double, 3> GridSpec::displacement(
    std::size_t idx, const std::array<double, 3>& center) const {
  auto p = point(idx);
  const double L = box_length;
  for (int a = 0; a < 3; ++a) {
    double d = p[a] - center[a];
    d -= L * std::floor(d / L + 0.5);  // wrap into [-L/2, L/2)
    p[a] = d;
  }
  return p;
}

FourierVectorField FourierVectorField::zeros(const GridSpec& g) {
  g.validate();
  FourierVectorField f;
  f.grid = g;
  for (auto& v : f.c) v.assign(g.size(), cplx{0.0, 0.0});
  return f;
}

PhysicalVectorField PhysicalVectorField::zeros(const GridSpec& g) {
  g.validate();
  PhysicalVectorField f;
  f.grid = g;
  for (auto& v : f.c) v.assign(g.size(), 0.0);
  return f;
}

FourierTensorField FourierTensorField::zeros(const GridSpec& g) {
  g.validate();
  FourierTensorField f;
  f.grid = g;
  for (auto& v : f.c) v.assign(g.size(), cplx{0.0, 0.0});
  return f;
}

namespace {

// One cached FFTW workspace per grid size. Plans are created with
// FFTW_ESTIMATE so results do not depend on runtime plan tuning, and all
// executions run on the buffers the plan was created with (no alignment
// surprises). Guarded by a mutex; transforms themselves are serialized,
// which is fine since the per-mode arithmetic around them is the hot part.
struct FftWorkspace {
  int n = 0;
  fftw_complex* buf = nullptr;
  fftw_plan fwd = nullptr;
  fftw_plan bwd = nullptr;

  void ensure(int want) {
    if (n == want) return;
    release();
    n = want;
    const std::size_t total = static_cast<std::size_t>(n) * n * n;
    buf = fftw_alloc_complex(total);
    if (!buf) throw std::bad_alloc();
    fwd = fftw_plan_dft_3d(n, n, n, buf, buf, FFTW_FORWARD, FFTW_ESTIMATE);
    bwd = fftw_plan_dft_3d(n, n, n, buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE);
    if (!fwd || !bwd) throw std::runtime_error("fftw plan creation failed");
  }

  void release() {
    if (fwd) fftw_destroy_plan(fwd);
    if (bwd) fftw_destroy_plan(bwd);
    if (buf) fftw_free(buf);
    fwd = bwd = nullptr;
    buf = nullptr;
    n = 0;
  }

  ~FftWorkspace() { release(); }
};

std::mutex g_fft_mutex;
FftWorkspace g_fft;

}  // namespace

namespace detail {

void fft_scaled(const GridSpec& g, cplx* data, bool forward, double scale) {
  std::lock_guard<std::mutex> lock(g_fft_mutex);
  g_fft.ensure(g.n);
  const std::size_t total = g.size();
  std::memcpy(g_fft.buf, data, total * sizeof(cplx));
  fftw_execute(forward ? g_fft.fwd : g_fft.bwd);
  const cplx* out = reinterpret_cast<const cplx*>(g_fft.buf);
  for (std::size_t i = 0; i < total; ++i) data[i] = out[i] * scale;
}

double forward_scale(const GridSpec& g) {
  const double h = g.spacing();
  return std::pow(2.0 * pi, -1.5) * h * h * h;
}

double backward_scale(const GridSpec& g) {
  const double d = g.dxi();
  return std::pow(2.0 * pi, -1.5) * d * d * d;
}

}  // namespace detail

namespace {

using detail::backward_scale;
using detail::forward_scale;

void run_fft(const GridSpec& g, cplx* data, bool forward, double scale) {
  detail::fft_scaled(g, data, forward, scale);
}

}  // namespace

FourierVectorField to_fourier(const PhysicalVectorField& f) {
  f.grid.validate();
  FourierVectorField out = FourierVectorField::zeros(f.grid);
  const std::size_t total = f.grid.size();
  std::vector<cplx> work(total);
  for (int comp = 0; comp < 3; ++comp) {
    for (std::size_t i = 0; i < total; ++i) work[i] = cplx{f.c[comp][i], 0.0};
    run_fft(f.grid, work.data(), true, forward_scale(f.grid));
    out.c[comp] = work;
  }
  return out;
}

PhysicalVectorField to_physical(const FourierVectorField& f) {
  f.grid.validate();
  PhysicalVectorField out = PhysicalVectorField::zeros(f.grid);
  const std::size_t total = f.grid.size();
  std::vector<cplx> work(total);
  for (int comp = 0; comp < 3; ++comp) {
    work = f.c[comp];
    run_fft(f.grid, work.data(), false, backward_scale(f.grid));
    for (std::size_t i = 0; i < total; ++i) out.c[comp][i] = work[i].real();
  }
  return out;
}

namespace {

template <class Field>
void apply_mask(Field& f) {
  const GridSpec& g = f.grid;
  const int kmax = g.max_retained_k();
  const int n = g.n;
  detail::parallel_for(0, static_cast<std::size_t>(n), [&](std::size_t i1) {
    const int k1 = GridSpec::index_to_k(static_cast<int>(i1), n);
    for (int i2 = 0; i2 < n; ++i2) {
      const int k2 = GridSpec::index_to_k(i2, n);
      for (int i3 = 0; i3 < n; ++i3) {
        const int k3 = GridSpec::index_to_k(i3, n);
        if (std::abs(k1) <= kmax && std::abs(k2) <= kmax &&
            std::abs(k3) <= kmax)
          continue;
        const std::size_t idx = g.index(static_cast<int>(i1), i2, i3);
        for (auto& v : f.c) v[idx] = cplx{0.0, 0.0};
      }
    }
  });
}

}  // namespace

void dealias(FourierVectorField& f) { apply_mask(f); }
void dealias(FourierTensorField& f) { apply_mask(f); }

FourierTensorField convolve_tensor(const FourierVectorField& u,
                                   const FourierVectorField& v) {
  if (!(u.grid == v.grid))
    throw std::invalid_argument("convolve_tensor: grid mismatch");
  const GridSpec& g = u.grid;
  const std::size_t total = g.size();
  const bool same = &u == &v;

  // Physical-space samples of each component, kept complex so the identity
  // widehat{uv} = (2pi)^{-3/2} u_hat * v_hat holds for arbitrary (possibly
  // non-Hermitian) spectral inputs.
  std::array<std::vector<cplx>, 3> up, vp;
  for (int comp = 0; comp < 3; ++comp) {
    up[comp] = u.c[comp];
    run_fft(g, up[comp].data(), false, backward_scale(g));
  }
  if (same) {
    vp = up;
  } else {
    for (int comp = 0; comp < 3; ++comp) {
      vp[comp] = v.c[comp];
      run_fft(g, vp[comp].data(), false, backward_scale(g));
    }
  }

  FourierTensorField out = FourierTensorField::zeros(g);
  std::vector<cplx> prod(total);
  for (int l = 0; l < 3; ++l) {
    for (int m = 0; m < 3; ++m) {
      for (std::size_t i = 0; i < total; ++i) prod[i] = up[l][i] * vp[m][i];
      run_fft(g, prod.data(), true, forward_scale(g));
      out.comp(l, m) = prod;
    }
  }
  dealias(out);
  return out;
}

double hermitian_defect(const FourierVectorField& f) {
  const GridSpec& g = f.grid;
  const int n = g.n;
  double worst = 0.0;
  for (int i1 = 0; i1 < n; ++i1) {
    const int j1 = (n - i1) % n;
    for (int i2 = 0; i2 < n; ++i2) {
      const int j2 = (n - i2) % n;
      for (int i3 = 0; i3 < n; ++i3) {
        const int j3 = (n - i3) % n;
        const std::size_t a = g.index(i1, i2, i3);
        const std::size_t b = g.index(j1, j2, j3);
        for (int comp = 0; comp < 3; ++comp) {
          const cplx d = f.c[comp][a] - std::conj(f.c[comp][b]);
          worst = std::max(worst, std::abs(d));
        }
      }
    }
  }
  return worst;
}

namespace {

void put_u16(std::ofstream& s, std::uint16_t v) {
  s.write(reinterpret_cast<const char*>(&v), sizeof v);
}
void put_u32(std::ofstream& s, std::uint32_t v) {
  s.write(reinterpret_cast<const char*>(&v), sizeof v);
}
void put_f64(std::ofstream& s, double v) {
  s.write(reinterpret_cast<const char*>(&v), sizeof v);
}

}  // namespace

void save_pmns(const std::string& path, const FourierVectorField& f) {
  f.grid.validate();
  const std::string tmp = path + ".tmp";
  {
    std::ofstream s(tmp, std::ios::binary | std::ios::trunc);
    if (!s) throw std::runtime_error("save_pmns: cannot open " + tmp);
    s.write("PMNS", 4);
    put_u16(s, 1);  // container version
    put_u32(s, static_cast<std::uint32_t>(f.grid.n));
    put_f64(s, f.grid.box_length);
    put_f64(s, f.grid.dealias_fraction);
    const std::uint16_t ncomp = 3;
    put_u16(s, ncomp);
    const int n = f.grid.n;
    // Row-major over integer frequencies, each axis from -n/2 to n/2-1.
    for (int k1 = -n / 2; k1 < n / 2; ++k1)
      for (int k2 = -n / 2; k2 < n / 2; ++k2)
        for (int k3 = -n / 2; k3 < n / 2; ++k3) {
          const std::size_t idx = f.grid.index(
              f.grid.k_to_index(k1), f.grid.k_to_index(k2), f.grid.k_to_index(k3));
          for (int comp = 0; comp < 3; ++comp) {
            put_f64(s, f.c[comp][idx].real());
            put_f64(s, f.c[comp][idx].imag());
          }
        }
    if (!s) throw std::runtime_error("save_pmns: write failed for " + tmp);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0)
    throw std::runtime_error("save_pmns: rename failed for " + path);
}

FourierVectorField load_pmns(const std::string& path) {
  std::ifstream s(path, std::ios::binary);
  if (!s) throw std::runtime_error("load_pmns: cannot open " + path);
  char magic[4];
  s.read(magic, 4);
  if (!s || std::memcmp(magic, "PMNS", 4) != 0)
    throw std::runtime_error("load_pmns: bad magic in " + path);
  std::uint16_t version = 0, ncomp = 0;
  std::uint32_t n = 0;
  double L = 0.0, frac = 0.0;
  s.read(reinterpret_cast<char*>(&version), sizeof version);
  s.read(reinterpret_cast<char*>(&n), sizeof n);
  s.read(reinterpret_cast<char*>(&L), sizeof L);
  s.read(reinterpret_cast<char*>(&frac), sizeof frac);
  s.read(reinterpret_cast<char*>(&ncomp), sizeof ncomp);
  if (!s || version != 1 || ncomp != 3)
    throw std::runtime_error("load_pmns: unsupported header in " + path);
  GridSpec g{static_cast<int>(n), L, frac};
  g.validate();
  FourierVectorField f = FourierVectorField::zeros(g);
  const int nn = g.n;
  for (int k1 = -nn / 2; k1 < nn / 2; ++k1)
    for (int k2 = -nn / 2; k2 < nn / 2; ++k2)
      for (int k3 = -nn / 2; k3 < nn / 2; ++k3) {
        const std::size_t idx =
            g.index(g.k_to_index(k1), g.k_to_index(k2), g.k_to_index(k3));
        for (int comp = 0; comp < 3; ++comp) {
          double re = 0.0, im = 0.0;
          s.read(reinterpret_cast<char*>(&re), sizeof re);
          s.read(reinterpret_cast<char*>(&im), sizeof im);
          f.c[comp][idx] = cplx{re, im};
        }
      }
  if (!s) throw std::runtime_error("load_pmns: truncated file " + path);
  return f;
}

}  // namespace pmflow
