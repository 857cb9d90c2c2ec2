#include "chstab/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace chstab {

namespace {

// The FFTW planner is not thread-safe; execution through the new-array
// interface is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

fftw_complex* as_fftw(std::complex<double>* p) { return reinterpret_cast<fftw_complex*>(p); }
fftw_complex* as_fftw(const std::complex<double>* p) {
  return reinterpret_cast<fftw_complex*>(const_cast<std::complex<double>*>(p));
}

void require_same_grid(const Grid2D& a, const Grid2D& b) {
  if (!a.same_as(b)) throw std::invalid_argument("fields live on different grids");
}

template <class Multiplier>
Field apply_multiplier(const Field& u, Multiplier&& mult) {
  auto g = forward(u);
  const std::size_t n = u.grid().n();
  for (std::size_t l = 0; l < n; ++l)
    for (std::size_t m = 0; m < n; ++m) g(l, m) *= mult(l, m);
  return backward(g);
}

}  // namespace

GridPtr Grid2D::make(std::size_t n, double length) { return GridPtr(new Grid2D(n, length)); }

Grid2D::Grid2D(std::size_t n, double length) : n_(n), length_(length), spacing_(length / static_cast<double>(n)) {
  if (n < 8) throw std::invalid_argument("grid needs at least 8 points per dimension, got " + std::to_string(n));
  if (!(length > 0.0) || !std::isfinite(length)) throw std::invalid_argument("domain length must be positive");

  const double scale = 2.0 * std::numbers::pi / length;
  wavenumbers_.resize(n);
  for (std::size_t j = 0; j < n; ++j) wavenumbers_[j] = scale * static_cast<double>(mode(j));
  k_squared_.resize(n * n);
  for (std::size_t l = 0; l < n; ++l)
    for (std::size_t m = 0; m < n; ++m)
      k_squared_[l * n + m] = wavenumbers_[l] * wavenumbers_[l] + wavenumbers_[m] * wavenumbers_[m];

  std::vector<std::complex<double>> in(n * n), out(n * n);
  const int ni = static_cast<int>(n);
  std::lock_guard lock(planner_mutex());
  forward_plan_ = fftw_plan_dft_2d(ni, ni, as_fftw(in.data()), as_fftw(out.data()), FFTW_FORWARD,
                                   FFTW_ESTIMATE | FFTW_UNALIGNED);
  backward_plan_ = fftw_plan_dft_2d(ni, ni, as_fftw(in.data()), as_fftw(out.data()), FFTW_BACKWARD,
                                    FFTW_ESTIMATE | FFTW_UNALIGNED);
  if (!forward_plan_ || !backward_plan_) throw std::runtime_error("FFTW planning failed");
}

Grid2D::~Grid2D() {
  std::lock_guard lock(planner_mutex());
  if (forward_plan_) fftw_destroy_plan(static_cast<fftw_plan>(forward_plan_));
  if (backward_plan_) fftw_destroy_plan(static_cast<fftw_plan>(backward_plan_));
}

long Grid2D::mode(std::size_t j) const {
  const auto jl = static_cast<long>(j);
  const auto nl = static_cast<long>(n_);
  return j < (n_ + 1) / 2 ? jl : jl - nl;
}

void Grid2D::execute_forward(const std::complex<double>* in, std::complex<double>* out) const {
  fftw_execute_dft(static_cast<fftw_plan>(forward_plan_), as_fftw(in), as_fftw(out));
}

void Grid2D::execute_backward(const std::complex<double>* in, std::complex<double>* out) const {
  fftw_execute_dft(static_cast<fftw_plan>(backward_plan_), as_fftw(in), as_fftw(out));
}

// ---------------------------------------------------------------------------

Field::Field(GridPtr grid) : grid_(std::move(grid)) {
  if (!grid_) throw std::invalid_argument("field needs a grid");
  values_.assign(grid_->size(), 0.0);
}

Field::Field(GridPtr grid, std::vector<double> values) : grid_(std::move(grid)), values_(std::move(values)) {
  if (!grid_) throw std::invalid_argument("field needs a grid");
  if (values_.size() != grid_->size())
    throw std::invalid_argument("field size " + std::to_string(values_.size()) + " does not match grid size " +
                                std::to_string(grid_->size()));
}

Field Field::constant(GridPtr grid, double value) {
  Field out(std::move(grid));
  std::fill(out.values_.begin(), out.values_.end(), value);
  return out;
}

bool Field::all_finite() const {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

Field& Field::operator+=(const Field& other) {
  require_same_grid(*grid_, other.grid());
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += other.values_[i];
  return *this;
}

Field& Field::operator-=(const Field& other) {
  require_same_grid(*grid_, other.grid());
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= other.values_[i];
  return *this;
}

Field& Field::operator*=(double s) {
  for (double& v : values_) v *= s;
  return *this;
}

Field operator+(Field a, const Field& b) { return a += b; }
Field operator-(Field a, const Field& b) { return a -= b; }
Field operator*(double s, Field a) { return a *= s; }

SpectralField::SpectralField(GridPtr grid) : grid_(std::move(grid)) {
  if (!grid_) throw std::invalid_argument("spectral field needs a grid");
  coeffs_.assign(grid_->size(), {0.0, 0.0});
}

SpectralField::SpectralField(GridPtr grid, std::vector<std::complex<double>> coeffs)
    : grid_(std::move(grid)), coeffs_(std::move(coeffs)) {
  if (!grid_) throw std::invalid_argument("spectral field needs a grid");
  if (coeffs_.size() != grid_->size()) throw std::invalid_argument("coefficient count does not match grid size");
}

// ---------------------------------------------------------------------------

SpectralField forward(const Field& u) {
  const auto& grid = u.grid();
  std::vector<std::complex<double>> in(u.values().begin(), u.values().end());
  SpectralField out(u.grid_ptr());
  grid.execute_forward(in.data(), out.coeffs().data());
  const double scale = 1.0 / static_cast<double>(grid.size());
  for (auto& c : out.coeffs()) c *= scale;
  return out;
}

Field backward(const SpectralField& g) {
  std::vector<std::complex<double>> out(g.size());
  g.grid().execute_backward(g.coeffs().data(), out.data());
  Field u(g.grid_ptr());
  for (std::size_t i = 0; i < out.size(); ++i) u[i] = out[i].real();
  return u;
}

Field apply_A_power(const Field& u, double s) {
  if (s < 0.0) {
    const double m = mean(u);
    double scale = 1.0;
    for (double v : u.values()) scale = std::max(scale, std::abs(v));
    if (std::abs(m) > 1e-12 * scale)
      throw std::invalid_argument("negative powers of A need a mean-free field (mean " + std::to_string(m) + ")");
  }
  const auto& grid = u.grid();
  return apply_multiplier(u, [&](std::size_t l, std::size_t m) {
    const double k2 = grid.k_squared(l * grid.n() + m);
    return k2 == 0.0 ? 0.0 : std::pow(k2, s);
  });
}

std::pair<Field, Field> gradient(const Field& u) {
  const auto& grid = u.grid();
  const auto g = forward(u);
  SpectralField gx(u.grid_ptr()), gy(u.grid_ptr());
  const std::size_t n = grid.n();
  const std::complex<double> I(0.0, 1.0);
  for (std::size_t l = 0; l < n; ++l)
    for (std::size_t m = 0; m < n; ++m) {
      gx(l, m) = grid.is_nyquist(l) ? 0.0 : I * grid.wavenumber(l) * g(l, m);
      gy(l, m) = grid.is_nyquist(m) ? 0.0 : I * grid.wavenumber(m) * g(l, m);
    }
  return {backward(gx), backward(gy)};
}

Field laplacian(const Field& u) {
  const auto& grid = u.grid();
  return apply_multiplier(u, [&](std::size_t l, std::size_t m) { return -grid.k_squared(l * grid.n() + m); });
}

std::pair<Field, Field> grad_laplacian(const Field& u) {
  const auto& grid = u.grid();
  const auto g = forward(u);
  SpectralField gx(u.grid_ptr()), gy(u.grid_ptr());
  const std::size_t n = grid.n();
  const std::complex<double> I(0.0, 1.0);
  for (std::size_t l = 0; l < n; ++l)
    for (std::size_t m = 0; m < n; ++m) {
      const double k2 = grid.k_squared(l * n + m);
      gx(l, m) = grid.is_nyquist(l) ? 0.0 : -I * grid.wavenumber(l) * k2 * g(l, m);
      gy(l, m) = grid.is_nyquist(m) ? 0.0 : -I * grid.wavenumber(m) * k2 * g(l, m);
    }
  return {backward(gx), backward(gy)};
}

double inner_h(const Field& u, const Field& v) {
  require_same_grid(u.grid(), v.grid());
  double sum = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) sum += u[i] * v[i];
  const double h = u.grid().spacing();
  return h * h * sum;
}

double norm_l2(const Field& u) { return std::sqrt(inner_h(u, u)); }

double seminorm(const SpectralField& g, int s) {
  if (s != -1 && s != 1 && s != 2 && s != 3)
    throw std::invalid_argument("unsupported seminorm order " + std::to_string(s));
  const auto& grid = g.grid();
  double sum = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double k2 = grid.k_squared(i);
    if (k2 == 0.0) continue;
    double w = k2;
    switch (s) {
      case -1: w = 1.0 / k2; break;
      case 2: w = k2 * k2; break;
      case 3: w = k2 * k2 * k2; break;
      default: break;
    }
    sum += w * std::norm(g[i]);
  }
  return std::sqrt(grid.area() * sum);
}

double seminorm(const Field& u, int s) { return seminorm(forward(u), s); }

double mean(const Field& u) {
  double sum = 0.0;
  for (double v : u.values()) sum += v;
  return sum / static_cast<double>(u.size());
}

Field remove_mean(const Field& u) {
  Field out = u;
  const double m = mean(u);
  for (double& v : out.values()) v -= m;
  return out;
}

double poincare_gamma1(const Grid2D& grid) {
  const double lambda_min = std::pow(2.0 * std::numbers::pi / grid.length(), 2);
  return 1.0 / lambda_min;
}

void dealias_two_thirds(SpectralField& g) {
  const auto& grid = g.grid();
  const std::size_t n = grid.n();
  const double cutoff = static_cast<double>(n) / 3.0;
  for (std::size_t l = 0; l < n; ++l)
    for (std::size_t m = 0; m < n; ++m)
      if (std::abs(static_cast<double>(grid.mode(l))) > cutoff || std::abs(static_cast<double>(grid.mode(m))) > cutoff)
        g(l, m) = 0.0;
}

}  // namespace chstab
