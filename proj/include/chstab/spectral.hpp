#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <utility>
#include <vector>

namespace chstab {

class Grid2D;
using GridPtr = std::shared_ptr<const Grid2D>;

/// Periodic n x n collocation grid on (0, L)^2 with x_i = i h.
///
/// Mode index j in [0, n) carries the integer wavenumber j for j < ceil(n/2)
/// and j - n otherwise, i.e. {-floor(n/2), ..., ceil(n/2) - 1}, scaled by
/// 2 pi / L. For even n the Nyquist index n/2 maps to -n/2.
///
/// Instances own their FFTW plans and are shared through GridPtr. Plans are
/// executed with the new-array interface, so transforms may run concurrently.
class Grid2D {
 public:
  static GridPtr make(std::size_t n, double length);

  ~Grid2D();
  Grid2D(const Grid2D&) = delete;
  Grid2D& operator=(const Grid2D&) = delete;

  std::size_t n() const { return n_; }
  std::size_t size() const { return n_ * n_; }
  double length() const { return length_; }
  double spacing() const { return spacing_; }
  double area() const { return length_ * length_; }
  double coordinate(std::size_t i) const { return static_cast<double>(i) * spacing_; }

  /// Integer wavenumber of mode index j.
  long mode(std::size_t j) const;
  /// Scaled wavenumber 2 pi mode(j) / L.
  double wavenumber(std::size_t j) const { return wavenumbers_[j]; }
  /// True for the unmatched Nyquist index of an even grid.
  bool is_nyquist(std::size_t j) const { return n_ % 2 == 0 && j == n_ / 2; }
  /// |k|^2 for flat mode index i * n + j.
  double k_squared(std::size_t flat) const { return k_squared_[flat]; }
  std::span<const double> k_squared() const { return k_squared_; }

  bool same_as(const Grid2D& other) const { return n_ == other.n_ && length_ == other.length_; }

  void execute_forward(const std::complex<double>* in, std::complex<double>* out) const;
  void execute_backward(const std::complex<double>* in, std::complex<double>* out) const;

 private:
  Grid2D(std::size_t n, double length);

  std::size_t n_;
  double length_;
  double spacing_;
  std::vector<double> wavenumbers_;
  std::vector<double> k_squared_;
  void* forward_plan_ = nullptr;
  void* backward_plan_ = nullptr;
};

/// Real grid samples u(x_i, y_j), stored row-major at i * n + j.
class Field {
 public:
  explicit Field(GridPtr grid);
  Field(GridPtr grid, std::vector<double> values);

  static Field constant(GridPtr grid, double value);

  template <class Fn>
  static Field from_function(GridPtr grid, Fn&& fn) {
    Field out(grid);
    const std::size_t n = grid->n();
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) out(i, j) = fn(grid->coordinate(i), grid->coordinate(j));
    return out;
  }

  const Grid2D& grid() const { return *grid_; }
  const GridPtr& grid_ptr() const { return grid_; }
  std::size_t size() const { return values_.size(); }

  double& operator()(std::size_t i, std::size_t j) { return values_[i * grid_->n() + j]; }
  double operator()(std::size_t i, std::size_t j) const { return values_[i * grid_->n() + j]; }
  double& operator[](std::size_t flat) { return values_[flat]; }
  double operator[](std::size_t flat) const { return values_[flat]; }

  std::span<double> values() { return values_; }
  std::span<const double> values() const { return values_; }
  std::vector<double>& data() { return values_; }

  bool all_finite() const;

  Field& operator+=(const Field& other);
  Field& operator-=(const Field& other);
  Field& operator*=(double s);

 private:
  GridPtr grid_;
  std::vector<double> values_;
};

Field operator+(Field a, const Field& b);
Field operator-(Field a, const Field& b);
Field operator*(double s, Field a);

/// Collocation coefficients g_hat(l, m), flat index l * n + m, normalised so
/// that g_hat = (1/n^2) sum_ij g_ij exp(-i(l x_i + m y_j)).
class SpectralField {
 public:
  explicit SpectralField(GridPtr grid);
  SpectralField(GridPtr grid, std::vector<std::complex<double>> coeffs);

  const Grid2D& grid() const { return *grid_; }
  const GridPtr& grid_ptr() const { return grid_; }
  std::size_t size() const { return coeffs_.size(); }

  std::complex<double>& operator()(std::size_t l, std::size_t m) { return coeffs_[l * grid_->n() + m]; }
  std::complex<double> operator()(std::size_t l, std::size_t m) const { return coeffs_[l * grid_->n() + m]; }
  std::complex<double>& operator[](std::size_t flat) { return coeffs_[flat]; }
  std::complex<double> operator[](std::size_t flat) const { return coeffs_[flat]; }

  std::span<std::complex<double>> coeffs() { return coeffs_; }
  std::span<const std::complex<double>> coeffs() const { return coeffs_; }

 private:
  GridPtr grid_;
  std::vector<std::complex<double>> coeffs_;
};

SpectralField forward(const Field& u);
/// Real part of the inverse transform.
Field backward(const SpectralField& g);

/// A^s u with A = -Laplacian. For s < 0 the input must have zero mean.
Field apply_A_power(const Field& u, double s);

std::pair<Field, Field> gradient(const Field& u);
Field laplacian(const Field& u);
std::pair<Field, Field> grad_laplacian(const Field& u);

double inner_h(const Field& u, const Field& v);
double norm_l2(const Field& u);

/// |u|_s = ||A^{s/2} u|| for s in {-1, 1, 2, 3}; s = -1 acts on the mean-free part.
double seminorm(const Field& u, int s);
double seminorm(const SpectralField& u_hat, int s);

double mean(const Field& u);
Field remove_mean(const Field& u);

/// 1 / lambda_min, the sharp constant in |u - m(u)|_{-1} <= gamma_1 |u|_1.
double poincare_gamma1(const Grid2D& grid);

/// Zeroes every mode with |mode| > n/3 in either direction.
void dealias_two_thirds(SpectralField& g);

}  // namespace chstab
