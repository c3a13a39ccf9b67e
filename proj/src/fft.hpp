#pragma once

#include <fftw3.h>

#include <complex>
#include <cstddef>
#include <mutex>

namespace sipf::detail {

/// The FFTW planner is not thread safe; execution is.
inline std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

/// fftw_malloc'd buffer.
template <typename T>
class FftwBuffer {
 public:
  explicit FftwBuffer(std::size_t n) : n_(n), ptr_(static_cast<T*>(fftw_malloc(sizeof(T) * n))) {
    if (!ptr_) throw std::bad_alloc();
  }
  ~FftwBuffer() { fftw_free(ptr_); }
  FftwBuffer(const FftwBuffer&) = delete;
  FftwBuffer& operator=(const FftwBuffer&) = delete;

  T* data() { return ptr_; }
  const T* data() const { return ptr_; }
  std::size_t size() const { return n_; }
  T& operator[](std::size_t i) { return ptr_[i]; }
  const T& operator[](std::size_t i) const { return ptr_[i]; }

 private:
  std::size_t n_;
  T* ptr_;
};

/// In-place 3D complex backward transform (sign +1, unnormalized) on an n^3 buffer.
/// FFTW_ESTIMATE keeps the chosen algorithm, and hence round-off, identical
/// from run to run.
class BackwardC2C {
 public:
  explicit BackwardC2C(int n) : n_(n), buf_(std::size_t(n) * n * n) {
    std::lock_guard lock(fftw_planner_mutex());
    plan_ = fftw_plan_dft_3d(n, n, n, reinterpret_cast<fftw_complex*>(buf_.data()),
                             reinterpret_cast<fftw_complex*>(buf_.data()), FFTW_BACKWARD, FFTW_ESTIMATE);
  }
  ~BackwardC2C() {
    std::lock_guard lock(fftw_planner_mutex());
    fftw_destroy_plan(plan_);
  }
  BackwardC2C(const BackwardC2C&) = delete;
  BackwardC2C& operator=(const BackwardC2C&) = delete;

  std::complex<double>* data() { return buf_.data(); }
  int n() const { return n_; }
  void execute() { fftw_execute(plan_); }

 private:
  int n_;
  FftwBuffer<std::complex<double>> buf_;
  fftw_plan plan_;
};

/// 3D complex forward transform (sign -1, unnormalized).
class ForwardC2C {
 public:
  explicit ForwardC2C(int n) : n_(n), buf_(std::size_t(n) * n * n) {
    std::lock_guard lock(fftw_planner_mutex());
    plan_ = fftw_plan_dft_3d(n, n, n, reinterpret_cast<fftw_complex*>(buf_.data()),
                             reinterpret_cast<fftw_complex*>(buf_.data()), FFTW_FORWARD, FFTW_ESTIMATE);
  }
  ~ForwardC2C() {
    std::lock_guard lock(fftw_planner_mutex());
    fftw_destroy_plan(plan_);
  }
  ForwardC2C(const ForwardC2C&) = delete;
  ForwardC2C& operator=(const ForwardC2C&) = delete;

  std::complex<double>* data() { return buf_.data(); }
  void execute() { fftw_execute(plan_); }

 private:
  int n_;
  FftwBuffer<std::complex<double>> buf_;
  fftw_plan plan_;
};

/// Complex-to-real 3D transform; input is the n x n x (n/2+1) half spectrum.
/// The plan can be executed on other buffers of the same shape (new-array execute).
class C2RPlan {
 public:
  explicit C2RPlan(int n) : n_(n) {
    FftwBuffer<std::complex<double>> in(half_size());
    FftwBuffer<double> out(real_size());
    std::lock_guard lock(fftw_planner_mutex());
    plan_ = fftw_plan_dft_c2r_3d(n, n, n, reinterpret_cast<fftw_complex*>(in.data()), out.data(),
                                 FFTW_ESTIMATE);
  }
  ~C2RPlan() {
    std::lock_guard lock(fftw_planner_mutex());
    fftw_destroy_plan(plan_);
  }
  C2RPlan(const C2RPlan&) = delete;
  C2RPlan& operator=(const C2RPlan&) = delete;

  std::size_t half_size() const { return std::size_t(n_) * n_ * (n_ / 2 + 1); }
  std::size_t real_size() const { return std::size_t(n_) * n_ * n_; }
  /// Note: c2r destroys its input.
  void execute(std::complex<double>* in, double* out) const {
    fftw_execute_dft_c2r(plan_, reinterpret_cast<fftw_complex*>(in), out);
  }

 private:
  int n_;
  fftw_plan plan_;
};

}  // namespace sipf::detail
