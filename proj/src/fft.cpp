#include "fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <utility>

#include "mixnoise/errors.hpp"

namespace mixnoise::detail {

namespace {

struct FftwFree {
  void operator()(void* p) const { fftw_free(p); }
};
template <class T>
using fftw_buffer = std::unique_ptr<T[], FftwFree>;

template <class T>
fftw_buffer<T> allocate(std::size_t n) {
  auto* p = static_cast<T*>(fftw_malloc(sizeof(T) * std::max<std::size_t>(n, 1)));
  if (!p) throw std::bad_alloc();
  return fftw_buffer<T>(p);
}

enum class Kind { forward, inverse };

std::mutex planner_mutex;
std::map<std::pair<Kind, std::size_t>, fftw_plan> plans;

fftw_plan plan_for(Kind kind, std::size_t n) {
  std::lock_guard<std::mutex> lock(planner_mutex);
  auto key = std::make_pair(kind, n);
  if (auto it = plans.find(key); it != plans.end()) return it->second;
  auto real = allocate<double>(n);
  auto cplx = allocate<fftw_complex>(n / 2 + 1);
  fftw_plan p = kind == Kind::forward
                    ? fftw_plan_dft_r2c_1d(static_cast<int>(n), real.get(), cplx.get(), FFTW_ESTIMATE)
                    : fftw_plan_dft_c2r_1d(static_cast<int>(n), cplx.get(), real.get(), FFTW_ESTIMATE);
  if (!p) throw ParameterError("fft: planning failed");
  plans.emplace(key, p);
  return p;
}

}  // namespace

std::vector<std::complex<double>> rfft(const std::vector<double>& x) {
  const std::size_t n = x.size();
  fftw_plan p = plan_for(Kind::forward, n);
  auto in = allocate<double>(n);
  auto out = allocate<fftw_complex>(n / 2 + 1);
  std::copy(x.begin(), x.end(), in.get());
  fftw_execute_dft_r2c(p, in.get(), out.get());
  std::vector<std::complex<double>> result(n / 2 + 1);
  for (std::size_t k = 0; k < result.size(); ++k) result[k] = {out[k][0], out[k][1]};
  return result;
}

std::vector<double> irfft(const std::vector<std::complex<double>>& half_spectrum, std::size_t n) {
  if (half_spectrum.size() != n / 2 + 1) throw ParameterError("fft: spectrum length mismatch");
  fftw_plan p = plan_for(Kind::inverse, n);
  auto in = allocate<fftw_complex>(n / 2 + 1);
  auto out = allocate<double>(n);
  for (std::size_t k = 0; k < half_spectrum.size(); ++k) {
    in[k][0] = half_spectrum[k].real();
    in[k][1] = half_spectrum[k].imag();
  }
  fftw_execute_dft_c2r(p, in.get(), out.get());
  return std::vector<double>(out.get(), out.get() + n);
}

}  // namespace mixnoise::detail
