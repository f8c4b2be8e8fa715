#include "charpath/numeric.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include "charpath/errors.hpp"
#include <thread>

namespace charpath {

namespace {

std::atomic<unsigned> g_threads{std::max(1u, std::thread::hardware_concurrency())};

}  // namespace

cplx unit_phase(double u) {
  u -= std::floor(u);
  if (u >= 1.0) u = 0.0;
  const int quadrant = static_cast<int>(u * 4.0);  // 0..3
  const double x = u - 0.25 * quadrant;            // exact: [0, 1/4)
  double c = 0.0;
  double s = 0.0;
  if (x <= 0.125) {
    c = std::cos(kTwoPi * x);
    s = std::sin(kTwoPi * x);
  } else {
    const double y = 0.25 - x;
    c = std::sin(kTwoPi * y);
    s = std::cos(kTwoPi * y);
  }
  switch (quadrant) {
    case 0: return {c, s};
    case 1: return {-s, c};
    case 2: return {-c, -s};
    default: return {s, -c};
  }
}

double frac_mul(std::uint64_t k, double t) {
  const double kd = static_cast<double>(k);
  const double p = kd * t;
  const double err = std::fma(kd, t, -p);
  double f = (p - std::floor(p)) + err;
  f -= std::floor(f);
  return f >= 1.0 ? 0.0 : f;
}

void set_thread_count(unsigned n) { g_threads.store(std::max(1u, n)); }

unsigned thread_count() { return g_threads.load(); }

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) {
  const std::size_t workers = std::min<std::size_t>(thread_count(), n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto run = [&] {
    try {
      for (std::size_t i = next++; i < n; i = next++) body(i);
    } catch (...) {
      std::lock_guard lock(failure_mutex);
      if (!failure) failure = std::current_exception();
      next = n;
    }
  };
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers - 1);
    for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(run);
    run();
  }
  if (failure) std::rethrow_exception(failure);
}

double fit_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2)
    throw InvalidArgument("fit_slope needs two equally sized samples of length >= 2");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(x.size());
  my /= static_cast<double>(y.size());
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxy / sxx;
}

}  // namespace charpath
