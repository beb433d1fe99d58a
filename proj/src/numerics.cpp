#include "utm/numerics.hpp"

#include <algorithm>
#include <boost/math/special_functions/legendre.hpp>
#include <cmath>
#include <map>
#include <mutex>
#include <thread>

namespace utm {

cplx cexpm1(cplx z) {
  const double x = z.real();
  const double y = z.imag();
  const double s = std::sin(0.5 * y);
  const double re = std::expm1(x) * std::cos(y) - 2.0 * s * s;
  const double im = std::exp(x) * std::sin(y);
  return {re, im};
}

ExpMoments exp_moments(cplx z) {
  if (std::abs(z) < 0.5) {
    // e1 = sum z^k/(k+1)!, es = sum (k+1) z^k/(k+2)!
    cplx e1 = 0.0;
    cplx es = 0.0;
    cplx zk = 1.0;
    double fact = 1.0;  // (k+1)!
    for (int k = 0; k < 22; ++k) {
      fact *= static_cast<double>(k + 1);
      e1 += zk / fact;
      es += zk * static_cast<double>(k + 1) / (fact * static_cast<double>(k + 2));
      zk *= z;
    }
    return {e1, es};
  }
  const cplx em1 = cexpm1(z);
  const cplx ez = em1 + 1.0;
  const cplx e1 = em1 / z;
  const cplx es = (ez * (z - 1.0) + 1.0) / (z * z);
  return {e1, es};
}

ConvolutionStep ConvolutionStep::make(cplx lambda, double h) {
  const cplx z = lambda * h;
  const ExpMoments m = exp_moments(z);
  return {std::exp(z), h * m.es, h * (m.e1 - m.es)};
}

const GaussRule& gauss_legendre(int n) {
  static std::mutex mu;
  static std::map<int, GaussRule> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  GaussRule rule;
  const auto zeros = boost::math::legendre_p_zeros<double>(n);
  for (double z : zeros) {
    const double d = boost::math::legendre_p_prime<double>(n, z);
    const double w = 2.0 / ((1.0 - z * z) * d * d);
    if (z == 0.0) {
      rule.x.push_back(0.0);
      rule.w.push_back(w);
    } else {
      rule.x.push_back(z);
      rule.w.push_back(w);
      rule.x.push_back(-z);
      rule.w.push_back(w);
    }
  }
  std::vector<std::size_t> idx(rule.x.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return rule.x[a] < rule.x[b]; });
  GaussRule sorted;
  for (std::size_t i : idx) {
    sorted.x.push_back(rule.x[i]);
    sorted.w.push_back(rule.w[i]);
  }
  return cache.emplace(n, std::move(sorted)).first->second;
}

namespace {
int g_threads = 1;
}

void set_default_threads(int n) { g_threads = std::max(1, n); }
int default_threads() { return g_threads; }

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn, int threads) {
  if (threads <= 0) threads = g_threads;
  const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(threads), n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  std::exception_ptr failure;
  std::mutex mu;
  const std::size_t chunk = (n + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t lo = w * chunk;
    const std::size_t hi = std::min(n, lo + chunk);
    pool.emplace_back([&, lo, hi] {
      try {
        for (std::size_t i = lo; i < hi; ++i) fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(mu);
        if (!failure) failure = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace utm
