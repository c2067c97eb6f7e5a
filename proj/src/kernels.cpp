#include "affkb/kernels.hpp"

#include <cstdlib>
#include <stdexcept>

namespace affkb::kernels {

bool avx2::runtime_supported() {
#if defined(__x86_64__) && (defined(__GNUC__) || defined(__clang__))
  return avx2::compiled_in() && __builtin_cpu_supports("avx2") &&
         __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

namespace {

Backend detect() {
  if (const char* env = std::getenv("AFFKB_KERNELS")) {
    if (std::string_view(env) == "scalar") return Backend::Scalar;
  }
  return avx2::runtime_supported() ? Backend::Avx2 : Backend::Scalar;
}

Backend g_backend = detect();

}  // namespace

Backend active_backend() { return g_backend; }

std::string_view backend_name() {
  return g_backend == Backend::Avx2 ? "avx2" : "scalar";
}

void force_backend(Backend b) {
  if (b == Backend::Avx2 && !avx2::runtime_supported()) {
    throw std::runtime_error("avx2 backend not available on this CPU/build");
  }
  g_backend = b;
}

double dot(std::span<const double> x, std::span<const double> y) {
  return g_backend == Backend::Avx2 ? avx2::dot(x.data(), y.data(), x.size())
                                    : scalar::dot(x.data(), y.data(), x.size());
}

double squared_norm(std::span<const double> x) {
  return g_backend == Backend::Avx2 ? avx2::squared_norm(x.data(), x.size())
                                    : scalar::squared_norm(x.data(), x.size());
}

void axpy(double a, std::span<const double> x, std::span<double> y) {
  if (g_backend == Backend::Avx2) {
    avx2::axpy(a, x.data(), y.data(), x.size());
  } else {
    scalar::axpy(a, x.data(), y.data(), x.size());
  }
}

void scale(std::span<double> x, double a) {
  if (g_backend == Backend::Avx2) {
    avx2::scale(x.data(), a, x.size());
  } else {
    scalar::scale(x.data(), a, x.size());
  }
}

}  // namespace affkb::kernels
