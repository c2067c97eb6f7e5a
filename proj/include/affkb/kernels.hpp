#pragma once

#include <cstddef>
#include <span>
#include <string_view>

// Dense double-precision vector kernels used by the vector-space and SVD
// code paths. Every kernel has a scalar reference implementation and, on
// x86-64 with AVX2+FMA, a vectorized variant. The variant is picked once at
// startup from cpuid; AFFKB_KERNELS=scalar in the environment forces the
// reference path. SIMD and scalar results may differ in the last ulps
// (different reduction order), never beyond.
namespace affkb::kernels {

enum class Backend { Scalar, Avx2 };

// Backend chosen for this process. Thread-safe after first call.
Backend active_backend();
std::string_view backend_name();

// Test hook: override the dispatch. Throws std::runtime_error if the
// requested backend is not available on this CPU.
void force_backend(Backend b);

double dot(std::span<const double> x, std::span<const double> y);
double squared_norm(std::span<const double> x);
// y += a * x
void axpy(double a, std::span<const double> x, std::span<double> y);
void scale(std::span<double> x, double a);

// Reference implementations, exposed so equivalence tests can compare the
// dispatched path against them directly.
namespace scalar {
double dot(const double* x, const double* y, std::size_t n);
double squared_norm(const double* x, std::size_t n);
void axpy(double a, const double* x, double* y, std::size_t n);
void scale(double* x, double a, std::size_t n);
}  // namespace scalar

namespace avx2 {
bool compiled_in();
bool runtime_supported();
double dot(const double* x, const double* y, std::size_t n);
double squared_norm(const double* x, std::size_t n);
void axpy(double a, const double* x, double* y, std::size_t n);
void scale(double* x, double a, std::size_t n);
}  // namespace avx2

}  // namespace affkb::kernels
