// AVX2+FMA kernel variants. This TU is the only one compiled with -mavx2
// -mfma; callers must check avx2::runtime_supported() before dispatching
// here. On other targets the functions fall back to the scalar reference.
#include "affkb/kernels.hpp"

#if defined(__x86_64__) && defined(__AVX2__) && defined(__FMA__)
#define AFFKB_HAVE_AVX2_TU 1
#include <immintrin.h>
#else
#define AFFKB_HAVE_AVX2_TU 0
#endif

namespace affkb::kernels::avx2 {

bool compiled_in() { return AFFKB_HAVE_AVX2_TU != 0; }

#if AFFKB_HAVE_AVX2_TU

namespace {

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  __m128d shuf = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_add_sd(lo, shuf));
}

}  // namespace

double dot(const double* x, const double* y, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i + 4), _mm256_loadu_pd(y + i + 4), acc1);
  }
  if (i + 4 <= n) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc0);
    i += 4;
  }
  double acc = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) acc += x[i] * y[i];
  return acc;
}

double squared_norm(const double* x, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    __m256d a = _mm256_loadu_pd(x + i);
    __m256d b = _mm256_loadu_pd(x + i + 4);
    acc0 = _mm256_fmadd_pd(a, a, acc0);
    acc1 = _mm256_fmadd_pd(b, b, acc1);
  }
  if (i + 4 <= n) {
    __m256d a = _mm256_loadu_pd(x + i);
    acc0 = _mm256_fmadd_pd(a, a, acc0);
    i += 4;
  }
  double acc = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) acc += x[i] * x[i];
  return acc;
}

void axpy(double a, const double* x, double* y, std::size_t n) {
  const __m256d va = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d vy = _mm256_loadu_pd(y + i);
    vy = _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), vy);
    _mm256_storeu_pd(y + i, vy);
  }
  for (; i < n; ++i) y[i] += a * x[i];
}

void scale(double* x, double a, std::size_t n) {
  const __m256d va = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(x + i, _mm256_mul_pd(_mm256_loadu_pd(x + i), va));
  }
  for (; i < n; ++i) x[i] *= a;
}

#else

double dot(const double* x, const double* y, std::size_t n) {
  return scalar::dot(x, y, n);
}
double squared_norm(const double* x, std::size_t n) {
  return scalar::squared_norm(x, n);
}
void axpy(double a, const double* x, double* y, std::size_t n) {
  scalar::axpy(a, x, y, n);
}
void scale(double* x, double a, std::size_t n) { scalar::scale(x, a, n); }

#endif  // AFFKB_HAVE_AVX2_TU

}  // namespace affkb::kernels::avx2
