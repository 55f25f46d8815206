#include "qmlab/parallel.hpp"

#include <cstdlib>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace qmlab::parallel {

int max_threads() {
#ifdef _OPENMP
  static const int n = [] {
    if (const char* env = std::getenv("QMLAB_THREADS")) {
      int v = std::atoi(env);
      if (v >= 1) return v;
    }
    return omp_get_max_threads();
  }();
  return n;
#else
  return 1;
#endif
}

bool enabled() { return max_threads() > 1; }

}  // namespace qmlab::parallel
