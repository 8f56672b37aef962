#include "lgas/parallel.hpp"

#include <thread>

namespace lgas {

int default_threads() {
#ifdef LGAS_HAVE_OPENMP
  return omp_get_max_threads();
#else
  const unsigned n = std::thread::hardware_concurrency();
  return n > 0 ? static_cast<int>(n) : 1;
#endif
}

}  // namespace lgas
