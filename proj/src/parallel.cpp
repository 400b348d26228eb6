#include "archicop/parallel.hpp"

#include <omp.h>

namespace archicop {

int worker_threads() { return omp_get_max_threads(); }

}  // namespace archicop
