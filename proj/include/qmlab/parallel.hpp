#pragma once

namespace qmlab::parallel {

// Worker count for the OpenMP kernel variants: QMLAB_THREADS when set (>= 1),
// otherwise the OpenMP default; 1 when built without OpenMP.
int max_threads();

// True when the dispatching entry points may take the parallel path.
bool enabled();

}  // namespace qmlab::parallel
