#pragma once

namespace kripke {

// Kernels run either serially (reference path) or with OpenMP.
enum class Exec { Serial, Parallel };

}  // namespace kripke
