#include "cohui/rng.hpp"

namespace cohui {

double CounterRng::uniform_open() {
  // (k + 1/2) / 2^53, never exactly 0 or 1. A click test `u < p` therefore
  // never fires for p below 2^-54, in particular never for the vacuum.
  const std::uint64_t k = (*this)() >> 11;
  return (static_cast<double>(k) + 0.5) * 0x1.0p-53;
}

}  // namespace cohui
