#pragma once

// Small deterministic generators for the property tests (SplitMix64 core).

#include <cstdint>

#include "sqg/spectral_core.hpp"

namespace sqg::testing {

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : s_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (s_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }
  // Uniform on [lo, hi].
  int integer(int lo, int hi) {
    return lo + static_cast<int>(next() % static_cast<std::uint64_t>(hi - lo + 1));
  }
  double real(double lo, double hi) {
    return lo + (hi - lo) * static_cast<double>(next() >> 11) * 0x1.0p-53;
  }
  bool coin() { return next() & 1U; }

  spectral::LatticeVector lattice(int max_index) {
    for (;;) {
      const spectral::LatticeVector p(integer(-max_index, max_index), integer(-max_index, max_index));
      if (!p.is_zero()) return p;
    }
  }

  // Mean-zero field with `modes` distinct (direction, parity) terms.
  spectral::TrigField field(int modes, int max_index) {
    spectral::TrigField f;
    while (static_cast<int>(f.size()) < modes) {
      const double c = real(0.2, 1.0) * (coin() ? 1.0 : -1.0);
      f.add(lattice(max_index), coin() ? spectral::Parity::kCos : spectral::Parity::kSin, c);
    }
    return f;
  }

 private:
  std::uint64_t s_;
};

}  // namespace sqg::testing
