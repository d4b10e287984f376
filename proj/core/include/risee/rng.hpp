// risee - spectral/energy efficiency tradeoff simulator for RIS-aided MIMO downlinks
// Copyright (C) 2026 the risee authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <initializer_list>
#include <random>

namespace risee {

/// splitmix64 step; advances the state and returns the next word.
inline std::uint64_t splitmix64(std::uint64_t &state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Derives a child seed from a master seed and a list of salts (counter-mode mix).
/// Used so that trials, sweep points and per-architecture draws get independent
/// but reproducible streams.
inline std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> salts) {
    std::uint64_t s = master;
    (void)splitmix64(s);
    for (std::uint64_t salt : salts) {
        s ^= 0x9e3779b97f4a7c15ULL + salt;
        (void)splitmix64(s);
    }
    return splitmix64(s);
}

/// Seeded random stream. Gaussian draws use Box-Muller on top of mt19937_64 so
/// the consumption pattern is fixed (two uniforms per complex normal).
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform double in [0, 1).
    double uniform() {
        return std::generate_canonical<double, 53>(engine_);
    }

    double uniform(double lo, double hi) {
        return lo + (hi - lo) * uniform();
    }

    /// Standard real normal N(0, 1).
    double gauss() {
        double u1 = 1.0 - uniform(); // (0, 1]
        double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
    }

    /// Circularly-symmetric complex normal CN(0, 1) (unit total variance).
    std::complex<double> cgauss() {
        double u1 = 1.0 - uniform();
        double u2 = uniform();
        double r = std::sqrt(-std::log(u1));
        return std::polar(r, 2.0 * M_PI * u2);
    }

  private:
    std::mt19937_64 engine_;
};

} // namespace risee
