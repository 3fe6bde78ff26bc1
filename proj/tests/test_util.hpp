// Copyright 2026 The RoG Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <atomic>
#include <filesystem>
#include <random>
#include <span>
#include <string>

#include <Eigen/QR>

#include "rog/data/synth.hpp"

namespace rog::test {

/// Class means spread on a sphere of radius 4.
inline SynthSpec tiny_spec(int classes, Eigen::Index d, std::size_t n, double delta, std::uint64_t seed) {
  SynthSpec s;
  s.class_means = random_class_means(classes, d, 4.0, seed + 1000);
  s.sigma2 = 1.0;
  s.out_sigma2 = 4.0;
  s.delta_out = delta;
  s.n_per_class = n;
  s.seed = seed;
  return s;
}

inline std::span<const unsigned char> as_bytes(const std::string& s) {
  return {reinterpret_cast<const unsigned char*>(s.data()), s.size()};
}

class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("rog_test_" + std::to_string(std::random_device{}()) + "_" + std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

/// Gaussian matrix with a fixed seed.
inline Matrix gaussian_matrix(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed, double scale = 1.0) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd(0.0, scale);
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = nd(rng);
  }
  return m;
}

/// Random symmetric positive definite matrix, eigenvalues in [lo, hi].
inline Matrix random_spd(Eigen::Index d, std::uint64_t seed, double lo = 0.5, double hi = 3.0) {
  Matrix a = gaussian_matrix(d, d, seed);
  Eigen::HouseholderQR<Matrix> qr(a);
  Matrix q = qr.householderQ();
  std::mt19937_64 rng(seed + 7);
  std::uniform_real_distribution<double> u(lo, hi);
  Vector ev(d);
  for (Eigen::Index i = 0; i < d; ++i) ev(i) = u(rng);
  Matrix s = q * ev.asDiagonal() * q.transpose();
  return 0.5 * (s + s.transpose());
}

}  // namespace rog::test
