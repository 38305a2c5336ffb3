// Copyright 2026 The hopeclf Authors
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

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <string_view>

#include <Eigen/Core>

namespace hope::nn {

template <typename T>
using Matrix = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

template <typename T>
struct Parameter {
  Matrix<T> value;
  Matrix<T> grad;

  void resize(Eigen::Index rows, Eigen::Index cols) {
    value = Matrix<T>::Zero(rows, cols);
    grad = Matrix<T>::Zero(rows, cols);
  }
  void zero_grad() { grad.setZero(); }
};

/// Platform-independent random stream. mt19937_64 output is fixed by the
/// standard; the distributions here are hand-written because the standard
/// library ones are implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Independent stream for a given purpose, derived from the run seed.
  static Rng derive(std::uint64_t seed, std::uint64_t stream);

  std::uint64_t next_u64() { return engine_(); }
  double uniform();  // [0, 1)
  double normal();
  std::size_t below(std::size_t n);  // uniform in [0, n)

 private:
  std::mt19937_64 engine_;
  std::optional<double> spare_;
};

namespace stream {
inline constexpr std::uint64_t kHeadInit = 1;
inline constexpr std::uint64_t kBackboneInit = 2;
inline constexpr std::uint64_t kDropout = 3;
inline constexpr std::uint64_t kShuffle = 4;
}  // namespace stream

enum class Activation { Gelu, Relu };

std::string_view to_string(Activation a) noexcept;
Activation parse_activation(std::string_view text);

template <typename T>
void fill_normal(Matrix<T>& m, Rng& rng, double stddev);

/// y = x W^T + b with W stored (out x in), matching the usual checkpoint layout.
template <typename T>
class Linear {
 public:
  Linear() = default;
  Linear(std::size_t in, std::size_t out);

  Matrix<T> forward(const Matrix<T>& x) const;
  /// Accumulates weight/bias gradients and returns dL/dx.
  Matrix<T> backward(const Matrix<T>& x, const Matrix<T>& dy);

  void init(Rng& rng, double stddev);
  std::size_t in_features() const noexcept { return static_cast<std::size_t>(weight.value.cols()); }
  std::size_t out_features() const noexcept { return static_cast<std::size_t>(weight.value.rows()); }

  Parameter<T> weight;
  Parameter<T> bias;  // 1 x out
};

/// Row-wise layer normalization.
template <typename T>
class LayerNorm {
 public:
  LayerNorm() = default;
  LayerNorm(std::size_t width, double eps);

  Matrix<T> forward(const Matrix<T>& x) const;
  /// Recomputes the row statistics from `x` rather than caching them.
  Matrix<T> backward(const Matrix<T>& x, const Matrix<T>& dy);

  Parameter<T> gamma;
  Parameter<T> beta;
  double eps = 1e-5;
};

template <typename T>
Matrix<T> activate(Activation a, const Matrix<T>& pre);

/// dL/dpre given dL/dy and the pre-activation input.
template <typename T>
Matrix<T> activate_backward(Activation a, const Matrix<T>& pre, const Matrix<T>& dy);

/// Inverted dropout mask: entries are 0 or 1/(1-p).
template <typename T>
Matrix<T> dropout_mask(Eigen::Index rows, Eigen::Index cols, double p, Rng& rng);

}  // namespace hope::nn
