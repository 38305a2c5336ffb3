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

#include "hope/nn.hpp"

#include <cctype>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace hope::nn {

Rng Rng::derive(std::uint64_t seed, std::uint64_t stream) {
  // splitmix64 finalizer over (seed, stream).
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return Rng(z ^ (z >> 31));
}

double Rng::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

double Rng::normal() {
  if (spare_) {
    const double v = *spare_;
    spare_.reset();
    return v;
  }
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(theta);
  return r * std::cos(theta);
}

std::size_t Rng::below(std::size_t n) {
  if (n == 0) throw std::invalid_argument("Rng::below(0)");
  const std::uint64_t bound = static_cast<std::uint64_t>(n);
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  std::uint64_t v;
  do {
    v = engine_();
  } while (v >= limit);
  return static_cast<std::size_t>(v % bound);
}

std::string_view to_string(Activation a) noexcept { return a == Activation::Gelu ? "GELU" : "RELU"; }

Activation parse_activation(std::string_view text) {
  std::string s(text);
  for (auto& c : s) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  if (s == "GELU") return Activation::Gelu;
  if (s == "RELU") return Activation::Relu;
  throw std::invalid_argument("unknown activation '" + std::string(text) + "' (GELU or RELU)");
}

template <typename T>
void fill_normal(Matrix<T>& m, Rng& rng, double stddev) {
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = static_cast<T>(rng.normal() * stddev);
}

template <typename T>
Linear<T>::Linear(std::size_t in, std::size_t out) {
  weight.resize(static_cast<Eigen::Index>(out), static_cast<Eigen::Index>(in));
  bias.resize(1, static_cast<Eigen::Index>(out));
}

template <typename T>
void Linear<T>::init(Rng& rng, double stddev) {
  fill_normal(weight.value, rng, stddev);
  bias.value.setZero();
}

template <typename T>
Matrix<T> Linear<T>::forward(const Matrix<T>& x) const {
  Matrix<T> y = x * weight.value.transpose();
  y.rowwise() += bias.value.row(0);
  return y;
}

template <typename T>
Matrix<T> Linear<T>::backward(const Matrix<T>& x, const Matrix<T>& dy) {
  weight.grad.noalias() += dy.transpose() * x;
  bias.grad.row(0) += dy.colwise().sum();
  return dy * weight.value;
}

template <typename T>
LayerNorm<T>::LayerNorm(std::size_t width, double eps_) : eps(eps_) {
  gamma.resize(1, static_cast<Eigen::Index>(width));
  beta.resize(1, static_cast<Eigen::Index>(width));
  gamma.value.setOnes();
}

template <typename T>
Matrix<T> LayerNorm<T>::forward(const Matrix<T>& x) const {
  const auto n = static_cast<T>(x.cols());
  Matrix<T> y(x.rows(), x.cols());
  for (Eigen::Index r = 0; r < x.rows(); ++r) {
    const T mean = x.row(r).sum() / n;
    const T var = (x.row(r).array() - mean).square().sum() / n;
    const T inv = T(1) / std::sqrt(var + static_cast<T>(eps));
    y.row(r) = (((x.row(r).array() - mean) * inv) * gamma.value.row(0).array() +
                beta.value.row(0).array())
                   .matrix();
  }
  return y;
}

template <typename T>
Matrix<T> LayerNorm<T>::backward(const Matrix<T>& x, const Matrix<T>& dy) {
  const auto n = static_cast<T>(x.cols());
  Matrix<T> dx(x.rows(), x.cols());
  for (Eigen::Index r = 0; r < x.rows(); ++r) {
    const T mean = x.row(r).sum() / n;
    const T var = (x.row(r).array() - mean).square().sum() / n;
    const T inv = T(1) / std::sqrt(var + static_cast<T>(eps));
    const auto xhat = ((x.row(r).array() - mean) * inv).eval();
    gamma.grad.row(0).array() += dy.row(r).array() * xhat;
    beta.grad.row(0).array() += dy.row(r).array();
    const auto dxhat = (dy.row(r).array() * gamma.value.row(0).array()).eval();
    const T mean_dxhat = dxhat.sum() / n;
    const T mean_dxhat_xhat = (dxhat * xhat).sum() / n;
    dx.row(r) = (inv * (dxhat - mean_dxhat - xhat * mean_dxhat_xhat)).matrix();
  }
  return dx;
}

namespace {

template <typename T>
T gelu(T x) {
  return T(0.5) * x * (T(1) + std::erf(x / std::numbers::sqrt2_v<T>));
}

template <typename T>
T gelu_grad(T x) {
  const T cdf = T(0.5) * (T(1) + std::erf(x / std::numbers::sqrt2_v<T>));
  const T pdf = std::exp(T(-0.5) * x * x) / std::sqrt(T(2) * std::numbers::pi_v<T>);
  return cdf + x * pdf;
}

}  // namespace

template <typename T>
Matrix<T> activate(Activation a, const Matrix<T>& pre) {
  if (a == Activation::Relu) return pre.cwiseMax(T(0));
  return pre.unaryExpr([](T v) { return gelu(v); });
}

template <typename T>
Matrix<T> activate_backward(Activation a, const Matrix<T>& pre, const Matrix<T>& dy) {
  if (a == Activation::Relu) {
    return dy.cwiseProduct(pre.unaryExpr([](T v) { return v > T(0) ? T(1) : T(0); }));
  }
  return dy.cwiseProduct(pre.unaryExpr([](T v) { return gelu_grad(v); }));
}

template <typename T>
Matrix<T> dropout_mask(Eigen::Index rows, Eigen::Index cols, double p, Rng& rng) {
  Matrix<T> mask(rows, cols);
  const T scale = static_cast<T>(1.0 / (1.0 - p));
  for (Eigen::Index i = 0; i < mask.size(); ++i) {
    mask.data()[i] = rng.uniform() < p ? T(0) : scale;
  }
  return mask;
}

#define HOPE_INSTANTIATE_NN(T)                                                     \
  template void fill_normal<T>(Matrix<T>&, Rng&, double);                          \
  template class Linear<T>;                                                        \
  template class LayerNorm<T>;                                                     \
  template Matrix<T> activate<T>(Activation, const Matrix<T>&);                    \
  template Matrix<T> activate_backward<T>(Activation, const Matrix<T>&, const Matrix<T>&); \
  template Matrix<T> dropout_mask<T>(Eigen::Index, Eigen::Index, double, Rng&);

HOPE_INSTANTIATE_NN(float)
HOPE_INSTANTIATE_NN(double)

}  // namespace hope::nn
