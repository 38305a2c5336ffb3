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

#include "hope/optimizer.hpp"

#include <cmath>

namespace hope {

template <typename T>
void AdamW<T>::step(const std::function<void(const ParameterVisitor<T>&)>& visit_all) {
  ++t_;
  const double bc1 = 1.0 - std::pow(s_.beta1, static_cast<double>(t_));
  const double bc2 = 1.0 - std::pow(s_.beta2, static_cast<double>(t_));
  const T lr = static_cast<T>(s_.learning_rate);
  const T b1 = static_cast<T>(s_.beta1);
  const T b2 = static_cast<T>(s_.beta2);
  const T step_size = static_cast<T>(s_.learning_rate / bc1);
  const T denom_scale = static_cast<T>(1.0 / std::sqrt(bc2));
  const T eps = static_cast<T>(s_.eps);
  const T decay = T(1) - lr * static_cast<T>(s_.weight_decay);
  visit_all([&](const std::string& name, nn::Parameter<T>& p) {
    auto [it, fresh] = state_.try_emplace(name);
    State& st = it->second;
    if (fresh) {
      st.m = nn::Matrix<T>::Zero(p.value.rows(), p.value.cols());
      st.v = nn::Matrix<T>::Zero(p.value.rows(), p.value.cols());
    }
    p.value *= decay;
    st.m = b1 * st.m + (T(1) - b1) * p.grad;
    st.v = b2 * st.v + (T(1) - b2) * p.grad.cwiseProduct(p.grad);
    p.value.array() -= step_size * st.m.array() / (st.v.array().sqrt() * denom_scale + eps);
  });
}

template <typename T>
void RmsProp<T>::step(const std::function<void(const ParameterVisitor<T>&)>& visit_all) {
  const T lr = static_cast<T>(s_.learning_rate);
  const T alpha = static_cast<T>(s_.alpha);
  const T eps = static_cast<T>(s_.eps);
  visit_all([&](const std::string& name, nn::Parameter<T>& p) {
    auto [it, fresh] = square_avg_.try_emplace(name);
    if (fresh) it->second = nn::Matrix<T>::Zero(p.value.rows(), p.value.cols());
    nn::Matrix<T>& v = it->second;
    v = alpha * v + (T(1) - alpha) * p.grad.cwiseProduct(p.grad);
    p.value.array() -= lr * p.grad.array() / (v.array().sqrt() + eps);
  });
}

template <typename T>
std::unique_ptr<Optimizer<T>> make_optimizer(OptimizerKind kind, const OptimizerSettings& s) {
  if (kind == OptimizerKind::AdamW) return std::make_unique<AdamW<T>>(s);
  return std::make_unique<RmsProp<T>>(s);
}

template <typename T>
double clip_grad_norm(const std::function<void(const ParameterVisitor<T>&)>& visit_all,
                      double max_norm) {
  double sq = 0.0;
  visit_all([&](const std::string&, nn::Parameter<T>& p) {
    sq += static_cast<double>(p.grad.squaredNorm());
  });
  const double norm = std::sqrt(sq);
  if (norm > max_norm) {
    const T scale = static_cast<T>(max_norm / (norm + 1e-6));
    visit_all([&](const std::string&, nn::Parameter<T>& p) { p.grad *= scale; });
  }
  return norm;
}

template class AdamW<float>;
template class AdamW<double>;
template class RmsProp<float>;
template class RmsProp<double>;
template std::unique_ptr<Optimizer<float>> make_optimizer<float>(OptimizerKind,
                                                                 const OptimizerSettings&);
template std::unique_ptr<Optimizer<double>> make_optimizer<double>(OptimizerKind,
                                                                   const OptimizerSettings&);
template double clip_grad_norm<float>(const std::function<void(const ParameterVisitor<float>&)>&,
                                      double);
template double clip_grad_norm<double>(const std::function<void(const ParameterVisitor<double>&)>&,
                                       double);

}  // namespace hope
