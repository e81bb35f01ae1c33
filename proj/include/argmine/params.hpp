#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace argmine {

// Flat view over one trainable tensor and its gradient accumulator. Views
// stay valid for the lifetime of the owning module and keep a stable order,
// which the optimizer and snapshot/restore rely on.
struct ParamView {
  std::string name;
  double* value = nullptr;
  double* grad = nullptr;
  std::size_t size = 0;
};

inline std::size_t total_size(const std::vector<ParamView>& views) {
  std::size_t n = 0;
  for (const auto& v : views) n += v.size;
  return n;
}

inline void zero_grads(const std::vector<ParamView>& views) {
  for (const auto& v : views)
    for (std::size_t i = 0; i < v.size; ++i) v.grad[i] = 0.0;
}

inline std::vector<double> snapshot(const std::vector<ParamView>& views) {
  std::vector<double> out;
  out.reserve(total_size(views));
  for (const auto& v : views) out.insert(out.end(), v.value, v.value + v.size);
  return out;
}

inline void restore(const std::vector<ParamView>& views, const std::vector<double>& saved) {
  std::size_t offset = 0;
  for (const auto& v : views) {
    for (std::size_t i = 0; i < v.size; ++i) v.value[i] = saved[offset + i];
    offset += v.size;
  }
}

}  // namespace argmine
