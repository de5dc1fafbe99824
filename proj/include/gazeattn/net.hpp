#pragma once

#include <Eigen/Core>
#include <algorithm>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "gazeattn/errors.hpp"
#include "gazeattn/rng.hpp"

namespace gazeattn::nn {

struct Shape {
  int h = 0;
  int w = 0;
  int c = 0;
  int count() const { return h * w * c; }
  bool operator==(const Shape&) const = default;
};

enum class LayerKind { Conv, ReLU, MaxPool, Dense };
enum class InitKind { HeNormal, XavierNormal };

/// Per-run scratch space: activations, gradients and layer-local buffers.
/// A Net itself is immutable during forward passes; every caller owns its
/// own Workspace, which is what makes concurrent prediction safe.
template <class S>
struct Workspace {
  std::vector<std::vector<S>> act;        // act[i] = input of layer i
  std::vector<std::vector<S>> grad;       // same shapes, training only
  std::vector<std::vector<int>> aux;      // max-pool argmax indices
  std::vector<std::vector<S>> cols;       // im2col patches per conv layer
  bool training = false;
};

template <class S>
using MatMap = Eigen::Map<
    Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>;
template <class S>
using ConstMatMap = Eigen::Map<
    const Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>;
template <class S>
using VecMap = Eigen::Map<Eigen::Matrix<S, Eigen::Dynamic, 1>>;
template <class S>
using ConstVecMap = Eigen::Map<const Eigen::Matrix<S, Eigen::Dynamic, 1>>;

template <class S>
class Layer {
 public:
  virtual ~Layer() = default;

  std::string name;
  bool frozen = false;
  Shape in_shape, out_shape;
  std::vector<S> w, b;    // parameters (empty for stateless layers)
  std::vector<S> gw, gb;  // gradient accumulators

  virtual LayerKind kind() const = 0;
  virtual void init(Rng&) {}
  virtual void forward(const S* x, S* y, Workspace<S>& ws,
                       int idx) const = 0;
  /// Accumulates gw/gb (when trainable) and writes dL/dx when need_dx.
  virtual void backward(const S* x, const S* y, const S* dy, S* dx,
                        bool need_dx, Workspace<S>& ws, int idx) = 0;
  virtual std::unique_ptr<Layer<S>> clone() const = 0;

  bool has_params() const { return !w.empty(); }
  bool trainable() const { return has_params() && !frozen; }
  /// Logical dimensions of the weight tensor, for serialization.
  virtual std::vector<int> weight_dims() const { return {}; }

 protected:
  void ensure_grad_buffers() {
    if (gw.size() != w.size()) gw.assign(w.size(), S(0));
    if (gb.size() != b.size()) gb.assign(b.size(), S(0));
  }
};

/// 2-D convolution over interleaved HWC maps, implemented as im2col + GEMM.
template <class S>
class Conv2d final : public Layer<S> {
 public:
  Conv2d(Shape in, int out_channels, int kernel, int stride, int pad,
         std::string name_, InitKind init_kind = InitKind::HeNormal)
      : kernel_(kernel), stride_(stride), pad_(pad), init_kind_(init_kind) {
    this->name = std::move(name_);
    this->in_shape = in;
    this->out_shape = {(in.h + 2 * pad - kernel) / stride + 1,
                       (in.w + 2 * pad - kernel) / stride + 1, out_channels};
    this->w.assign(static_cast<std::size_t>(patch_size()) * out_channels,
                   S(0));
    this->b.assign(out_channels, S(0));
  }

  LayerKind kind() const override { return LayerKind::Conv; }
  int kernel() const { return kernel_; }
  int patch_size() const { return kernel_ * kernel_ * this->in_shape.c; }

  std::vector<int> weight_dims() const override {
    return {kernel_, kernel_, this->in_shape.c, this->out_shape.c};
  }

  void init(Rng& rng) override {
    const double fan_in = patch_size();
    const double std_dev = init_kind_ == InitKind::HeNormal
                               ? std::sqrt(2.0 / fan_in)
                               : std::sqrt(1.0 / fan_in);
    for (auto& v : this->w) v = static_cast<S>(rng.normal() * std_dev);
    std::fill(this->b.begin(), this->b.end(), S(0));
  }

  void forward(const S* x, S* y, Workspace<S>& ws, int idx) const override {
    const int rows = this->out_shape.h * this->out_shape.w;
    auto& cols = ws.cols[idx];
    cols.resize(static_cast<std::size_t>(rows) * patch_size());
    im2col(x, cols.data());
    ConstMatMap<S> c(cols.data(), rows, patch_size());
    ConstMatMap<S> wm(this->w.data(), patch_size(), this->out_shape.c);
    MatMap<S> ym(y, rows, this->out_shape.c);
    ym.noalias() = c * wm;
    ConstVecMap<S> bv(this->b.data(), this->out_shape.c);
    ym.rowwise() += bv.transpose();
  }

  void backward(const S* /*x*/, const S* /*y*/, const S* dy, S* dx,
                bool need_dx, Workspace<S>& ws, int idx) override {
    const int rows = this->out_shape.h * this->out_shape.w;
    const auto& cols = ws.cols[idx];  // patches from the forward pass
    ConstMatMap<S> dym(dy, rows, this->out_shape.c);
    if (this->trainable()) {
      this->ensure_grad_buffers();
      ConstMatMap<S> c(cols.data(), rows, patch_size());
      MatMap<S> gwm(this->gw.data(), patch_size(), this->out_shape.c);
      gwm.noalias() += c.transpose() * dym;
      VecMap<S> gbv(this->gb.data(), this->out_shape.c);
      gbv.noalias() += dym.colwise().sum().transpose();
    }
    if (need_dx) {
      auto& dcols = ws.cols[idx];  // reuse: patches are no longer needed
      std::vector<S> tmp(static_cast<std::size_t>(rows) * patch_size());
      ConstMatMap<S> wm(this->w.data(), patch_size(), this->out_shape.c);
      MatMap<S> dcm(tmp.data(), rows, patch_size());
      dcm.noalias() = dym * wm.transpose();
      std::fill_n(dx, this->in_shape.count(), S(0));
      col2im(tmp.data(), dx);
      (void)dcols;
    }
  }

  std::unique_ptr<Layer<S>> clone() const override {
    return std::make_unique<Conv2d<S>>(*this);
  }

 private:
  void im2col(const S* x, S* cols) const {
    const Shape& in = this->in_shape;
    const Shape& out = this->out_shape;
    S* dst = cols;
    for (int oy = 0; oy < out.h; ++oy) {
      for (int ox = 0; ox < out.w; ++ox) {
        for (int ky = 0; ky < kernel_; ++ky) {
          const int iy = oy * stride_ - pad_ + ky;
          for (int kx = 0; kx < kernel_; ++kx) {
            const int ix = ox * stride_ - pad_ + kx;
            if (iy < 0 || iy >= in.h || ix < 0 || ix >= in.w) {
              std::fill_n(dst, in.c, S(0));
            } else {
              const S* src = x + (static_cast<std::size_t>(iy) * in.w + ix) *
                                     in.c;
              std::copy_n(src, in.c, dst);
            }
            dst += in.c;
          }
        }
      }
    }
  }

  void col2im(const S* cols, S* dx) const {
    const Shape& in = this->in_shape;
    const Shape& out = this->out_shape;
    const S* src = cols;
    for (int oy = 0; oy < out.h; ++oy) {
      for (int ox = 0; ox < out.w; ++ox) {
        for (int ky = 0; ky < kernel_; ++ky) {
          const int iy = oy * stride_ - pad_ + ky;
          for (int kx = 0; kx < kernel_; ++kx) {
            const int ix = ox * stride_ - pad_ + kx;
            if (iy >= 0 && iy < in.h && ix >= 0 && ix < in.w) {
              S* dst = dx + (static_cast<std::size_t>(iy) * in.w + ix) * in.c;
              for (int c = 0; c < in.c; ++c) dst[c] += src[c];
            }
            src += in.c;
          }
        }
      }
    }
  }

  int kernel_, stride_, pad_;
  InitKind init_kind_;
};

template <class S>
class ReLU final : public Layer<S> {
 public:
  explicit ReLU(Shape in, std::string name_) {
    this->name = std::move(name_);
    this->in_shape = in;
    this->out_shape = in;
  }
  LayerKind kind() const override { return LayerKind::ReLU; }

  void forward(const S* x, S* y, Workspace<S>&, int) const override {
    const int n = this->in_shape.count();
    for (int i = 0; i < n; ++i) y[i] = x[i] > S(0) ? x[i] : S(0);
  }
  void backward(const S*, const S* y, const S* dy, S* dx, bool need_dx,
                Workspace<S>&, int) override {
    if (!need_dx) return;
    const int n = this->in_shape.count();
    for (int i = 0; i < n; ++i) dx[i] = y[i] > S(0) ? dy[i] : S(0);
  }
  std::unique_ptr<Layer<S>> clone() const override {
    return std::make_unique<ReLU<S>>(*this);
  }
};

/// 2x2 max pooling, stride 2. Input sides must be even. Ties resolve to the
/// first element in scan order, keeping backward deterministic.
template <class S>
class MaxPool2 final : public Layer<S> {
 public:
  explicit MaxPool2(Shape in, std::string name_) {
    if (in.h % 2 != 0 || in.w % 2 != 0)
      throw InvalidConfig("max-pool input sides must be even");
    this->name = std::move(name_);
    this->in_shape = in;
    this->out_shape = {in.h / 2, in.w / 2, in.c};
  }
  LayerKind kind() const override { return LayerKind::MaxPool; }

  void forward(const S* x, S* y, Workspace<S>& ws, int idx) const override {
    const Shape& in = this->in_shape;
    const Shape& out = this->out_shape;
    auto& arg = ws.aux[idx];
    arg.resize(out.count());
    for (int oy = 0; oy < out.h; ++oy)
      for (int ox = 0; ox < out.w; ++ox)
        for (int c = 0; c < in.c; ++c) {
          int best = ((2 * oy) * in.w + 2 * ox) * in.c + c;
          S best_v = x[best];
          for (int dy = 0; dy < 2; ++dy)
            for (int dx = 0; dx < 2; ++dx) {
              const int i =
                  ((2 * oy + dy) * in.w + 2 * ox + dx) * in.c + c;
              if (x[i] > best_v) {
                best_v = x[i];
                best = i;
              }
            }
          y[(oy * out.w + ox) * in.c + c] = best_v;
          arg[(oy * out.w + ox) * in.c + c] = best;
        }
  }

  void backward(const S*, const S*, const S* dy, S* dx, bool need_dx,
                Workspace<S>& ws, int idx) override {
    if (!need_dx) return;
    std::fill_n(dx, this->in_shape.count(), S(0));
    const auto& arg = ws.aux[idx];
    const int n = this->out_shape.count();
    for (int i = 0; i < n; ++i) dx[arg[i]] += dy[i];
  }
  std::unique_ptr<Layer<S>> clone() const override {
    return std::make_unique<MaxPool2<S>>(*this);
  }
};

/// Fully connected layer over the flattened input.
template <class S>
class Dense final : public Layer<S> {
 public:
  Dense(Shape in, int units, std::string name_,
        InitKind init_kind = InitKind::HeNormal)
      : init_kind_(init_kind) {
    this->name = std::move(name_);
    this->in_shape = in;
    this->out_shape = {1, 1, units};
    this->w.assign(static_cast<std::size_t>(units) * in.count(), S(0));
    this->b.assign(units, S(0));
  }
  LayerKind kind() const override { return LayerKind::Dense; }

  std::vector<int> weight_dims() const override {
    return {this->out_shape.c, this->in_shape.count()};
  }

  void init(Rng& rng) override {
    const double fan_in = this->in_shape.count();
    const double std_dev = init_kind_ == InitKind::HeNormal
                               ? std::sqrt(2.0 / fan_in)
                               : std::sqrt(1.0 / fan_in);
    for (auto& v : this->w) v = static_cast<S>(rng.normal() * std_dev);
    std::fill(this->b.begin(), this->b.end(), S(0));
  }

  void forward(const S* x, S* y, Workspace<S>&, int) const override {
    const int n = this->in_shape.count();
    const int u = this->out_shape.c;
    ConstMatMap<S> wm(this->w.data(), u, n);
    ConstVecMap<S> xv(x, n);
    VecMap<S> yv(y, u);
    yv.noalias() = wm * xv;
    yv += ConstVecMap<S>(this->b.data(), u);
  }

  void backward(const S* x, const S*, const S* dy, S* dx, bool need_dx,
                Workspace<S>&, int) override {
    const int n = this->in_shape.count();
    const int u = this->out_shape.c;
    ConstVecMap<S> dyv(dy, u);
    if (this->trainable()) {
      this->ensure_grad_buffers();
      MatMap<S> gwm(this->gw.data(), u, n);
      ConstVecMap<S> xv(x, n);
      gwm.noalias() += dyv * xv.transpose();
      VecMap<S> gbv(this->gb.data(), u);
      gbv += dyv;
    }
    if (need_dx) {
      ConstMatMap<S> wm(this->w.data(), u, n);
      VecMap<S> dxv(dx, n);
      dxv.noalias() = wm.transpose() * dyv;
    }
  }
  std::unique_ptr<Layer<S>> clone() const override {
    return std::make_unique<Dense<S>>(*this);
  }

 private:
  InitKind init_kind_;
};

/// A plain sequential network, processing one sample at a time. Batching is
/// the training loop's concern (gradients accumulate across backward calls
/// until sgd_step).
template <class S>
class Net {
 public:
  Shape input_shape;
  std::vector<std::unique_ptr<Layer<S>>> layers;

  Net() = default;
  Net(Net&&) noexcept = default;
  Net& operator=(Net&&) noexcept = default;
  Net(const Net&) = delete;
  Net& operator=(const Net&) = delete;

  Net clone() const {
    Net copy;
    copy.input_shape = input_shape;
    copy.layers.reserve(layers.size());
    for (const auto& l : layers) copy.layers.push_back(l->clone());
    return copy;
  }

  Shape output_shape() const { return layers.back()->out_shape; }

  Layer<S>& add(std::unique_ptr<Layer<S>> layer) {
    layers.push_back(std::move(layer));
    return *layers.back();
  }

  Shape tail_shape() const {
    return layers.empty() ? input_shape : layers.back()->out_shape;
  }

  void init_params(std::uint64_t seed) {
    Rng rng(seed);
    for (auto& l : layers) l->init(rng);
  }

  Workspace<S> make_workspace(bool training) const {
    Workspace<S> ws;
    ws.training = training;
    ws.act.resize(layers.size() + 1);
    ws.act[0].resize(input_shape.count());
    for (std::size_t i = 0; i < layers.size(); ++i)
      ws.act[i + 1].resize(layers[i]->out_shape.count());
    if (training) {
      ws.grad.resize(layers.size() + 1);
      for (std::size_t i = 0; i <= layers.size(); ++i)
        ws.grad[i].resize(ws.act[i].size());
    }
    ws.aux.resize(layers.size());
    ws.cols.resize(layers.size());
    return ws;
  }

  /// Runs the network on ws.act[0]; returns the output activation.
  std::span<const S> forward(Workspace<S>& ws) const {
    for (std::size_t i = 0; i < layers.size(); ++i)
      layers[i]->forward(ws.act[i].data(), ws.act[i + 1].data(), ws,
                         static_cast<int>(i));
    return ws.act.back();
  }

  /// Backpropagates ws.grad.back() (dL/doutput), accumulating parameter
  /// gradients. Stops below the lowest trainable layer.
  void backward(Workspace<S>& ws) {
    int lowest = static_cast<int>(layers.size());
    for (int i = 0; i < static_cast<int>(layers.size()); ++i)
      if (layers[i]->trainable()) {
        lowest = i;
        break;
      }
    for (int i = static_cast<int>(layers.size()) - 1; i >= lowest; --i) {
      const bool need_dx = i > lowest;
      layers[i]->backward(ws.act[i].data(), ws.act[i + 1].data(),
                          ws.grad[i + 1].data(),
                          need_dx ? ws.grad[i].data() : nullptr, need_dx, ws,
                          i);
    }
  }

  void zero_grad() {
    for (auto& l : layers) {
      std::fill(l->gw.begin(), l->gw.end(), S(0));
      std::fill(l->gb.begin(), l->gb.end(), S(0));
    }
  }

  void sgd_step(S lr) {
    for (auto& l : layers) {
      if (!l->trainable() || l->gw.empty()) continue;
      for (std::size_t i = 0; i < l->w.size(); ++i) l->w[i] -= lr * l->gw[i];
      for (std::size_t i = 0; i < l->b.size(); ++i) l->b[i] -= lr * l->gb[i];
    }
  }

  std::int64_t param_count() const {
    std::int64_t n = 0;
    for (const auto& l : layers)
      n += static_cast<std::int64_t>(l->w.size()) +
           static_cast<std::int64_t>(l->b.size());
    return n;
  }

  Layer<S>* find(const std::string& name) const {
    for (const auto& l : layers)
      if (l->name == name) return l.get();
    return nullptr;
  }
};

/// Copies parameters (and frozen flags) between same-architecture nets of
/// possibly different scalar types; used by the finite-difference checks.
template <class A, class B>
void copy_params(const Net<A>& src, Net<B>& dst) {
  if (src.layers.size() != dst.layers.size())
    throw ShapeError("copy_params: layer count mismatch");
  for (std::size_t i = 0; i < src.layers.size(); ++i) {
    const auto& a = *src.layers[i];
    auto& b = *dst.layers[i];
    if (a.w.size() != b.w.size() || a.b.size() != b.b.size())
      throw ShapeError("copy_params: parameter shape mismatch at " + a.name);
    std::transform(a.w.begin(), a.w.end(), b.w.begin(),
                   [](A v) { return static_cast<B>(v); });
    std::transform(a.b.begin(), a.b.end(), b.b.begin(),
                   [](A v) { return static_cast<B>(v); });
    b.frozen = a.frozen;
  }
}

}  // namespace gazeattn::nn
