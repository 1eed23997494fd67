// Copyright 2026 The sgnet Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "sgnet/ops.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Core>
#include <fmt/format.h>

#include "sgnet/errors.hpp"

namespace sgnet::ops {
namespace {

template <typename T>
using RowMat = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
template <typename T>
using MatMap = Eigen::Map<RowMat<T>>;
template <typename T>
using ConstMatMap = Eigen::Map<const RowMat<T>>;
template <typename T>
using NodePtr = std::shared_ptr<detail::TensorNode<T>>;

template <typename T>
bool tracks(std::initializer_list<const BasicTensor<T>*> inputs) {
  if (!grad_enabled()) return false;
  return std::any_of(inputs.begin(), inputs.end(),
                     [](const BasicTensor<T>* t) { return t->requires_grad(); });
}

// Wraps a forward result. When `track` is set the result joins the graph
// with `fn` as its backward closure.
template <typename T, typename Fn>
BasicTensor<T> make_result(Shape shape, std::vector<T> data, bool track,
                           std::vector<NodePtr<T>> inputs, Fn&& fn) {
  BasicTensor<T> out(std::move(shape), std::move(data), false);
  if (track) {
    auto& node = *out.node();
    node.requires_grad = true;
    node.inputs = std::move(inputs);
    node.backward_fn = std::forward<Fn>(fn);
  }
  return out;
}

// Gradient sink for an input, empty when the input does not need one.
template <typename T>
std::span<T> sink(const NodePtr<T>& node) {
  if (!node->requires_grad) return {};
  return node->grad_buffer();
}

void require_rank(const Shape& s, std::size_t rank, const char* what) {
  if (s.size() != rank) {
    throw ShapeError(fmt::format("{} expects a rank-{} tensor, got {}", what, rank, shape_str(s)));
  }
}

struct ConvGeometry {
  std::size_t n, cin, h, w, cout, kh, kw, stride, pad, ho, wo;
  std::size_t patch() const { return cin * kh * kw; }
  std::size_t positions() const { return ho * wo; }
};

template <typename T>
void im2col(const T* x, const ConvGeometry& g, T* col) {
  const auto p = g.positions();
  for (std::size_t c = 0; c < g.cin; ++c) {
    for (std::size_t ki = 0; ki < g.kh; ++ki) {
      for (std::size_t kj = 0; kj < g.kw; ++kj) {
        T* row = col + ((c * g.kh + ki) * g.kw + kj) * p;
        for (std::size_t oy = 0; oy < g.ho; ++oy) {
          const auto iy = static_cast<std::ptrdiff_t>(oy * g.stride + ki) -
                          static_cast<std::ptrdiff_t>(g.pad);
          T* dst = row + oy * g.wo;
          if (iy < 0 || iy >= static_cast<std::ptrdiff_t>(g.h)) {
            std::fill(dst, dst + g.wo, T(0));
            continue;
          }
          const T* src = x + (c * g.h + static_cast<std::size_t>(iy)) * g.w;
          for (std::size_t ox = 0; ox < g.wo; ++ox) {
            const auto ix = static_cast<std::ptrdiff_t>(ox * g.stride + kj) -
                            static_cast<std::ptrdiff_t>(g.pad);
            dst[ox] = (ix < 0 || ix >= static_cast<std::ptrdiff_t>(g.w)) ? T(0) : src[ix];
          }
        }
      }
    }
  }
}

template <typename T>
void col2im_add(const T* col, const ConvGeometry& g, T* dx) {
  const auto p = g.positions();
  for (std::size_t c = 0; c < g.cin; ++c) {
    for (std::size_t ki = 0; ki < g.kh; ++ki) {
      for (std::size_t kj = 0; kj < g.kw; ++kj) {
        const T* row = col + ((c * g.kh + ki) * g.kw + kj) * p;
        for (std::size_t oy = 0; oy < g.ho; ++oy) {
          const auto iy = static_cast<std::ptrdiff_t>(oy * g.stride + ki) -
                          static_cast<std::ptrdiff_t>(g.pad);
          if (iy < 0 || iy >= static_cast<std::ptrdiff_t>(g.h)) continue;
          T* dst = dx + (c * g.h + static_cast<std::size_t>(iy)) * g.w;
          const T* src = row + oy * g.wo;
          for (std::size_t ox = 0; ox < g.wo; ++ox) {
            const auto ix = static_cast<std::ptrdiff_t>(ox * g.stride + kj) -
                            static_cast<std::ptrdiff_t>(g.pad);
            if (ix >= 0 && ix < static_cast<std::ptrdiff_t>(g.w)) dst[ix] += src[ox];
          }
        }
      }
    }
  }
}

}  // namespace

template <typename T>
BasicTensor<T> conv2d(const BasicTensor<T>& input, const BasicTensor<T>& weight,
                      const BasicTensor<T>& bias, std::size_t stride, std::size_t padding) {
  const auto& xs = input.shape();
  const auto& ws = weight.shape();
  require_rank(xs, 4, "conv2d input");
  require_rank(ws, 4, "conv2d weight");
  if (xs[1] != ws[1]) {
    throw ShapeError(fmt::format("conv2d channel mismatch: input {} vs weight {}", shape_str(xs),
                                 shape_str(ws)));
  }
  if (bias.shape() != Shape{ws[0]}) {
    throw ShapeError(fmt::format("conv2d bias {} does not match weight {}",
                                 shape_str(bias.shape()), shape_str(ws)));
  }
  if (stride == 0) throw ShapeError("conv2d stride must be positive");
  if (ws[2] > xs[2] + 2 * padding || ws[3] > xs[3] + 2 * padding) {
    throw ShapeError(fmt::format("conv2d kernel {} larger than padded input {} (padding {})",
                                 shape_str(ws), shape_str(xs), padding));
  }

  ConvGeometry g{xs[0], xs[1], xs[2], xs[3], ws[0], ws[2], ws[3], stride, padding, 0, 0};
  g.ho = window_extent(g.h, g.kh, stride, padding);
  g.wo = window_extent(g.w, g.kw, stride, padding);
  const auto k = g.patch();
  const auto p = g.positions();

  std::vector<T> out(g.n * g.cout * p);
  std::vector<T> col(k * p);
  ConstMatMap<T> wm(weight.data().data(), g.cout, k);
  Eigen::Map<const Eigen::Matrix<T, Eigen::Dynamic, 1>> bv(bias.data().data(), g.cout);
  const T* x = input.data().data();
  for (std::size_t n = 0; n < g.n; ++n) {
    im2col(x + n * g.cin * g.h * g.w, g, col.data());
    ConstMatMap<T> cm(col.data(), k, p);
    MatMap<T> om(out.data() + n * g.cout * p, g.cout, p);
    om.noalias() = wm * cm;
    om.colwise() += bv;
  }

  const bool track = tracks<T>({&input, &weight, &bias});
  auto xn = input.node();
  auto wn = weight.node();
  auto bn = bias.node();
  return make_result<T>(
      Shape{g.n, g.cout, g.ho, g.wo}, std::move(out), track, {xn, wn, bn},
      [xn, wn, bn, g](std::span<const T> gout) {
        const auto k = g.patch();
        const auto p = g.positions();
        auto dx = sink(xn);
        auto dw = sink(wn);
        auto db = sink(bn);
        std::vector<T> col(k * p);
        ConstMatMap<T> wm(wn->data.data(), g.cout, k);
        for (std::size_t n = 0; n < g.n; ++n) {
          ConstMatMap<T> gm(gout.data() + n * g.cout * p, g.cout, p);
          if (!dw.empty()) {
            im2col(xn->data.data() + n * g.cin * g.h * g.w, g, col.data());
            ConstMatMap<T> cm(col.data(), k, p);
            MatMap<T> dwm(dw.data(), g.cout, k);
            dwm.noalias() += gm * cm.transpose();
          }
          if (!db.empty()) {
            for (std::size_t c = 0; c < g.cout; ++c) db[c] += gm.row(c).sum();
          }
          if (!dx.empty()) {
            MatMap<T> dcol(col.data(), k, p);
            dcol.noalias() = wm.transpose() * gm;
            col2im_add(col.data(), g, dx.data() + n * g.cin * g.h * g.w);
          }
        }
      });
}

template <typename T>
BasicTensor<T> maxpool2d(const BasicTensor<T>& input, std::size_t kernel, std::size_t stride) {
  const auto& xs = input.shape();
  require_rank(xs, 4, "maxpool2d input");
  if (kernel == 0 || stride == 0) throw ShapeError("maxpool2d kernel and stride must be positive");
  if (kernel > xs[2] || kernel > xs[3]) {
    throw ShapeError(fmt::format("maxpool2d kernel {} larger than spatial extent of {}", kernel,
                                 shape_str(xs)));
  }
  const auto n = xs[0], c = xs[1], h = xs[2], w = xs[3];
  const auto ho = window_extent(h, kernel, stride, 0);
  const auto wo = window_extent(w, kernel, stride, 0);
  const bool track = tracks<T>({&input});

  std::vector<T> out(n * c * ho * wo);
  std::vector<std::uint32_t> arg(track ? out.size() : 0);
  const T* x = input.data().data();
  std::size_t o = 0;
  for (std::size_t plane = 0; plane < n * c; ++plane) {
    const T* xp = x + plane * h * w;
    for (std::size_t oy = 0; oy < ho; ++oy) {
      for (std::size_t ox = 0; ox < wo; ++ox, ++o) {
        std::size_t best = (oy * stride) * w + ox * stride;
        for (std::size_t ky = 0; ky < kernel; ++ky) {
          for (std::size_t kx = 0; kx < kernel; ++kx) {
            const auto idx = (oy * stride + ky) * w + ox * stride + kx;
            if (xp[idx] > xp[best]) best = idx;
          }
        }
        out[o] = xp[best];
        if (track) arg[o] = static_cast<std::uint32_t>(plane * h * w + best);
      }
    }
  }
  auto xn = input.node();
  return make_result<T>(Shape{n, c, ho, wo}, std::move(out), track, {xn},
                        [xn, arg = std::move(arg)](std::span<const T> gout) {
                          auto dx = sink(xn);
                          for (std::size_t i = 0; i < gout.size(); ++i) dx[arg[i]] += gout[i];
                        });
}

template <typename T>
BasicTensor<T> relu(const BasicTensor<T>& input) {
  auto x = input.data();
  std::vector<T> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] > T(0) ? x[i] : T(0);
  auto xn = input.node();
  return make_result<T>(input.shape(), std::move(out), tracks<T>({&input}), {xn},
                        [xn](std::span<const T> gout) {
                          auto dx = sink(xn);
                          const auto& xv = xn->data;
                          for (std::size_t i = 0; i < gout.size(); ++i) {
                            if (xv[i] > T(0)) dx[i] += gout[i];
                          }
                        });
}

template <typename T>
BasicTensor<T> linear(const BasicTensor<T>& input, const BasicTensor<T>& weight,
                      const BasicTensor<T>& bias) {
  const auto& xs = input.shape();
  const auto& ws = weight.shape();
  require_rank(xs, 2, "linear input");
  require_rank(ws, 2, "linear weight");
  if (xs[1] != ws[1]) {
    throw ShapeError(fmt::format("linear dimension mismatch: input {} vs weight {}", shape_str(xs),
                                 shape_str(ws)));
  }
  if (bias.shape() != Shape{ws[0]}) {
    throw ShapeError(fmt::format("linear bias {} does not match weight {}",
                                 shape_str(bias.shape()), shape_str(ws)));
  }
  const auto n = xs[0], din = xs[1], dout = ws[0];
  std::vector<T> out(n * dout);
  ConstMatMap<T> xm(input.data().data(), n, din);
  ConstMatMap<T> wm(weight.data().data(), dout, din);
  Eigen::Map<const Eigen::Matrix<T, 1, Eigen::Dynamic>> bv(bias.data().data(), dout);
  MatMap<T> om(out.data(), n, dout);
  om.noalias() = xm * wm.transpose();
  om.rowwise() += bv;

  auto xn = input.node();
  auto wn = weight.node();
  auto bn = bias.node();
  return make_result<T>(Shape{n, dout}, std::move(out), tracks<T>({&input, &weight, &bias}),
                        {xn, wn, bn}, [xn, wn, bn, n, din, dout](std::span<const T> gout) {
                          ConstMatMap<T> gm(gout.data(), n, dout);
                          if (auto dx = sink(xn); !dx.empty()) {
                            MatMap<T> dxm(dx.data(), n, din);
                            dxm.noalias() += gm * ConstMatMap<T>(wn->data.data(), dout, din);
                          }
                          if (auto dw = sink(wn); !dw.empty()) {
                            MatMap<T> dwm(dw.data(), dout, din);
                            dwm.noalias() += gm.transpose() * ConstMatMap<T>(xn->data.data(), n, din);
                          }
                          if (auto db = sink(bn); !db.empty()) {
                            for (std::size_t j = 0; j < dout; ++j) db[j] += gm.col(j).sum();
                          }
                        });
}

template <typename T>
BasicTensor<T> flatten(const BasicTensor<T>& input) {
  const auto& xs = input.shape();
  if (xs.size() < 2) throw ShapeError("flatten expects rank >= 2, got " + shape_str(xs));
  const auto n = xs[0];
  const auto rest = input.numel() / n;
  std::vector<T> out(input.data().begin(), input.data().end());
  auto xn = input.node();
  return make_result<T>(Shape{n, rest}, std::move(out), tracks<T>({&input}), {xn},
                        [xn](std::span<const T> gout) {
                          auto dx = sink(xn);
                          for (std::size_t i = 0; i < gout.size(); ++i) dx[i] += gout[i];
                        });
}

template <typename T>
BasicTensor<T> concat_channels(const BasicTensor<T>& a, const BasicTensor<T>& b) {
  const auto& as = a.shape();
  const auto& bs = b.shape();
  require_rank(as, 4, "concat_channels lhs");
  require_rank(bs, 4, "concat_channels rhs");
  if (as[0] != bs[0] || as[2] != bs[2] || as[3] != bs[3]) {
    throw ShapeError(fmt::format("concat_channels batch/spatial mismatch: {} vs {}", shape_str(as),
                                 shape_str(bs)));
  }
  const auto n = as[0], ca = as[1], cb = bs[1], hw = as[2] * as[3];
  std::vector<T> out(n * (ca + cb) * hw);
  auto ad = a.data();
  auto bd = b.data();
  for (std::size_t i = 0; i < n; ++i) {
    std::copy_n(ad.data() + i * ca * hw, ca * hw, out.data() + i * (ca + cb) * hw);
    std::copy_n(bd.data() + i * cb * hw, cb * hw, out.data() + (i * (ca + cb) + ca) * hw);
  }
  auto an = a.node();
  auto bn = b.node();
  return make_result<T>(Shape{n, ca + cb, as[2], as[3]}, std::move(out), tracks<T>({&a, &b}),
                        {an, bn}, [an, bn, n, ca, cb, hw](std::span<const T> gout) {
                          auto da = sink(an);
                          auto db = sink(bn);
                          for (std::size_t i = 0; i < n; ++i) {
                            const T* g = gout.data() + i * (ca + cb) * hw;
                            if (!da.empty()) {
                              for (std::size_t j = 0; j < ca * hw; ++j) da[i * ca * hw + j] += g[j];
                            }
                            if (!db.empty()) {
                              for (std::size_t j = 0; j < cb * hw; ++j) {
                                db[i * cb * hw + j] += g[ca * hw + j];
                              }
                            }
                          }
                        });
}

template <typename T>
BasicTensor<T> slice_channels(const BasicTensor<T>& input, std::size_t begin, std::size_t end) {
  const auto& xs = input.shape();
  require_rank(xs, 4, "slice_channels input");
  if (begin >= end || end > xs[1]) {
    throw ShapeError(fmt::format("slice_channels range [{},{}) invalid for {}", begin, end,
                                 shape_str(xs)));
  }
  const auto n = xs[0], c = xs[1], hw = xs[2] * xs[3], m = end - begin;
  std::vector<T> out(n * m * hw);
  auto xd = input.data();
  for (std::size_t i = 0; i < n; ++i) {
    std::copy_n(xd.data() + (i * c + begin) * hw, m * hw, out.data() + i * m * hw);
  }
  auto xn = input.node();
  return make_result<T>(Shape{n, m, xs[2], xs[3]}, std::move(out), tracks<T>({&input}), {xn},
                        [xn, n, c, hw, m, begin](std::span<const T> gout) {
                          auto dx = sink(xn);
                          for (std::size_t i = 0; i < n; ++i) {
                            for (std::size_t j = 0; j < m * hw; ++j) {
                              dx[(i * c + begin) * hw + j] += gout[i * m * hw + j];
                            }
                          }
                        });
}

template <typename T>
BasicTensor<T> slice_columns(const BasicTensor<T>& input, std::size_t begin, std::size_t end) {
  const auto& xs = input.shape();
  require_rank(xs, 2, "slice_columns input");
  if (begin >= end || end > xs[1]) {
    throw ShapeError(fmt::format("slice_columns range [{},{}) invalid for {}", begin, end,
                                 shape_str(xs)));
  }
  const auto n = xs[0], k = xs[1], m = end - begin;
  std::vector<T> out(n * m);
  auto xd = input.data();
  for (std::size_t i = 0; i < n; ++i) std::copy_n(xd.data() + i * k + begin, m, out.data() + i * m);
  auto xn = input.node();
  return make_result<T>(Shape{n, m}, std::move(out), tracks<T>({&input}), {xn},
                        [xn, n, k, m, begin](std::span<const T> gout) {
                          auto dx = sink(xn);
                          for (std::size_t i = 0; i < n; ++i) {
                            for (std::size_t j = 0; j < m; ++j) dx[i * k + begin + j] += gout[i * m + j];
                          }
                        });
}

namespace {

// Row-wise stabilised softmax over the last axis.
template <typename T>
void softmax_rows(std::span<const T> x, std::size_t k, std::span<T> y) {
  const auto rows = x.size() / k;
  for (std::size_t r = 0; r < rows; ++r) {
    const T* xr = x.data() + r * k;
    T* yr = y.data() + r * k;
    const T m = *std::max_element(xr, xr + k);
    T total = 0;
    for (std::size_t j = 0; j < k; ++j) {
      yr[j] = std::exp(xr[j] - m);
      total += yr[j];
    }
    for (std::size_t j = 0; j < k; ++j) yr[j] /= total;
  }
}

}  // namespace

template <typename T>
BasicTensor<T> softmax(const BasicTensor<T>& logits) {
  const auto& xs = logits.shape();
  const auto k = xs.back();
  std::vector<T> out(logits.numel());
  softmax_rows<T>(logits.data(), k, out);
  auto xn = logits.node();
  const bool track = tracks<T>({&logits});
  std::vector<T> saved = track ? out : std::vector<T>{};
  return make_result<T>(xs, std::move(out), track, {xn},
                        [xn, k, y = std::move(saved)](std::span<const T> gout) {
                          auto dx = sink(xn);
                          for (std::size_t r = 0; r < y.size() / k; ++r) {
                            const T* yr = y.data() + r * k;
                            const T* gr = gout.data() + r * k;
                            T dot = 0;
                            for (std::size_t j = 0; j < k; ++j) dot += gr[j] * yr[j];
                            for (std::size_t j = 0; j < k; ++j) dx[r * k + j] += yr[j] * (gr[j] - dot);
                          }
                        });
}

template <typename T>
BasicTensor<T> cross_entropy(const BasicTensor<T>& logits, std::span<const int> targets) {
  const auto& xs = logits.shape();
  require_rank(xs, 2, "cross_entropy logits");
  const auto n = xs[0], k = xs[1];
  if (targets.size() != n) {
    throw ValidationError(fmt::format("cross_entropy got {} targets for {} rows", targets.size(), n));
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (targets[i] < 0 || static_cast<std::size_t>(targets[i]) >= k) {
      throw ValidationError(fmt::format("cross_entropy target {} at position {} outside [0,{})",
                                        targets[i], i, k));
    }
  }
  auto x = logits.data();
  std::vector<T> prob(x.size());
  T total = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const T* xr = x.data() + i * k;
    const T m = *std::max_element(xr, xr + k);
    T z = 0;
    for (std::size_t j = 0; j < k; ++j) {
      prob[i * k + j] = std::exp(xr[j] - m);
      z += prob[i * k + j];
    }
    for (std::size_t j = 0; j < k; ++j) prob[i * k + j] /= z;
    total += (m + std::log(z)) - xr[targets[i]];
  }
  const T loss = total / static_cast<T>(n);
  auto xn = logits.node();
  std::vector<int> tg(targets.begin(), targets.end());
  return make_result<T>(Shape{1}, std::vector<T>{loss}, tracks<T>({&logits}), {xn},
                        [xn, n, k, prob = std::move(prob), tg = std::move(tg)](std::span<const T> gout) {
                          auto dx = sink(xn);
                          const T g = gout[0] / static_cast<T>(n);
                          for (std::size_t i = 0; i < n; ++i) {
                            for (std::size_t j = 0; j < k; ++j) {
                              const T onehot = static_cast<int>(j) == tg[i] ? T(1) : T(0);
                              dx[i * k + j] += g * (prob[i * k + j] - onehot);
                            }
                          }
                        });
}

template <typename T>
BasicTensor<T> scale(const BasicTensor<T>& input, T factor) {
  auto x = input.data();
  std::vector<T> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = factor * x[i];
  auto xn = input.node();
  return make_result<T>(input.shape(), std::move(out), tracks<T>({&input}), {xn},
                        [xn, factor](std::span<const T> gout) {
                          auto dx = sink(xn);
                          for (std::size_t i = 0; i < gout.size(); ++i) dx[i] += factor * gout[i];
                        });
}

template <typename T>
BasicTensor<T> add(const BasicTensor<T>& a, const BasicTensor<T>& b) {
  return weighted_sum(a, T(1), b, T(1));
}

template <typename T>
BasicTensor<T> weighted_sum(const BasicTensor<T>& a, T wa, const BasicTensor<T>& b, T wb) {
  if (a.shape() != b.shape()) {
    throw ShapeError(fmt::format("elementwise shape mismatch: {} vs {}", shape_str(a.shape()),
                                 shape_str(b.shape())));
  }
  auto ad = a.data();
  auto bd = b.data();
  std::vector<T> out(ad.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = wa * ad[i] + wb * bd[i];
  auto an = a.node();
  auto bn = b.node();
  return make_result<T>(a.shape(), std::move(out), tracks<T>({&a, &b}), {an, bn},
                        [an, bn, wa, wb](std::span<const T> gout) {
                          auto da = sink(an);
                          auto db = sink(bn);
                          for (std::size_t i = 0; i < gout.size(); ++i) {
                            if (!da.empty()) da[i] += wa * gout[i];
                            if (!db.empty()) db[i] += wb * gout[i];
                          }
                        });
}

template <typename T>
BasicTensor<T> sum(const BasicTensor<T>& input) {
  T total = 0;
  for (T v : input.data()) total += v;
  auto xn = input.node();
  return make_result<T>(Shape{1}, std::vector<T>{total}, tracks<T>({&input}), {xn},
                        [xn](std::span<const T> gout) {
                          auto dx = sink(xn);
                          for (auto& v : dx) v += gout[0];
                        });
}

#define SGNET_INSTANTIATE_OPS(T)                                                              \
  template BasicTensor<T> conv2d(const BasicTensor<T>&, const BasicTensor<T>&,                \
                                 const BasicTensor<T>&, std::size_t, std::size_t);            \
  template BasicTensor<T> maxpool2d(const BasicTensor<T>&, std::size_t, std::size_t);         \
  template BasicTensor<T> relu(const BasicTensor<T>&);                                        \
  template BasicTensor<T> linear(const BasicTensor<T>&, const BasicTensor<T>&,                \
                                 const BasicTensor<T>&);                                      \
  template BasicTensor<T> flatten(const BasicTensor<T>&);                                     \
  template BasicTensor<T> concat_channels(const BasicTensor<T>&, const BasicTensor<T>&);      \
  template BasicTensor<T> slice_channels(const BasicTensor<T>&, std::size_t, std::size_t);    \
  template BasicTensor<T> slice_columns(const BasicTensor<T>&, std::size_t, std::size_t);     \
  template BasicTensor<T> softmax(const BasicTensor<T>&);                                     \
  template BasicTensor<T> cross_entropy(const BasicTensor<T>&, std::span<const int>);         \
  template BasicTensor<T> scale(const BasicTensor<T>&, T);                                    \
  template BasicTensor<T> add(const BasicTensor<T>&, const BasicTensor<T>&);                  \
  template BasicTensor<T> weighted_sum(const BasicTensor<T>&, T, const BasicTensor<T>&, T);   \
  template BasicTensor<T> sum(const BasicTensor<T>&);

SGNET_INSTANTIATE_OPS(float)
SGNET_INSTANTIATE_OPS(double)

#undef SGNET_INSTANTIATE_OPS

}  // namespace sgnet::ops
