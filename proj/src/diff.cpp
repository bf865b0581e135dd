/* Copyright 2026 The Align Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/
#include "align/diff.hpp"

#include <cmath>

#include "align/ctc.hpp"
#include "align/errors.hpp"

namespace align::diff {

namespace {

std::string shape_str(const Matrix& m) {
  return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

[[noreturn]] void shape_error(const char* op, const Matrix& a, const Matrix& b) {
  throw DataError(std::string(op) + ": shape mismatch " + shape_str(a) + " vs " + shape_str(b));
}

}  // namespace

void Tape::check(Var v, const char* op) const {
  if (!v.valid() || static_cast<size_t>(v.id) >= nodes_.size())
    throw DataError(std::string(op) + ": invalid tape handle");
}

Var Tape::push(Matrix value, std::function<void(Tape&, const Matrix&)> back) {
  nodes_.push_back(Node{std::move(value), Matrix(), std::move(back)});
  return Var{static_cast<int>(nodes_.size()) - 1};
}

Var Tape::constant(Matrix value) { return push(std::move(value), nullptr); }

double Tape::scalar(Var v) const {
  check(v, "scalar");
  const Matrix& m = value(v);
  if (m.rows() != 1 || m.cols() != 1) throw DataError("scalar: node is " + shape_str(m) + ", expected 1x1");
  return m(0, 0);
}

void Tape::backward(Var loss, double seed) {
  check(loss, "backward");
  const Matrix& lv = value(loss);
  if (lv.rows() != 1 || lv.cols() != 1) throw DataError("backward: loss node is " + shape_str(lv) + ", expected 1x1");
  for (auto& n : nodes_) n.grad = Matrix(n.val.rows(), n.val.cols());
  grad_buf(loss.id)(0, 0) = seed;
  for (int id = static_cast<int>(nodes_.size()) - 1; id >= 0; --id) {
    Node& n = node(id);
    if (n.back) n.back(*this, n.grad);
  }
}

// ---------------------------------------------------------------------------
// elementwise

Var Tape::add(Var a, Var b) {
  check(a, "add");
  check(b, "add");
  const Matrix& av = value(a);
  const Matrix& bv = value(b);
  if (!av.same_shape(bv)) shape_error("add", av, bv);
  Matrix out = av;
  for (size_t i = 0; i < out.size(); ++i) out[i] += bv[i];
  const int ai = a.id, bi = b.id;
  return push(std::move(out), [ai, bi](Tape& t, const Matrix& g) {
    Matrix& ga = t.grad_buf(ai);
    Matrix& gb = t.grad_buf(bi);
    for (size_t i = 0; i < g.size(); ++i) {
      ga[i] += g[i];
      gb[i] += g[i];
    }
  });
}

Var Tape::sub(Var a, Var b) {
  check(a, "sub");
  check(b, "sub");
  const Matrix& av = value(a);
  const Matrix& bv = value(b);
  if (!av.same_shape(bv)) shape_error("sub", av, bv);
  Matrix out = av;
  for (size_t i = 0; i < out.size(); ++i) out[i] -= bv[i];
  const int ai = a.id, bi = b.id;
  return push(std::move(out), [ai, bi](Tape& t, const Matrix& g) {
    Matrix& ga = t.grad_buf(ai);
    Matrix& gb = t.grad_buf(bi);
    for (size_t i = 0; i < g.size(); ++i) {
      ga[i] += g[i];
      gb[i] -= g[i];
    }
  });
}

Var Tape::mul(Var a, Var b) {
  check(a, "mul");
  check(b, "mul");
  const Matrix& av = value(a);
  const Matrix& bv = value(b);
  if (!av.same_shape(bv)) shape_error("mul", av, bv);
  Matrix out = av;
  for (size_t i = 0; i < out.size(); ++i) out[i] *= bv[i];
  const int ai = a.id, bi = b.id;
  return push(std::move(out), [ai, bi](Tape& t, const Matrix& g) {
    const Matrix& av2 = t.value(Var{ai});
    const Matrix& bv2 = t.value(Var{bi});
    Matrix& ga = t.grad_buf(ai);
    Matrix& gb = t.grad_buf(bi);
    for (size_t i = 0; i < g.size(); ++i) {
      ga[i] += g[i] * bv2[i];
      gb[i] += g[i] * av2[i];
    }
  });
}

Var Tape::scale(Var a, double c) {
  check(a, "scale");
  Matrix out = value(a);
  for (size_t i = 0; i < out.size(); ++i) out[i] *= c;
  const int ai = a.id;
  return push(std::move(out), [ai, c](Tape& t, const Matrix& g) {
    Matrix& ga = t.grad_buf(ai);
    for (size_t i = 0; i < g.size(); ++i) ga[i] += c * g[i];
  });
}

Var Tape::relu(Var a) {
  check(a, "relu");
  Matrix out = value(a);
  for (size_t i = 0; i < out.size(); ++i) out[i] = out[i] > 0.0 ? out[i] : 0.0;
  const int ai = a.id;
  return push(std::move(out), [ai](Tape& t, const Matrix& g) {
    const Matrix& av = t.value(Var{ai});
    Matrix& ga = t.grad_buf(ai);
    for (size_t i = 0; i < g.size(); ++i) ga[i] += av[i] > 0.0 ? g[i] : 0.0;
  });
}

Var Tape::sigmoid(Var a) {
  check(a, "sigmoid");
  Matrix out = value(a);
  for (size_t i = 0; i < out.size(); ++i) out[i] = 1.0 / (1.0 + std::exp(-out[i]));
  const int ai = a.id;
  Var r = push(std::move(out), nullptr);
  const int ri = r.id;
  node(ri).back = [ai, ri](Tape& t, const Matrix& g) {
    const Matrix& y = t.value(Var{ri});
    Matrix& ga = t.grad_buf(ai);
    for (size_t i = 0; i < g.size(); ++i) ga[i] += g[i] * y[i] * (1.0 - y[i]);
  };
  return r;
}

Var Tape::tanh_op(Var a) {
  check(a, "tanh");
  Matrix out = value(a);
  for (size_t i = 0; i < out.size(); ++i) out[i] = std::tanh(out[i]);
  const int ai = a.id;
  Var r = push(std::move(out), nullptr);
  const int ri = r.id;
  node(ri).back = [ai, ri](Tape& t, const Matrix& g) {
    const Matrix& y = t.value(Var{ri});
    Matrix& ga = t.grad_buf(ai);
    for (size_t i = 0; i < g.size(); ++i) ga[i] += g[i] * (1.0 - y[i] * y[i]);
  };
  return r;
}

// ---------------------------------------------------------------------------
// linear algebra

Var Tape::matmul(Var a, Var b) {
  check(a, "matmul");
  check(b, "matmul");
  const Matrix& av = value(a);
  const Matrix& bv = value(b);
  if (av.cols() != bv.rows()) shape_error("matmul", av, bv);
  Matrix out(av.rows(), bv.cols());
  for (int i = 0; i < av.rows(); ++i)
    for (int k = 0; k < av.cols(); ++k) {
      const double aik = av(i, k);
      if (aik == 0.0) continue;
      for (int j = 0; j < bv.cols(); ++j) out(i, j) += aik * bv(k, j);
    }
  const int ai = a.id, bi = b.id;
  return push(std::move(out), [ai, bi](Tape& t, const Matrix& g) {
    const Matrix& av2 = t.value(Var{ai});
    const Matrix& bv2 = t.value(Var{bi});
    Matrix& ga = t.grad_buf(ai);
    Matrix& gb = t.grad_buf(bi);
    // dA += G * B^T
    for (int i = 0; i < ga.rows(); ++i)
      for (int j = 0; j < gb.cols(); ++j) {
        const double gij = g(i, j);
        if (gij == 0.0) continue;
        for (int k = 0; k < ga.cols(); ++k) ga(i, k) += gij * bv2(k, j);
      }
    // dB += A^T * G
    for (int i = 0; i < av2.rows(); ++i)
      for (int k = 0; k < av2.cols(); ++k) {
        const double aik = av2(i, k);
        if (aik == 0.0) continue;
        for (int j = 0; j < gb.cols(); ++j) gb(k, j) += aik * g(i, j);
      }
  });
}

Var Tape::matmul_nt(Var a, Var b) {
  check(a, "matmul_nt");
  check(b, "matmul_nt");
  const Matrix& av = value(a);
  const Matrix& bv = value(b);
  if (av.cols() != bv.cols()) shape_error("matmul_nt", av, bv);
  Matrix out(av.rows(), bv.rows());
  for (int i = 0; i < av.rows(); ++i)
    for (int j = 0; j < bv.rows(); ++j) {
      double acc = 0.0;
      for (int k = 0; k < av.cols(); ++k) acc += av(i, k) * bv(j, k);
      out(i, j) = acc;
    }
  const int ai = a.id, bi = b.id;
  return push(std::move(out), [ai, bi](Tape& t, const Matrix& g) {
    const Matrix& av2 = t.value(Var{ai});
    const Matrix& bv2 = t.value(Var{bi});
    Matrix& ga = t.grad_buf(ai);
    Matrix& gb = t.grad_buf(bi);
    // dA += G * B ; dB += G^T * A
    for (int i = 0; i < ga.rows(); ++i)
      for (int j = 0; j < bv2.rows(); ++j) {
        const double gij = g(i, j);
        if (gij == 0.0) continue;
        for (int k = 0; k < ga.cols(); ++k) ga(i, k) += gij * bv2(j, k);
        for (int k = 0; k < gb.cols(); ++k) gb(j, k) += gij * av2(i, k);
      }
  });
}

Var Tape::affine(Var x, Var w, Var b) {
  check(x, "affine");
  check(w, "affine");
  check(b, "affine");
  const Matrix& xv = value(x);
  const Matrix& wv = value(w);
  const Matrix& bv = value(b);
  if (xv.cols() != wv.rows()) shape_error("affine(x,W)", xv, wv);
  if (bv.rows() != 1 || bv.cols() != wv.cols()) shape_error("affine(W,b)", wv, bv);
  Matrix out(xv.rows(), wv.cols());
  for (int i = 0; i < xv.rows(); ++i) {
    for (int j = 0; j < wv.cols(); ++j) out(i, j) = bv(0, j);
    for (int k = 0; k < xv.cols(); ++k) {
      const double xik = xv(i, k);
      if (xik == 0.0) continue;
      for (int j = 0; j < wv.cols(); ++j) out(i, j) += xik * wv(k, j);
    }
  }
  const int xi = x.id, wi = w.id, bi = b.id;
  return push(std::move(out), [xi, wi, bi](Tape& t, const Matrix& g) {
    const Matrix& xv2 = t.value(Var{xi});
    const Matrix& wv2 = t.value(Var{wi});
    Matrix& gx = t.grad_buf(xi);
    Matrix& gw = t.grad_buf(wi);
    Matrix& gb = t.grad_buf(bi);
    for (int i = 0; i < g.rows(); ++i)
      for (int j = 0; j < g.cols(); ++j) {
        const double gij = g(i, j);
        if (gij == 0.0) continue;
        gb(0, j) += gij;
        for (int k = 0; k < gx.cols(); ++k) gx(i, k) += gij * wv2(k, j);
        for (int k = 0; k < gw.rows(); ++k) gw(k, j) += gij * xv2(i, k);
      }
  });
}

// ---------------------------------------------------------------------------
// shape

Var Tape::slice_rows(Var a, int r0, int r1) {
  check(a, "slice_rows");
  const Matrix& av = value(a);
  if (r0 < 0 || r1 > av.rows() || r0 >= r1)
    throw DataError("slice_rows: bad range [" + std::to_string(r0) + "," + std::to_string(r1) + ") of " +
                    shape_str(av));
  Matrix out(r1 - r0, av.cols());
  for (int r = r0; r < r1; ++r)
    for (int c = 0; c < av.cols(); ++c) out(r - r0, c) = av(r, c);
  const int ai = a.id;
  return push(std::move(out), [ai, r0](Tape& t, const Matrix& g) {
    Matrix& ga = t.grad_buf(ai);
    for (int r = 0; r < g.rows(); ++r)
      for (int c = 0; c < g.cols(); ++c) ga(r + r0, c) += g(r, c);
  });
}

Var Tape::vstack(const std::vector<Var>& parts) {
  if (parts.empty()) throw DataError("vstack: no parts");
  int rows = 0;
  const int cols = value(parts[0]).cols();
  for (Var p : parts) {
    check(p, "vstack");
    if (value(p).cols() != cols) shape_error("vstack", value(parts[0]), value(p));
    rows += value(p).rows();
  }
  Matrix out(rows, cols);
  int at = 0;
  std::vector<int> ids;
  std::vector<int> offsets;
  for (Var p : parts) {
    const Matrix& pv = value(p);
    offsets.push_back(at);
    ids.push_back(p.id);
    for (int r = 0; r < pv.rows(); ++r)
      for (int c = 0; c < cols; ++c) out(at + r, c) = pv(r, c);
    at += pv.rows();
  }
  return push(std::move(out), [ids, offsets](Tape& t, const Matrix& g) {
    for (size_t i = 0; i < ids.size(); ++i) {
      Matrix& gp = t.grad_buf(ids[i]);
      for (int r = 0; r < gp.rows(); ++r)
        for (int c = 0; c < gp.cols(); ++c) gp(r, c) += g(offsets[i] + r, c);
    }
  });
}

Var Tape::hstack(const std::vector<Var>& parts) {
  if (parts.empty()) throw DataError("hstack: no parts");
  const int rows = value(parts[0]).rows();
  int cols = 0;
  for (Var p : parts) {
    check(p, "hstack");
    if (value(p).rows() != rows) shape_error("hstack", value(parts[0]), value(p));
    cols += value(p).cols();
  }
  Matrix out(rows, cols);
  int at = 0;
  std::vector<int> ids;
  std::vector<int> offsets;
  for (Var p : parts) {
    const Matrix& pv = value(p);
    offsets.push_back(at);
    ids.push_back(p.id);
    for (int r = 0; r < rows; ++r)
      for (int c = 0; c < pv.cols(); ++c) out(r, at + c) = pv(r, c);
    at += pv.cols();
  }
  return push(std::move(out), [ids, offsets](Tape& t, const Matrix& g) {
    for (size_t i = 0; i < ids.size(); ++i) {
      Matrix& gp = t.grad_buf(ids[i]);
      for (int r = 0; r < gp.rows(); ++r)
        for (int c = 0; c < gp.cols(); ++c) gp(r, c) += g(r, offsets[i] + c);
    }
  });
}

Var Tape::patchify(Var x, int patch_len) {
  check(x, "patchify");
  if (patch_len < 1) throw DataError("patchify: patch_len must be >= 1");
  const Matrix& xv = value(x);
  const int t_len = xv.rows();
  const int c = xv.cols();
  const int n_patches = (t_len + patch_len - 1) / patch_len;
  Matrix out(n_patches, patch_len * c);
  for (int q = 0; q < n_patches; ++q)
    for (int u = 0; u < patch_len; ++u) {
      const int t = q * patch_len + u;
      if (t >= t_len) break;  // zero pad tail
      for (int ch = 0; ch < c; ++ch) out(q, u * c + ch) = xv(t, ch);
    }
  const int xi = x.id;
  return push(std::move(out), [xi, patch_len, c, t_len](Tape& t, const Matrix& g) {
    Matrix& gx = t.grad_buf(xi);
    for (int q = 0; q < g.rows(); ++q)
      for (int u = 0; u < patch_len; ++u) {
        const int tt = q * patch_len + u;
        if (tt >= t_len) break;
        for (int ch = 0; ch < c; ++ch) gx(tt, ch) += g(q, u * c + ch);
      }
  });
}

// ---------------------------------------------------------------------------
// row-wise normalization / softmax

Var Tape::layer_norm(Var x, Var gain, Var bias, double eps) {
  check(x, "layer_norm");
  check(gain, "layer_norm");
  check(bias, "layer_norm");
  const Matrix& xv = value(x);
  const Matrix& gv = value(gain);
  const Matrix& bv = value(bias);
  if (gv.rows() != 1 || gv.cols() != xv.cols()) shape_error("layer_norm(x,gain)", xv, gv);
  if (bv.rows() != 1 || bv.cols() != xv.cols()) shape_error("layer_norm(x,bias)", xv, bv);
  const int n = xv.cols();
  Matrix out(xv.rows(), n);
  Matrix xhat(xv.rows(), n);
  std::vector<double> inv_sd(xv.rows());
  for (int i = 0; i < xv.rows(); ++i) {
    double mean = 0.0;
    for (int j = 0; j < n; ++j) mean += xv(i, j);
    mean /= n;
    double var = 0.0;
    for (int j = 0; j < n; ++j) {
      const double d = xv(i, j) - mean;
      var += d * d;
    }
    var /= n;
    const double s = 1.0 / std::sqrt(var + eps);
    inv_sd[i] = s;
    for (int j = 0; j < n; ++j) {
      xhat(i, j) = (xv(i, j) - mean) * s;
      out(i, j) = gv(0, j) * xhat(i, j) + bv(0, j);
    }
  }
  const int xi = x.id, gi = gain.id, bi = bias.id;
  return push(std::move(out), [xi, gi, bi, xhat, inv_sd, n](Tape& t, const Matrix& g) {
    const Matrix& gv2 = t.value(Var{gi});
    Matrix& gx = t.grad_buf(xi);
    Matrix& gg = t.grad_buf(gi);
    Matrix& gb = t.grad_buf(bi);
    for (int i = 0; i < g.rows(); ++i) {
      double sum_dxhat = 0.0;
      double sum_dxhat_xhat = 0.0;
      for (int j = 0; j < n; ++j) {
        const double dxhat = g(i, j) * gv2(0, j);
        sum_dxhat += dxhat;
        sum_dxhat_xhat += dxhat * xhat(i, j);
        gg(0, j) += g(i, j) * xhat(i, j);
        gb(0, j) += g(i, j);
      }
      const double s = inv_sd[i];
      for (int j = 0; j < n; ++j) {
        const double dxhat = g(i, j) * gv2(0, j);
        gx(i, j) += s * (dxhat - sum_dxhat / n - xhat(i, j) * sum_dxhat_xhat / n);
      }
    }
  });
}

Var Tape::log_softmax_rows(Var a) {
  check(a, "log_softmax_rows");
  const Matrix& av = value(a);
  Matrix out(av.rows(), av.cols());
  for (int i = 0; i < av.rows(); ++i) {
    double mx = av(i, 0);
    for (int j = 1; j < av.cols(); ++j) mx = std::max(mx, av(i, j));
    double z = 0.0;
    for (int j = 0; j < av.cols(); ++j) z += std::exp(av(i, j) - mx);
    const double lse = mx + std::log(z);
    for (int j = 0; j < av.cols(); ++j) out(i, j) = av(i, j) - lse;
  }
  const int ai = a.id;
  Var r = push(std::move(out), nullptr);
  const int ri = r.id;
  node(ri).back = [ai, ri](Tape& t, const Matrix& g) {
    const Matrix& y = t.value(Var{ri});
    Matrix& ga = t.grad_buf(ai);
    for (int i = 0; i < g.rows(); ++i) {
      double gsum = 0.0;
      for (int j = 0; j < g.cols(); ++j) gsum += g(i, j);
      for (int j = 0; j < g.cols(); ++j) ga(i, j) += g(i, j) - std::exp(y(i, j)) * gsum;
    }
  };
  return r;
}

Var Tape::softmax_rows_causal(Var a) {
  check(a, "softmax_rows_causal");
  const Matrix& av = value(a);
  if (av.rows() != av.cols()) throw DataError("softmax_rows_causal: matrix must be square, got " + shape_str(av));
  Matrix out(av.rows(), av.cols());
  for (int i = 0; i < av.rows(); ++i) {
    double mx = av(i, 0);
    for (int j = 1; j <= i; ++j) mx = std::max(mx, av(i, j));
    double z = 0.0;
    for (int j = 0; j <= i; ++j) z += std::exp(av(i, j) - mx);
    for (int j = 0; j <= i; ++j) out(i, j) = std::exp(av(i, j) - mx) / z;
  }
  const int ai = a.id;
  Var r = push(std::move(out), nullptr);
  const int ri = r.id;
  node(ri).back = [ai, ri](Tape& t, const Matrix& g) {
    const Matrix& p = t.value(Var{ri});
    Matrix& ga = t.grad_buf(ai);
    for (int i = 0; i < g.rows(); ++i) {
      double dot = 0.0;
      for (int j = 0; j <= i; ++j) dot += g(i, j) * p(i, j);
      for (int j = 0; j <= i; ++j) ga(i, j) += p(i, j) * (g(i, j) - dot);
    }
  };
  return r;
}

// ---------------------------------------------------------------------------
// reductions

Var Tape::mean_all(Var a) {
  check(a, "mean_all");
  const Matrix& av = value(a);
  if (av.size() == 0) throw DataError("mean_all: empty node");
  double s = 0.0;
  for (size_t i = 0; i < av.size(); ++i) s += av[i];
  Matrix out(1, 1);
  out(0, 0) = s / static_cast<double>(av.size());
  const int ai = a.id;
  const double inv = 1.0 / static_cast<double>(av.size());
  return push(std::move(out), [ai, inv](Tape& t, const Matrix& g) {
    Matrix& ga = t.grad_buf(ai);
    const double gs = g(0, 0) * inv;
    for (size_t i = 0; i < ga.size(); ++i) ga[i] += gs;
  });
}

Var Tape::mean_scalars(const std::vector<Var>& xs) {
  if (xs.empty()) throw DataError("mean_scalars: empty list");
  double s = 0.0;
  std::vector<int> ids;
  for (Var v : xs) {
    check(v, "mean_scalars");
    s += scalar(v);
    ids.push_back(v.id);
  }
  Matrix out(1, 1);
  out(0, 0) = s / static_cast<double>(xs.size());
  const double inv = 1.0 / static_cast<double>(xs.size());
  return push(std::move(out), [ids, inv](Tape& t, const Matrix& g) {
    const double gs = g(0, 0) * inv;
    for (int id : ids) t.grad_buf(id)(0, 0) += gs;
  });
}

// ---------------------------------------------------------------------------
// stochastic / special

Var Tape::dropout(Var a, double p, Rng& rng, bool train) {
  check(a, "dropout");
  if (p < 0.0 || p >= 1.0) throw DataError("dropout: p must be in [0,1)");
  if (!train || p == 0.0) return a;
  const Matrix& av = value(a);
  Matrix mask(av.rows(), av.cols());
  const double keep_scale = 1.0 / (1.0 - p);
  for (size_t i = 0; i < mask.size(); ++i) mask[i] = rng.uniform01() < p ? 0.0 : keep_scale;
  Matrix out = av;
  for (size_t i = 0; i < out.size(); ++i) out[i] *= mask[i];
  const int ai = a.id;
  return push(std::move(out), [ai, mask](Tape& t, const Matrix& g) {
    Matrix& ga = t.grad_buf(ai);
    for (size_t i = 0; i < g.size(); ++i) ga[i] += g[i] * mask[i];
  });
}

Var Tape::grl(Var a, double scale) {
  check(a, "grl");
  Matrix out = value(a);
  const int ai = a.id;
  return push(std::move(out), [ai, scale](Tape& t, const Matrix& g) {
    Matrix& ga = t.grad_buf(ai);
    for (size_t i = 0; i < g.size(); ++i) ga[i] += -scale * g[i];
  });
}

Var Tape::bce_with_logits_mean(Var logits, Matrix targets) {
  check(logits, "bce_with_logits");
  const Matrix& zv = value(logits);
  if (!zv.same_shape(targets)) shape_error("bce_with_logits", zv, targets);
  double loss = 0.0;
  for (size_t i = 0; i < zv.size(); ++i) {
    const double z = zv[i];
    const double y = targets[i];
    loss += std::max(z, 0.0) - z * y + std::log1p(std::exp(-std::abs(z)));
  }
  Matrix out(1, 1);
  out(0, 0) = loss / static_cast<double>(zv.size());
  const int zi = logits.id;
  const double inv = 1.0 / static_cast<double>(zv.size());
  return push(std::move(out), [zi, targets, inv](Tape& t, const Matrix& g) {
    const Matrix& zv2 = t.value(Var{zi});
    Matrix& gz = t.grad_buf(zi);
    const double gs = g(0, 0) * inv;
    for (size_t i = 0; i < zv2.size(); ++i) {
      const double sig = 1.0 / (1.0 + std::exp(-zv2[i]));
      gz[i] += gs * (sig - targets[i]);
    }
  });
}

Var Tape::ctc_on_logits(Var logits, const std::vector<int>& labels) {
  check(logits, "ctc_on_logits");
  const Matrix& zv = value(logits);
  ctc::LogitsLossResult res = ctc::loss_and_grad_from_logits(zv, labels);
  Matrix out(1, 1);
  out(0, 0) = res.loss;
  const int zi = logits.id;
  Matrix dlogits = std::move(res.grad_logits);
  return push(std::move(out), [zi, dlogits](Tape& t, const Matrix& g) {
    Matrix& gz = t.grad_buf(zi);
    const double gs = g(0, 0);
    for (size_t i = 0; i < gz.size(); ++i) gz[i] += gs * dlogits[i];
  });
}

Var Tape::gru_cell(Var x_t, Var h_prev, Var wz, Var uz, Var bz, Var wr, Var ur, Var br, Var wh, Var uh, Var bh) {
  Var z = sigmoid(add(affine(x_t, wz, bz), matmul(h_prev, uz)));
  Var r = sigmoid(add(affine(x_t, wr, br), matmul(h_prev, ur)));
  Var cand = tanh_op(add(affine(x_t, wh, bh), matmul(mul(r, h_prev), uh)));
  // h' = (1 - z) (.) h + z (.) cand
  return add(sub(h_prev, mul(z, h_prev)), mul(z, cand));
}

}  // namespace align::diff
