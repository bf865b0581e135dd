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
#ifndef ALIGN_DIFF_HPP_
#define ALIGN_DIFF_HPP_

#include <functional>
#include <string>
#include <vector>

#include "align/matrix.hpp"
#include "align/rng.hpp"

namespace align::diff {

// Handle into a Tape. Default-constructed handles are invalid.
struct Var {
  int id = -1;
  bool valid() const { return id >= 0; }
};

// Reverse-mode tape over Matrix-valued nodes. Nodes are appended in forward
// (topological) order; backward() replays them in reverse, each node
// accumulating into its parents' gradient buffers. One tape = one forward/
// backward episode; build a fresh tape per step.
//
// Double precision throughout, no fused-math: two identical episodes produce
// bitwise-identical values and gradients.
class Tape {
 public:
  Var constant(Matrix value);

  const Matrix& value(Var v) const { return node(v.id).val; }
  const Matrix& grad(Var v) const { return node(v.id).grad; }
  double scalar(Var v) const;
  size_t node_count() const { return nodes_.size(); }

  // -- elementwise / arithmetic -------------------------------------------
  Var add(Var a, Var b);
  Var sub(Var a, Var b);
  Var mul(Var a, Var b);
  Var scale(Var a, double c);
  Var relu(Var a);
  Var sigmoid(Var a);
  Var tanh_op(Var a);

  // -- linear algebra ------------------------------------------------------
  Var matmul(Var a, Var b);     // A(BxC): a is BxK, b is KxC
  Var matmul_nt(Var a, Var b);  // a * b^T
  Var affine(Var x, Var w, Var b);  // x*W + row-broadcast bias (1 x out)

  // -- shape ----------------------------------------------------------------
  Var slice_rows(Var a, int r0, int r1);
  Var vstack(const std::vector<Var>& parts);
  Var hstack(const std::vector<Var>& parts);
  // Non-overlapping temporal patches: T x c -> ceil(T/p) x (p*c), zero-padded.
  Var patchify(Var x, int patch_len);

  // -- normalization / activations over rows --------------------------------
  Var layer_norm(Var x, Var gain, Var bias, double eps = 1e-5);
  Var log_softmax_rows(Var a);
  // Square score matrix; row i is softmaxed over columns 0..i, rest zero.
  Var softmax_rows_causal(Var a);

  // -- reductions ------------------------------------------------------------
  Var mean_all(Var a);                    // 1x1
  Var mean_scalars(const std::vector<Var>& xs);  // mean of 1x1 nodes
  Var add_scalars(Var a, Var b) { return add(a, b); }

  // -- stochastic -------------------------------------------------------------
  // Inverted dropout; identity (and no rng consumption) when !train or p == 0.
  Var dropout(Var a, double p, Rng& rng, bool train);

  // -- special -----------------------------------------------------------------
  // Identity forward; backward multiplies the incoming gradient by -scale
  // before it reaches the parent. scale carries the full reversal magnitude
  // (alpha*lambda when used as the textbook layer).
  Var grl(Var a, double scale);
  // Mean binary cross-entropy between logits and fixed 0/1 targets.
  Var bce_with_logits_mean(Var logits, Matrix targets);
  // CTC loss over per-frame logits (V columns, blank = 0). The node value is
  // the loss; backward feeds the exact dLoss/dlogits into the logits node.
  // The target must be feasible (checked by the caller via ctc::feasible).
  Var ctc_on_logits(Var logits, const std::vector<int>& labels);

  // Gated recurrent cell composed from primitives: x_t (1 x in), h (1 x D).
  Var gru_cell(Var x_t, Var h_prev, Var wz, Var uz, Var bz, Var wr, Var ur, Var br, Var wh, Var uh, Var bh);

  void backward(Var loss, double seed = 1.0);

 private:
  struct Node {
    Matrix val;
    Matrix grad;
    std::function<void(Tape&, const Matrix&)> back;  // (tape, upstream grad)
  };

  Node& node(int id) { return nodes_[static_cast<size_t>(id)]; }
  const Node& node(int id) const { return nodes_[static_cast<size_t>(id)]; }
  Matrix& grad_buf(int id) { return nodes_[static_cast<size_t>(id)].grad; }
  Var push(Matrix value, std::function<void(Tape&, const Matrix&)> back);
  void check(Var v, const char* op) const;

  std::vector<Node> nodes_;
};

}  // namespace align::diff

#endif  // ALIGN_DIFF_HPP_
