use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;

use super::Tensor;
use crate::error::{Error, Result};
use crate::qubo::Csr;
use crate::rng::Stream;

/// Handle to a value recorded on a [`Tape`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Var(usize);

/// A square sparse matrix applied blockwise to stacked node features,
/// together with its transpose for the backward pass.
#[derive(Debug, Clone)]
pub struct SparseOperator {
    forward: Csr,
    transpose: Csr,
}

impl SparseOperator {
    pub fn new(m: Csr) -> Arc<Self> {
        let transpose = m.transpose();
        Arc::new(SparseOperator { forward: m, transpose })
    }

    pub fn n(&self) -> usize {
        self.forward.n()
    }

    pub fn matrix(&self) -> &Csr {
        &self.forward
    }
}

enum Op {
    Leaf,
    MatMul(Var, Var),
    SpMM(Arc<SparseOperator>, Var),
    Add(Var, Var),
    Scale(Var, f64),
    Hadamard(Var, Var),
    BroadcastAddCol(Var, Var),
    AddBias(Var, Var),
    ScaleCols(Var, Var),
    Relu(Var),
    Tanh(Var),
    Sigmoid(Var),
    Softplus(Var),
    Dropout(Var, Vec<f64>),
    BceWithLogits(Var, Vec<f64>),
    Sum(Var),
}

struct Node {
    value: Tensor,
    op: Op,
    needs_grad: bool,
}

/// Records operations in execution order; [`Tape::backward`] replays them
/// in reverse exactly once.
#[derive(Default)]
pub struct Tape {
    nodes: Vec<Node>,
    backward_done: bool,
}

fn shape_err(op: &'static str, a: &Tensor, b: &Tensor) -> Error {
    Error::ShapeMismatch {
        op,
        left: a.shape().to_vec(),
        right: b.shape().to_vec(),
    }
}

fn sigmoid(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + libm::exp(-x))
    } else {
        let e = libm::exp(x);
        e / (1.0 + e)
    }
}

fn softplus(x: f64) -> f64 {
    x.max(0.0) + libm::log1p(libm::exp(-x.abs()))
}

/// `out += a (n x m) · b (m x p)`.
fn gemm_acc(a: &[f64], b: &[f64], out: &mut [f64], n: usize, m: usize, p: usize) {
    for i in 0..n {
        let row = &mut out[i * p..(i + 1) * p];
        for l in 0..m {
            let s = a[i * m + l];
            if s == 0.0 {
                continue;
            }
            for (o, &bv) in row.iter_mut().zip(&b[l * p..(l + 1) * p]) {
                *o += s * bv;
            }
        }
    }
}

impl Tape {
    pub fn new() -> Self {
        Tape::default()
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Records an input; it takes part in differentiation iff
    /// `requires_grad` is set.
    pub fn leaf(&mut self, t: Tensor) -> Var {
        let needs_grad = t.requires_grad;
        self.push(t, Op::Leaf, needs_grad)
    }

    pub fn constant(&mut self, t: Tensor) -> Var {
        self.push(t, Op::Leaf, false)
    }

    pub fn value(&self, v: Var) -> &Tensor {
        &self.nodes[v.0].value
    }

    /// Gradient of the last backward pass w.r.t. `v`.
    pub fn grad(&self, v: Var) -> Option<&[f64]> {
        self.nodes[v.0].value.grad.as_deref()
    }

    /// Clears gradients so that `backward` may run again.
    pub fn reset(&mut self) {
        for n in &mut self.nodes {
            n.value.grad = None;
        }
        self.backward_done = false;
    }

    /// Drops every recorded node; earlier `Var`s become invalid.
    pub fn clear(&mut self) {
        self.nodes.clear();
        self.backward_done = false;
    }

    fn push(&mut self, mut value: Tensor, op: Op, needs_grad: bool) -> Var {
        value.grad = None;
        value.requires_grad = needs_grad;
        self.nodes.push(Node { value, op, needs_grad });
        Var(self.nodes.len() - 1)
    }

    fn ng(&self, v: Var) -> bool {
        self.nodes[v.0].needs_grad
    }

    fn unary(&mut self, x: Var, op: Op, f: impl Fn(f64) -> f64) -> Var {
        let t = self.value(x);
        let data = t.data().iter().map(|&v| f(v)).collect();
        let out = Tensor::matrix(t.rows(), t.cols(), data).expect("same shape");
        let ng = self.ng(x);
        self.push(out, op, ng)
    }

    pub fn matmul(&mut self, a: Var, b: Var) -> Result<Var> {
        let (ta, tb) = (self.value(a), self.value(b));
        if ta.cols() != tb.rows() {
            return Err(shape_err("matmul", ta, tb));
        }
        let (n, m, p) = (ta.rows(), ta.cols(), tb.cols());
        let mut out = vec![0.0; n * p];
        gemm_acc(ta.data(), tb.data(), &mut out, n, m, p);
        let ng = self.ng(a) || self.ng(b);
        Ok(self.push(Tensor::matrix(n, p, out)?, Op::MatMul(a, b), ng))
    }

    /// Applies a `k x k` sparse matrix to every `k`-row block of `x`.
    pub fn spmm(&mut self, s: &Arc<SparseOperator>, x: Var) -> Result<Var> {
        let t = self.value(x);
        let k = s.n();
        if k == 0 || !t.rows().is_multiple_of(k) {
            return Err(Error::ShapeMismatch {
                op: "spmm",
                left: vec![k, k],
                right: t.shape().to_vec(),
            });
        }
        let mut out = vec![0.0; t.len()];
        s.forward.spmm_blocks(t.data(), t.cols(), &mut out);
        let out = Tensor::matrix(t.rows(), t.cols(), out)?;
        let ng = self.ng(x);
        Ok(self.push(out, Op::SpMM(Arc::clone(s), x), ng))
    }

    pub fn add(&mut self, a: Var, b: Var) -> Result<Var> {
        let (ta, tb) = (self.value(a), self.value(b));
        if ta.shape() != tb.shape() {
            return Err(shape_err("add", ta, tb));
        }
        let data = ta.data().iter().zip(tb.data()).map(|(x, y)| x + y).collect();
        let out = Tensor::matrix(ta.rows(), ta.cols(), data)?;
        let ng = self.ng(a) || self.ng(b);
        Ok(self.push(out, Op::Add(a, b), ng))
    }

    pub fn scale(&mut self, a: Var, c: f64) -> Var {
        self.unary(a, Op::Scale(a, c), |v| c * v)
    }

    pub fn hadamard(&mut self, a: Var, b: Var) -> Result<Var> {
        let (ta, tb) = (self.value(a), self.value(b));
        if ta.shape() != tb.shape() {
            return Err(shape_err("hadamard", ta, tb));
        }
        let data = ta.data().iter().zip(tb.data()).map(|(x, y)| x * y).collect();
        let out = Tensor::matrix(ta.rows(), ta.cols(), data)?;
        let ng = self.ng(a) || self.ng(b);
        Ok(self.push(out, Op::Hadamard(a, b), ng))
    }

    /// `x + v 1⊤` for `x: n x d`, `v: n x 1`.
    pub fn broadcast_add_col(&mut self, x: Var, v: Var) -> Result<Var> {
        let (tx, tv) = (self.value(x), self.value(v));
        if tv.cols() != 1 || tv.rows() != tx.rows() {
            return Err(shape_err("broadcast_add_col", tx, tv));
        }
        let d = tx.cols();
        let mut data = tx.data().to_vec();
        for (row, &add) in data.chunks_exact_mut(d.max(1)).zip(tv.data()) {
            row.iter_mut().for_each(|e| *e += add);
        }
        let out = Tensor::matrix(tx.rows(), d, data)?;
        let ng = self.ng(x) || self.ng(v);
        Ok(self.push(out, Op::BroadcastAddCol(x, v), ng))
    }

    /// `x + 1 β` for `x: n x d`, `β: 1 x d`.
    pub fn add_bias(&mut self, x: Var, bias: Var) -> Result<Var> {
        let (tx, tb) = (self.value(x), self.value(bias));
        if tb.rows() != 1 || tb.cols() != tx.cols() {
            return Err(shape_err("add_bias", tx, tb));
        }
        let mut data = tx.data().to_vec();
        for row in data.chunks_exact_mut(tx.cols().max(1)) {
            row.iter_mut().zip(tb.data()).for_each(|(e, b)| *e += b);
        }
        let out = Tensor::matrix(tx.rows(), tx.cols(), data)?;
        let ng = self.ng(x) || self.ng(bias);
        Ok(self.push(out, Op::AddBias(x, bias), ng))
    }

    /// `x diag(s)` for `x: n x d`, `s: 1 x d`.
    pub fn scale_cols(&mut self, x: Var, s: Var) -> Result<Var> {
        let (tx, ts) = (self.value(x), self.value(s));
        if ts.rows() != 1 || ts.cols() != tx.cols() {
            return Err(shape_err("scale_cols", tx, ts));
        }
        let mut data = tx.data().to_vec();
        for row in data.chunks_exact_mut(tx.cols().max(1)) {
            row.iter_mut().zip(ts.data()).for_each(|(e, c)| *e *= c);
        }
        let out = Tensor::matrix(tx.rows(), tx.cols(), data)?;
        let ng = self.ng(x) || self.ng(s);
        Ok(self.push(out, Op::ScaleCols(x, s), ng))
    }

    pub fn relu(&mut self, x: Var) -> Var {
        self.unary(x, Op::Relu(x), |v| v.max(0.0))
    }

    pub fn tanh(&mut self, x: Var) -> Var {
        self.unary(x, Op::Tanh(x), libm::tanh)
    }

    pub fn sigmoid(&mut self, x: Var) -> Var {
        self.unary(x, Op::Sigmoid(x), sigmoid)
    }

    /// `ln(1 + eˣ)`, a smooth map onto the positive reals.
    pub fn softplus(&mut self, x: Var) -> Var {
        self.unary(x, Op::Softplus(x), softplus)
    }

    /// Inverted dropout: in training mode each entry is zeroed with
    /// probability `p` and survivors are scaled by `1 / (1 - p)`; otherwise
    /// the identity.
    pub fn dropout(&mut self, x: Var, p: f64, train: bool, rng: &mut Stream) -> Result<Var> {
        if !(0.0..1.0).contains(&p) {
            return Err(Error::invalid("dropout probability must lie in [0, 1)"));
        }
        if !train || p == 0.0 {
            return Ok(x);
        }
        let keep = 1.0 / (1.0 - p);
        let n = self.value(x).len();
        let mask: Vec<f64> = (0..n).map(|_| if rng.random::<f64>() < p { 0.0 } else { keep }).collect();
        let t = self.value(x);
        let data = t.data().iter().zip(&mask).map(|(v, m)| v * m).collect();
        let out = Tensor::matrix(t.rows(), t.cols(), data)?;
        let ng = self.ng(x);
        Ok(self.push(out, Op::Dropout(x, mask), ng))
    }

    /// Mean binary cross-entropy between `sigmoid(logits)` and `targets`,
    /// evaluated as `max(z, 0) - z y + ln(1 + e^{-|z|})`.
    pub fn bce_with_logits(&mut self, logits: Var, targets: &[f64]) -> Result<Var> {
        let t = self.value(logits);
        if t.len() != targets.len() || t.is_empty() {
            return Err(Error::ShapeMismatch {
                op: "bce_with_logits",
                left: t.shape().to_vec(),
                right: vec![targets.len()],
            });
        }
        let n = t.len() as f64;
        let loss = t
            .data()
            .iter()
            .zip(targets)
            .map(|(&z, &y)| z.max(0.0) - z * y + libm::log1p(libm::exp(-z.abs())))
            .sum::<f64>()
            / n;
        let ng = self.ng(logits);
        Ok(self.push(Tensor::scalar(loss), Op::BceWithLogits(logits, targets.to_vec()), ng))
    }

    pub fn sum(&mut self, x: Var) -> Var {
        let s = self.value(x).data().iter().sum();
        let ng = self.ng(x);
        self.push(Tensor::scalar(s), Op::Sum(x), ng)
    }

    /// Populates gradients of every differentiable value w.r.t. `loss`.
    pub fn backward(&mut self, loss: Var) -> Result<()> {
        if self.backward_done {
            return Err(Error::BackwardTwice);
        }
        let shape = self.value(loss).shape().to_vec();
        if self.value(loss).len() != 1 {
            return Err(Error::NotScalar(shape));
        }
        self.backward_done = true;

        let mut grads: Vec<Option<Vec<f64>>> = (0..self.nodes.len()).map(|_| None).collect();
        grads[loss.0] = Some(vec![1.0]);

        for idx in (0..=loss.0).rev() {
            let Some(g) = grads[idx].take() else { continue };
            let node = &self.nodes[idx];
            if !node.needs_grad {
                continue;
            }
            let mut acc = |v: Var, f: &dyn Fn(&mut [f64])| {
                if !self.nodes[v.0].needs_grad {
                    return;
                }
                let slot = grads[v.0].get_or_insert_with(|| vec![0.0; self.nodes[v.0].value.len()]);
                f(slot);
            };
            match &node.op {
                Op::Leaf => {}
                Op::MatMul(a, b) => {
                    let (ta, tb) = (&self.nodes[a.0].value, &self.nodes[b.0].value);
                    let (n, m, p) = (ta.rows(), ta.cols(), tb.cols());
                    // dA = G B⊤
                    acc(*a, &|ga| {
                        for i in 0..n {
                            let gi = &g[i * p..(i + 1) * p];
                            for l in 0..m {
                                let bl = &tb.data()[l * p..(l + 1) * p];
                                ga[i * m + l] += gi.iter().zip(bl).map(|(x, y)| x * y).sum::<f64>();
                            }
                        }
                    });
                    // dB = A⊤ G
                    acc(*b, &|gb| {
                        for i in 0..n {
                            let gi = &g[i * p..(i + 1) * p];
                            for l in 0..m {
                                let s = ta.data()[i * m + l];
                                if s == 0.0 {
                                    continue;
                                }
                                for (o, x) in gb[l * p..(l + 1) * p].iter_mut().zip(gi) {
                                    *o += s * x;
                                }
                            }
                        }
                    });
                }
                Op::SpMM(s, x) => {
                    let cols = self.nodes[x.0].value.cols();
                    acc(*x, &|gx| {
                        let mut tmp = vec![0.0; g.len()];
                        s.transpose.spmm_blocks(&g, cols, &mut tmp);
                        gx.iter_mut().zip(&tmp).for_each(|(o, t)| *o += t);
                    });
                }
                Op::Add(a, b) => {
                    acc(*a, &|ga| ga.iter_mut().zip(&g).for_each(|(o, x)| *o += x));
                    acc(*b, &|gb| gb.iter_mut().zip(&g).for_each(|(o, x)| *o += x));
                }
                Op::Scale(a, c) => {
                    acc(*a, &|ga| ga.iter_mut().zip(&g).for_each(|(o, x)| *o += c * x));
                }
                Op::Hadamard(a, b) => {
                    let (ta, tb) = (self.nodes[a.0].value.data(), self.nodes[b.0].value.data());
                    acc(*a, &|ga| {
                        for ((o, x), y) in ga.iter_mut().zip(&g).zip(tb) {
                            *o += x * y;
                        }
                    });
                    acc(*b, &|gb| {
                        for ((o, x), y) in gb.iter_mut().zip(&g).zip(ta) {
                            *o += x * y;
                        }
                    });
                }
                Op::BroadcastAddCol(x, v) => {
                    let d = self.nodes[x.0].value.cols().max(1);
                    acc(*x, &|gx| gx.iter_mut().zip(&g).for_each(|(o, y)| *o += y));
                    acc(*v, &|gv| {
                        for (o, row) in gv.iter_mut().zip(g.chunks_exact(d)) {
                            *o += row.iter().sum::<f64>();
                        }
                    });
                }
                Op::AddBias(x, bias) => {
                    let d = self.nodes[x.0].value.cols().max(1);
                    acc(*x, &|gx| gx.iter_mut().zip(&g).for_each(|(o, y)| *o += y));
                    acc(*bias, &|gb| {
                        for row in g.chunks_exact(d) {
                            gb.iter_mut().zip(row).for_each(|(o, y)| *o += y);
                        }
                    });
                }
                Op::ScaleCols(x, s) => {
                    let tx = &self.nodes[x.0].value;
                    let ts = self.nodes[s.0].value.data();
                    let d = tx.cols().max(1);
                    acc(*x, &|gx| {
                        for (grow, orow) in gx.chunks_exact_mut(d).zip(g.chunks_exact(d)) {
                            for ((o, y), c) in grow.iter_mut().zip(orow).zip(ts) {
                                *o += y * c;
                            }
                        }
                    });
                    acc(*s, &|gs| {
                        for (xrow, orow) in tx.data().chunks_exact(d).zip(g.chunks_exact(d)) {
                            for ((o, y), xv) in gs.iter_mut().zip(orow).zip(xrow) {
                                *o += y * xv;
                            }
                        }
                    });
                }
                Op::Relu(x) => {
                    let out = node.value.data();
                    acc(*x, &|gx| {
                        for ((o, y), v) in gx.iter_mut().zip(&g).zip(out) {
                            if *v > 0.0 {
                                *o += y;
                            }
                        }
                    });
                }
                Op::Tanh(x) => {
                    let out = node.value.data();
                    acc(*x, &|gx| {
                        for ((o, y), v) in gx.iter_mut().zip(&g).zip(out) {
                            *o += y * (1.0 - v * v);
                        }
                    });
                }
                Op::Sigmoid(x) => {
                    let out = node.value.data();
                    acc(*x, &|gx| {
                        for ((o, y), v) in gx.iter_mut().zip(&g).zip(out) {
                            *o += y * v * (1.0 - v);
                        }
                    });
                }
                Op::Softplus(x) => {
                    let input = self.nodes[x.0].value.data();
                    acc(*x, &|gx| {
                        for ((o, y), v) in gx.iter_mut().zip(&g).zip(input) {
                            *o += y * sigmoid(*v);
                        }
                    });
                }
                Op::Dropout(x, mask) => {
                    acc(*x, &|gx| {
                        for ((o, y), m) in gx.iter_mut().zip(&g).zip(mask) {
                            *o += y * m;
                        }
                    });
                }
                Op::BceWithLogits(z, targets) => {
                    let logits = self.nodes[z.0].value.data();
                    let scale = g[0] / logits.len() as f64;
                    acc(*z, &|gz| {
                        for ((o, &zv), &y) in gz.iter_mut().zip(logits).zip(targets) {
                            *o += scale * (sigmoid(zv) - y);
                        }
                    });
                }
                Op::Sum(x) => {
                    acc(*x, &|gx| gx.iter_mut().for_each(|o| *o += g[0]));
                }
            }
            self.nodes[idx].value.grad = Some(g);
        }
        // leaves hold their gradient after the loop; intermediate values too
        Ok(())
    }
}
