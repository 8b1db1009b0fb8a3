use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use super::{build_laplacian, BpgnnConfig};
use crate::error::{check_len, Error, Result};
use crate::qubo::{BinaryAssignment, ObservedVector, QuboInstance};
use crate::rng::{self, Stream};
use crate::tensor::{SparseOperator, Tape, Tensor, Var};

/// `ln(e - 1)`: raw diffusion value whose softplus is exactly 1.
const UNIT_DIFFUSION_RAW: f64 = 0.541_324_854_612_918_1;

/// Sparse operators of one problem graph, shared across batches.
#[derive(Debug, Clone)]
pub struct GraphOperators {
    pub adjacency: Arc<SparseOperator>,
    pub laplacian: Arc<SparseOperator>,
}

impl GraphOperators {
    pub fn new(instance: &QuboInstance) -> Self {
        GraphOperators {
            adjacency: SparseOperator::new(instance.matrix().clone()),
            laplacian: SparseOperator::new(build_laplacian(instance)),
        }
    }

    pub fn k(&self) -> usize {
        self.adjacency.n()
    }
}

pub enum Mode<'a> {
    Eval,
    Train(&'a mut Stream),
}

/// Network weights plus the configuration that fixes their shapes.
#[derive(Debug, Clone, PartialEq)]
pub struct BpgnnModel {
    pub config: BpgnnConfig,
    names: Vec<String>,
    params: Vec<Tensor>,
}

fn expected_shapes(config: &BpgnnConfig) -> Vec<(String, Vec<usize>)> {
    let d = config.d;
    let mut s = vec![
        ("enc.w1".into(), vec![1, d]),
        ("enc.b1".into(), vec![1, d]),
        ("enc.w2".into(), vec![d, d]),
        ("enc.b2".into(), vec![1, d]),
    ];
    for l in 0..config.layers {
        for mlp in ["g", "f"] {
            s.push((format!("layer{l}.{mlp}.w1"), vec![d, d]));
            s.push((format!("layer{l}.{mlp}.b1"), vec![1, d]));
            s.push((format!("layer{l}.{mlp}.w2"), vec![d, d]));
            s.push((format!("layer{l}.{mlp}.b2"), vec![1, d]));
        }
        s.push((format!("layer{l}.sigma"), vec![1, d]));
    }
    s.push(("dec.w".into(), vec![d, 1]));
    s.push(("dec.b".into(), vec![1, 1]));
    s
}

impl BpgnnModel {
    /// Seeded initialization: weights and biases `U(-1/√fan_in, 1/√fan_in)`,
    /// diffusion coefficients start at 1.
    pub fn new(config: BpgnnConfig) -> Result<Self> {
        config.validate()?;
        let mut r = rng::stream(config.seed);
        let mut names = Vec::new();
        let mut params = Vec::new();
        for (name, shape) in expected_shapes(&config) {
            let n: usize = shape.iter().product();
            let data = if name.ends_with(".sigma") {
                vec![UNIT_DIFFUSION_RAW; n]
            } else {
                let fan_in = if name == "enc.w1" || name == "enc.b1" { 1 } else { config.d };
                let bound = 1.0 / libm::sqrt(fan_in as f64);
                (0..n).map(|_| rng::uniform(&mut r, -bound, bound)).collect()
            };
            names.push(name);
            params.push(Tensor::new(shape, data)?);
        }
        Ok(BpgnnModel { config, names, params })
    }

    /// Rebuilds a model from named tensors; names and shapes must match the
    /// configuration exactly.
    pub fn from_named(config: BpgnnConfig, mut named: Vec<(String, Tensor)>) -> Result<Self> {
        config.validate()?;
        let mut names = Vec::new();
        let mut params = Vec::new();
        for (name, shape) in expected_shapes(&config) {
            let pos = named
                .iter()
                .position(|(n, _)| *n == name)
                .ok_or_else(|| Error::MissingParameter(name.clone()))?;
            let (_, t) = named.swap_remove(pos);
            if t.shape() != shape.as_slice() {
                return Err(Error::ParameterShape {
                    name,
                    expected: shape,
                    found: t.shape().to_vec(),
                });
            }
            names.push(name);
            params.push(t);
        }
        if let Some((extra, _)) = named.into_iter().next() {
            return Err(Error::UnexpectedParameter(extra));
        }
        Ok(BpgnnModel { config, names, params })
    }

    pub fn named_params(&self) -> impl Iterator<Item = (&str, &Tensor)> {
        self.names.iter().map(String::as_str).zip(&self.params)
    }

    pub fn params(&self) -> &[Tensor] {
        &self.params
    }

    pub fn params_mut(&mut self) -> &mut [Tensor] {
        &mut self.params
    }

    pub fn param(&self, name: &str) -> Option<&Tensor> {
        self.names.iter().position(|n| n == name).map(|i| &self.params[i])
    }

    pub fn param_mut(&mut self, name: &str) -> Option<&mut Tensor> {
        self.names.iter().position(|n| n == name).map(move |i| &mut self.params[i])
    }

    /// Effective diffusion coefficients of layer `l` (all `≥ 0`).
    pub fn diffusion_coefficients(&self, l: usize) -> Vec<f64> {
        let raw = self.param(&format!("layer{l}.sigma")).expect("layer exists");
        raw.data()
            .iter()
            .map(|&x| if self.config.learn_diffusion { x.max(0.0) + libm::log1p(libm::exp(-x.abs())) } else { 1.0 })
            .collect()
    }

    /// Records the network on `tape` for a batch of observed vectors stacked
    /// into one column (`B k x 1`). Returns the logits and the parameter
    /// handles, in [`BpgnnModel::params`] order.
    pub fn record(
        &self,
        tape: &mut Tape,
        ops: &GraphOperators,
        b_stacked: &[f64],
        mut mode: Mode<'_>,
    ) -> Result<(Var, Vec<Var>)> {
        let k = ops.k();
        if k == 0 || !b_stacked.len().is_multiple_of(k) || b_stacked.is_empty() {
            return Err(Error::DimensionMismatch {
                expected: k,
                found: b_stacked.len(),
            });
        }
        let train = matches!(mode, Mode::Train(_));
        let p = self.config.dropout;
        let pv: Vec<Var> = self
            .params
            .iter()
            .map(|t| tape.leaf(t.clone().with_grad()))
            .collect();
        let by = |name: &str| pv[self.names.iter().position(|n| n == name).expect("known parameter")];

        let mut dropout = |tape: &mut Tape, x: Var| -> Result<Var> {
            match &mut mode {
                Mode::Train(r) => tape.dropout(x, p, train, r),
                Mode::Eval => Ok(x),
            }
        };

        let b = tape.constant(Tensor::column(b_stacked.to_vec()));
        let mlp = |tape: &mut Tape, x: Var, prefix: &str| -> Result<Var> {
            let w1 = by(&format!("{prefix}.w1"));
            let b1 = by(&format!("{prefix}.b1"));
            let w2 = by(&format!("{prefix}.w2"));
            let b2 = by(&format!("{prefix}.b2"));
            let y = tape.matmul(x, w1)?;
            let y = tape.add_bias(y, b1)?;
            let y = tape.relu(y);
            let y = tape.matmul(y, w2)?;
            tape.add_bias(y, b2)
        };

        // encoder: 1 -> d -> d
        let e = tape.matmul(b, by("enc.w1"))?;
        let e = tape.add_bias(e, by("enc.b1"))?;
        let e = tape.relu(e);
        let e = dropout(tape, e)?;
        let e = tape.matmul(e, by("enc.w2"))?;
        let mut h = tape.add_bias(e, by("enc.b2"))?;

        let eps = self.config.step;
        let unit = tape.constant(Tensor::filled(1, self.config.d, 1.0));
        for l in 0..self.config.layers {
            let u = if self.config.use_qubo_features {
                let ah = tape.spmm(&ops.adjacency, h)?;
                let shifted = tape.broadcast_add_col(ah, b)?;
                let r = tape.hadamard(h, shifted)?;
                let g = mlp(tape, r, &format!("layer{l}.g"))?;
                tape.add(h, g)?
            } else {
                h
            };
            let lu = tape.spmm(&ops.laplacian, u)?;
            let coef = if self.config.learn_diffusion {
                tape.softplus(by(&format!("layer{l}.sigma")))
            } else {
                unit
            };
            let diff = tape.scale_cols(lu, coef)?;
            let diff = tape.scale(diff, -eps);
            let half = tape.add(h, diff)?;
            let react = mlp(tape, half, &format!("layer{l}.f"))?;
            let react = tape.tanh(react);
            let react = tape.scale(react, eps);
            let next = tape.add(half, react)?;
            h = dropout(tape, next)?;
        }
        let logits = tape.matmul(h, by("dec.w"))?;
        let logits = tape.add_bias(logits, by("dec.b"))?;
        Ok((logits, pv))
    }

    /// Logits for a batch of observed vectors (evaluation mode).
    pub fn logits(&self, ops: &GraphOperators, b_stacked: &[f64]) -> Result<Vec<f64>> {
        let mut tape = Tape::new();
        let (out, _) = self.record(&mut tape, ops, b_stacked, Mode::Eval)?;
        Ok(tape.value(out).data().to_vec())
    }
}

/// Per-node logits (`k x 1`) for one observed vector.
pub fn forward(model: &BpgnnModel, instance: &QuboInstance, b: &ObservedVector) -> Result<Tensor> {
    check_len(instance.k(), b.len())?;
    let ops = GraphOperators::new(instance);
    Ok(Tensor::column(model.logits(&ops, b)?))
}

/// `x_i = 1` iff `sigmoid(logit_i) > threshold`.
pub fn predict(model: &BpgnnModel, instance: &QuboInstance, b: &ObservedVector, threshold: f64) -> Result<BinaryAssignment> {
    let logits = forward(model, instance, b)?;
    Ok(threshold_logits(logits.data(), threshold))
}

pub(crate) fn threshold_logits(logits: &[f64], threshold: f64) -> BinaryAssignment {
    let bits = logits
        .iter()
        .map(|&z| u8::from(1.0 / (1.0 + libm::exp(-z)) > threshold))
        .collect();
    BinaryAssignment::new(bits).expect("0/1 by construction")
}
