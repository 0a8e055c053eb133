//! The learned sequence labeler: embedding, a single recurrent layer
//! (optionally bidirectional), and a linear head with softmax, mapping a
//! token-rule sequence to one highlighting class per token.
//!
//! Everything numeric is 64-bit and single-threaded: training trajectories
//! are bit-reproducible given a seed.

mod adam;
mod backprop;
mod io;
mod train;

pub use adam::Adam;
pub use backprop::{backward, Gradients};
pub use io::{load_model, save_model, ModelIoError, SavedModel};
pub use train::{train, History, Sample, TrainSchedule};

use ndarray::linalg::general_mat_vec_mul;
use ndarray::{s, Array1, Array2};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Width of the embedding layer: the smallest power of two above the
/// demonstration front-end's vocabulary.
pub const EMBEDDING_DIM: usize = 128;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ModelError {
    #[error("hidden width {0} is not supported; use 16 or 32")]
    HiddenWidth(usize),
    #[error("vocabulary must be non-empty")]
    EmptyVocab,
    #[error("need at least 2 output classes, got {0}")]
    ClassCount(usize),
    #[error("token rule {rule} is outside the vocabulary of size {vocab}")]
    Vocab { rule: usize, vocab: usize },
    #[error("input sequence is empty")]
    EmptySequence,
    #[error("sequence lengths differ: {inputs} inputs vs {targets} targets")]
    LengthMismatch { inputs: usize, targets: usize },
    #[error("target class {target} is outside the {classes}-class head")]
    TargetRange { target: usize, classes: usize },
}

/// Experiment-facing configuration; hidden widths are restricted to the two
/// studied sizes. Tests build arbitrary [`Dims`] directly.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ModelConfig {
    pub vocab: usize,
    pub hidden: usize,
    pub bidirectional: bool,
    pub classes: usize,
    pub seed: u64,
}

impl ModelConfig {
    pub fn new(
        vocab: usize,
        hidden: usize,
        bidirectional: bool,
        classes: usize,
        seed: u64,
    ) -> Result<Self, ModelError> {
        if vocab == 0 {
            return Err(ModelError::EmptyVocab);
        }
        if !matches!(hidden, 16 | 32) {
            return Err(ModelError::HiddenWidth(hidden));
        }
        if classes < 2 {
            return Err(ModelError::ClassCount(classes));
        }
        Ok(ModelConfig {
            vocab,
            hidden,
            bidirectional,
            classes,
            seed,
        })
    }

    pub fn dims(&self) -> Dims {
        Dims {
            vocab: self.vocab,
            embed: EMBEDDING_DIM,
            hidden: self.hidden,
            classes: self.classes,
            bidirectional: self.bidirectional,
        }
    }

    /// A short architecture tag, e.g. `brnn16` or `rnn32`.
    pub fn arch(&self) -> String {
        format!(
            "{}{}",
            if self.bidirectional { "brnn" } else { "rnn" },
            self.hidden
        )
    }
}

/// Raw parameter shapes, unrestricted; what the math operates on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Dims {
    pub vocab: usize,
    pub embed: usize,
    pub hidden: usize,
    pub classes: usize,
    pub bidirectional: bool,
}

impl Dims {
    /// Width of the vector entering the output projection.
    pub fn head_input(&self) -> usize {
        if self.bidirectional {
            2 * self.hidden
        } else {
            self.hidden
        }
    }

    pub fn param_count(&self) -> usize {
        let cell = self.hidden * self.embed + self.hidden * self.hidden + self.hidden;
        let directions = if self.bidirectional { 2 } else { 1 };
        self.vocab * self.embed + directions * cell + self.classes * self.head_input() + self.classes
    }
}

/// One direction's recurrent weights; doubles as its gradient container.
#[derive(Debug, Clone, PartialEq)]
pub struct CellWeights {
    /// hidden × embed
    pub w_in: Array2<f64>,
    /// hidden × hidden
    pub w_rec: Array2<f64>,
    pub bias: Array1<f64>,
}

impl CellWeights {
    fn zeros(dims: &Dims) -> Self {
        CellWeights {
            w_in: Array2::zeros((dims.hidden, dims.embed)),
            w_rec: Array2::zeros((dims.hidden, dims.hidden)),
            bias: Array1::zeros(dims.hidden),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Model {
    pub dims: Dims,
    /// vocab × embed
    pub embedding: Array2<f64>,
    pub fwd: CellWeights,
    pub rev: Option<CellWeights>,
    /// classes × head_input
    pub w_out: Array2<f64>,
    pub b_out: Array1<f64>,
}

fn uniform2(rng: &mut ChaCha8Rng, rows: usize, cols: usize, bound: f64) -> Array2<f64> {
    Array2::from_shape_fn((rows, cols), |_| rng.random_range(-bound..bound))
}

fn uniform1(rng: &mut ChaCha8Rng, len: usize, bound: f64) -> Array1<f64> {
    Array1::from_shape_fn(len, |_| rng.random_range(-bound..bound))
}

impl Model {
    /// Randomly initialized weights: uniform on ±1/√hidden, the embedding on
    /// ±1/√embed, drawn in a fixed order so a seed pins every parameter.
    pub fn init(dims: Dims, seed: u64) -> Model {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let eb = 1.0 / (dims.embed as f64).sqrt();
        let hb = 1.0 / (dims.hidden as f64).sqrt();
        let embedding = uniform2(&mut rng, dims.vocab, dims.embed, eb);
        let cell = |rng: &mut ChaCha8Rng| CellWeights {
            w_in: uniform2(rng, dims.hidden, dims.embed, hb),
            w_rec: uniform2(rng, dims.hidden, dims.hidden, hb),
            bias: uniform1(rng, dims.hidden, hb),
        };
        let fwd = cell(&mut rng);
        let rev = dims.bidirectional.then(|| cell(&mut rng));
        let w_out = uniform2(&mut rng, dims.classes, dims.head_input(), hb);
        let b_out = uniform1(&mut rng, dims.classes, hb);
        Model {
            dims,
            embedding,
            fwd,
            rev,
            w_out,
            b_out,
        }
    }

    pub fn from_config(config: &ModelConfig) -> Model {
        Model::init(config.dims(), config.seed)
    }

    /// All-zero gradients shaped like this model.
    pub fn zero_grads(&self) -> Gradients {
        Gradients {
            embedding: Array2::zeros((self.dims.vocab, self.dims.embed)),
            fwd: CellWeights::zeros(&self.dims),
            rev: self.dims.bidirectional.then(|| CellWeights::zeros(&self.dims)),
            w_out: Array2::zeros((self.dims.classes, self.dims.head_input())),
            b_out: Array1::zeros(self.dims.classes),
        }
    }

    pub fn param_count(&self) -> usize {
        let mut count = 0;
        self.visit_params(|p| count += p.len());
        count
    }

    /// Visits every parameter block as a flat slice, in the fixed documented
    /// order: embedding, forward cell, reverse cell, output projection, bias.
    pub fn visit_params(&self, mut f: impl FnMut(&[f64])) {
        f(self.embedding.as_slice().unwrap());
        f(self.fwd.w_in.as_slice().unwrap());
        f(self.fwd.w_rec.as_slice().unwrap());
        f(self.fwd.bias.as_slice().unwrap());
        if let Some(rev) = &self.rev {
            f(rev.w_in.as_slice().unwrap());
            f(rev.w_rec.as_slice().unwrap());
            f(rev.bias.as_slice().unwrap());
        }
        f(self.w_out.as_slice().unwrap());
        f(self.b_out.as_slice().unwrap());
    }

    /// Mutable [`visit_params`](Self::visit_params), same order.
    pub fn visit_params_mut(&mut self, mut f: impl FnMut(&mut [f64])) {
        f(self.embedding.as_slice_mut().unwrap());
        f(self.fwd.w_in.as_slice_mut().unwrap());
        f(self.fwd.w_rec.as_slice_mut().unwrap());
        f(self.fwd.bias.as_slice_mut().unwrap());
        if let Some(rev) = &mut self.rev {
            f(rev.w_in.as_slice_mut().unwrap());
            f(rev.w_rec.as_slice_mut().unwrap());
            f(rev.bias.as_slice_mut().unwrap());
        }
        f(self.w_out.as_slice_mut().unwrap());
        f(self.b_out.as_slice_mut().unwrap());
    }

    fn check_inputs(&self, inputs: &[usize]) -> Result<(), ModelError> {
        if inputs.is_empty() {
            return Err(ModelError::EmptySequence);
        }
        for &tr in inputs {
            if tr >= self.dims.vocab {
                return Err(ModelError::Vocab {
                    rule: tr,
                    vocab: self.dims.vocab,
                });
            }
        }
        Ok(())
    }

    /// Hidden states of one direction. `reverse` runs the recurrence from
    /// the end of the sequence toward the start.
    fn run_direction(&self, cell: &CellWeights, inputs: &[usize], reverse: bool) -> Vec<Array1<f64>> {
        let n = inputs.len();
        let h = self.dims.hidden;
        let mut states = vec![Array1::zeros(h); n];
        let mut prev = Array1::zeros(h);
        let mut pre = Array1::zeros(h);
        let order: Box<dyn Iterator<Item = usize>> = if reverse {
            Box::new((0..n).rev())
        } else {
            Box::new(0..n)
        };
        for t in order {
            pre.assign(&cell.bias);
            general_mat_vec_mul(1.0, &cell.w_in, &self.embedding.row(inputs[t]), 1.0, &mut pre);
            general_mat_vec_mul(1.0, &cell.w_rec, &prev, 1.0, &mut pre);
            let state = pre.mapv(f64::tanh);
            prev.assign(&state);
            states[t] = state;
        }
        states
    }

    /// Full states pass, kept for backpropagation.
    pub(crate) fn run_forward(&self, inputs: &[usize]) -> Result<ForwardPass, ModelError> {
        self.check_inputs(inputs)?;
        let fwd = self.run_direction(&self.fwd, inputs, false);
        let rev = self
            .rev
            .as_ref()
            .map(|cell| self.run_direction(cell, inputs, true));

        let h = self.dims.hidden;
        let d = self.dims.head_input();
        let mut cats = Vec::with_capacity(inputs.len());
        let mut probs = Vec::with_capacity(inputs.len());
        for t in 0..inputs.len() {
            let mut cat = Array1::zeros(d);
            cat.slice_mut(s![..h]).assign(&fwd[t]);
            if let Some(rev) = &rev {
                cat.slice_mut(s![h..]).assign(&rev[t]);
            }
            let mut logits = self.b_out.clone();
            general_mat_vec_mul(1.0, &self.w_out, &cat, 1.0, &mut logits);
            probs.push(softmax(&logits));
            cats.push(cat);
        }
        Ok(ForwardPass {
            fwd,
            rev,
            cats,
            probs,
        })
    }

    /// Per-position probability vectors over the output classes.
    pub fn forward(&self, inputs: &[usize]) -> Result<Vec<Array1<f64>>, ModelError> {
        Ok(self.run_forward(inputs)?.probs)
    }

    /// Per-position argmax, ties broken toward the lowest class index.
    pub fn predict(&self, inputs: &[usize]) -> Result<Vec<usize>, ModelError> {
        let probs = self.forward(inputs)?;
        Ok(probs.iter().map(|p| argmax(p)).collect())
    }
}

pub(crate) struct ForwardPass {
    pub fwd: Vec<Array1<f64>>,
    pub rev: Option<Vec<Array1<f64>>>,
    /// Concatenated head inputs per position.
    pub cats: Vec<Array1<f64>>,
    pub probs: Vec<Array1<f64>>,
}

/// Numerically stable softmax: max subtraction, then normalization.
pub fn softmax(logits: &Array1<f64>) -> Array1<f64> {
    let max = logits.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut out = logits.mapv(|z| (z - max).exp());
    let sum = out.sum();
    out.mapv_inplace(|e| e / sum);
    out
}

pub fn argmax(p: &Array1<f64>) -> usize {
    let mut best = 0;
    for (i, &v) in p.iter().enumerate() {
        if v > p[best] {
            best = i;
        }
    }
    best
}

/// Mean cross-entropy of `probs` against target class indices, with the
/// probability clamped at 1e-12 so the result stays finite.
pub fn loss(probs: &[Array1<f64>], targets: &[usize]) -> Result<f64, ModelError> {
    if probs.len() != targets.len() {
        return Err(ModelError::LengthMismatch {
            inputs: probs.len(),
            targets: targets.len(),
        });
    }
    if probs.is_empty() {
        return Err(ModelError::EmptySequence);
    }
    let mut total = 0.0;
    for (p, &y) in probs.iter().zip(targets) {
        if y >= p.len() {
            return Err(ModelError::TargetRange {
                target: y,
                classes: p.len(),
            });
        }
        total -= p[y].max(1e-12).ln();
    }
    Ok(total / probs.len() as f64)
}
