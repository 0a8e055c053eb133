//! Exact gradients via backpropagation through time, over the full
//! sequence, for both directions.

use ndarray::linalg::general_mat_vec_mul;
use ndarray::{s, Array1, Array2};

use super::{CellWeights, Model, ModelError};

/// Gradient blocks, shaped exactly like [`Model`]'s parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct Gradients {
    pub embedding: Array2<f64>,
    pub fwd: CellWeights,
    pub rev: Option<CellWeights>,
    pub w_out: Array2<f64>,
    pub b_out: Array1<f64>,
}

impl Gradients {
    /// Same fixed block order as [`Model::visit_params`].
    pub fn visit(&self, mut f: impl FnMut(&[f64])) {
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
}

/// `acc += a ⊗ b`
fn add_outer(acc: &mut Array2<f64>, a: &Array1<f64>, b: &ndarray::ArrayView1<f64>) {
    let cols = b.len();
    let acc_flat = acc.as_slice_mut().unwrap();
    for (i, &ai) in a.iter().enumerate() {
        let row = &mut acc_flat[i * cols..(i + 1) * cols];
        for (slot, &bj) in row.iter_mut().zip(b.iter()) {
            *slot += ai * bj;
        }
    }
}

/// Mean cross-entropy loss and its exact gradients for one sample.
pub fn backward(
    model: &Model,
    inputs: &[usize],
    targets: &[usize],
) -> Result<(f64, Gradients), ModelError> {
    if inputs.len() != targets.len() {
        return Err(ModelError::LengthMismatch {
            inputs: inputs.len(),
            targets: targets.len(),
        });
    }
    let pass = model.run_forward(inputs)?;
    let loss = super::loss(&pass.probs, targets)?;

    let n = inputs.len();
    let h = model.dims.hidden;
    let scale = 1.0 / n as f64;
    let mut grads = model.zero_grads();

    // output head, and the direct gradient each position sends into the
    // hidden states
    let mut d_fwd_direct = vec![Array1::<f64>::zeros(h); n];
    let mut d_rev_direct = model
        .rev
        .as_ref()
        .map(|_| vec![Array1::<f64>::zeros(h); n]);
    let w_out_fwd = model.w_out.slice(s![.., ..h]);
    for t in 0..n {
        let mut dz = pass.probs[t].clone();
        dz[targets[t]] -= 1.0;
        dz.mapv_inplace(|v| v * scale);
        add_outer(&mut grads.w_out, &dz, &pass.cats[t].view());
        grads.b_out += &dz;
        general_mat_vec_mul(1.0, &w_out_fwd.t(), &dz, 0.0, &mut d_fwd_direct[t]);
        if let Some(d_rev) = &mut d_rev_direct {
            let w_out_rev = model.w_out.slice(s![.., h..]);
            general_mat_vec_mul(1.0, &w_out_rev.t(), &dz, 0.0, &mut d_rev[t]);
        }
    }

    // forward chain: gradient flows from position t+1 back to t
    let mut carry = Array1::<f64>::zeros(h);
    let mut delta = Array1::<f64>::zeros(h);
    for t in (0..n).rev() {
        for i in 0..h {
            let total = d_fwd_direct[t][i] + carry[i];
            delta[i] = total * (1.0 - pass.fwd[t][i] * pass.fwd[t][i]);
        }
        add_outer(&mut grads.fwd.w_in, &delta, &model.embedding.row(inputs[t]));
        if t > 0 {
            add_outer(&mut grads.fwd.w_rec, &delta, &pass.fwd[t - 1].view());
        }
        grads.fwd.bias += &delta;
        let mut emb_row = grads.embedding.row_mut(inputs[t]);
        general_mat_vec_mul(1.0, &model.fwd.w_in.t(), &delta, 1.0, &mut emb_row);
        general_mat_vec_mul(1.0, &model.fwd.w_rec.t(), &delta, 0.0, &mut carry);
    }

    // reverse chain, mirrored: gradient flows from position t-1 back to t
    if let (Some(cell), Some(states), Some(direct), Some(gcell)) = (
        model.rev.as_ref(),
        pass.rev.as_ref(),
        d_rev_direct.as_ref(),
        grads.rev.as_mut(),
    ) {
        carry.fill(0.0);
        for t in 0..n {
            for i in 0..h {
                let total = direct[t][i] + carry[i];
                delta[i] = total * (1.0 - states[t][i] * states[t][i]);
            }
            add_outer(&mut gcell.w_in, &delta, &model.embedding.row(inputs[t]));
            if t + 1 < n {
                add_outer(&mut gcell.w_rec, &delta, &states[t + 1].view());
            }
            gcell.bias += &delta;
            let mut emb_row = grads.embedding.row_mut(inputs[t]);
            general_mat_vec_mul(1.0, &cell.w_in.t(), &delta, 1.0, &mut emb_row);
            general_mat_vec_mul(1.0, &cell.w_rec.t(), &delta, 0.0, &mut carry);
        }
    }

    Ok((loss, grads))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nn::Dims;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    /// Central finite differences over every parameter.
    fn numeric_gradients(model: &Model, inputs: &[usize], targets: &[usize]) -> Vec<Vec<f64>> {
        let eps = 1e-5;
        let mut blocks = Vec::new();
        let mut lens = Vec::new();
        model.visit_params(|p| lens.push(p.len()));
        for (block_idx, &len) in lens.iter().enumerate() {
            let mut block = Vec::with_capacity(len);
            for j in 0..len {
                let mut probe = |delta: f64| {
                    let mut m = model.clone();
                    let mut k = 0;
                    m.visit_params_mut(|p| {
                        if k == block_idx {
                            p[j] += delta;
                        }
                        k += 1;
                    });
                    let probs = m.forward(inputs).unwrap();
                    crate::nn::loss(&probs, targets).unwrap()
                };
                let plus = probe(eps);
                let minus = probe(-eps);
                block.push((plus - minus) / (2.0 * eps));
            }
            blocks.push(block);
        }
        blocks
    }

    fn max_relative_error(analytic: &Gradients, numeric: &[Vec<f64>]) -> f64 {
        let mut flat = Vec::new();
        analytic.visit(|b| flat.push(b.to_vec()));
        assert_eq!(flat.len(), numeric.len());
        let mut worst = 0.0f64;
        for (a_block, n_block) in flat.iter().zip(numeric) {
            assert_eq!(a_block.len(), n_block.len());
            for (&a, &n) in a_block.iter().zip(n_block) {
                let rel = (a - n).abs() / a.abs().max(n.abs()).max(1e-4);
                worst = worst.max(rel);
            }
        }
        worst
    }

    #[test]
    fn gradient_check_against_central_differences() {
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        for trial in 0..100 {
            let bidirectional = trial % 2 == 0;
            let dims = Dims {
                vocab: 5,
                embed: 4,
                hidden: 3,
                classes: 4,
                bidirectional,
            };
            let model = Model::init(dims, 1000 + trial as u64);
            let len = rng.random_range(1..=6);
            let inputs: Vec<usize> = (0..len).map(|_| rng.random_range(0..5)).collect();
            let targets: Vec<usize> = (0..len).map(|_| rng.random_range(0..4)).collect();
            let (_, analytic) = backward(&model, &inputs, &targets).unwrap();
            let numeric = numeric_gradients(&model, &inputs, &targets);
            let err = max_relative_error(&analytic, &numeric);
            assert!(
                err < 1e-4,
                "trial {trial} (bidirectional={bidirectional}): max relative error {err:e}"
            );
        }
    }

    #[test]
    fn unused_vocabulary_rows_get_zero_embedding_gradient() {
        let dims = Dims {
            vocab: 6,
            embed: 3,
            hidden: 2,
            classes: 2,
            bidirectional: true,
        };
        let model = Model::init(dims, 5);
        let (_, grads) = backward(&model, &[1, 1, 3], &[0, 1, 0]).unwrap();
        for row in [0usize, 2, 4, 5] {
            assert!(grads.embedding.row(row).iter().all(|&g| g == 0.0));
        }
        assert!(grads.embedding.row(1).iter().any(|&g| g != 0.0));
    }

    #[test]
    fn backward_loss_matches_forward_loss() {
        let dims = Dims {
            vocab: 4,
            embed: 3,
            hidden: 2,
            classes: 3,
            bidirectional: false,
        };
        let model = Model::init(dims, 8);
        let inputs = [0, 1, 2, 3, 2, 1];
        let targets = [0, 1, 2, 0, 1, 2];
        let (l, _) = backward(&model, &inputs, &targets).unwrap();
        let probs = model.forward(&inputs).unwrap();
        assert_eq!(l, crate::nn::loss(&probs, &targets).unwrap());
    }

    #[test]
    fn gradients_stay_finite_on_a_long_generated_file() {
        let src = crate::minilang::generate_program(17, 10_000);
        let tokens = crate::minilang::lex(&src).unwrap();
        assert!(tokens.len() >= 10_000 * 7 / 10, "file long enough");
        let inputs: Vec<usize> = tokens.iter().map(|t| t.rule.index()).collect();
        let targets = vec![0usize; inputs.len()];
        let dims = Dims {
            vocab: crate::minilang::VOCAB_SIZE,
            embed: 128,
            hidden: 16,
            classes: 12,
            bidirectional: true,
        };
        let model = Model::init(dims, 99);
        let (l, grads) = backward(&model, &inputs, &targets).unwrap();
        assert!(l.is_finite());
        grads.visit(|block| assert!(block.iter().all(|g| g.is_finite())));
    }
}
