//! Adam with bias correction, over the model's flat parameter blocks.

use super::{Gradients, Model};

const BETA1: f64 = 0.9;
const BETA2: f64 = 0.999;
const EPS: f64 = 1e-8;

/// First and second moment estimates, one pair per parameter block.
#[derive(Debug, Clone)]
pub struct Adam {
    m: Vec<Vec<f64>>,
    v: Vec<Vec<f64>>,
    steps: u64,
}

impl Adam {
    pub fn new(model: &Model) -> Adam {
        let mut m = Vec::new();
        model.visit_params(|p| m.push(vec![0.0; p.len()]));
        Adam {
            v: m.clone(),
            m,
            steps: 0,
        }
    }

    pub fn steps(&self) -> u64 {
        self.steps
    }

    /// One update of every parameter from `grads` at learning rate `lr`.
    pub fn step(&mut self, model: &mut Model, grads: &Gradients, lr: f64) {
        self.steps += 1;
        let bc1 = 1.0 - BETA1.powi(self.steps as i32);
        let bc2 = 1.0 - BETA2.powi(self.steps as i32);

        let mut blocks = Vec::new();
        grads.visit(|g| blocks.push(g.to_vec()));

        let mut idx = 0;
        model.visit_params_mut(|params| {
            let g = &blocks[idx];
            let m = &mut self.m[idx];
            let v = &mut self.v[idx];
            for j in 0..params.len() {
                m[j] = BETA1 * m[j] + (1.0 - BETA1) * g[j];
                v[j] = BETA2 * v[j] + (1.0 - BETA2) * g[j] * g[j];
                let m_hat = m[j] / bc1;
                let v_hat = v[j] / bc2;
                params[j] -= lr * m_hat / (v_hat.sqrt() + EPS);
            }
            idx += 1;
        });
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nn::{backward, Dims};

    #[test]
    fn first_step_moves_each_parameter_by_about_lr() {
        // with bias correction, |update| ≈ lr on the first step wherever the
        // gradient is non-zero
        let dims = Dims {
            vocab: 3,
            embed: 2,
            hidden: 2,
            classes: 2,
            bidirectional: false,
        };
        let mut model = Model::init(dims, 4);
        let before = model.clone();
        let (_, grads) = backward(&model, &[0, 1, 2], &[1, 0, 1]).unwrap();
        let mut adam = Adam::new(&model);
        adam.step(&mut model, &grads, 1e-3);
        assert_eq!(adam.steps(), 1);

        let mut before_flat = Vec::new();
        before.visit_params(|p| before_flat.extend_from_slice(p));
        let mut after_flat = Vec::new();
        model.visit_params(|p| after_flat.extend_from_slice(p));
        let mut grad_flat = Vec::new();
        grads.visit(|g| grad_flat.extend_from_slice(g));

        for ((b, a), g) in before_flat.iter().zip(&after_flat).zip(&grad_flat) {
            if g.abs() > 1e-9 {
                let moved = (a - b).abs();
                assert!(moved > 0.9e-3 && moved < 1.1e-3, "moved {moved:e}");
                // the step opposes the gradient
                assert!((a - b).signum() == -g.signum());
            }
        }
    }

    #[test]
    fn training_loss_decreases_on_a_fixed_sample() {
        let dims = Dims {
            vocab: 4,
            embed: 4,
            hidden: 3,
            classes: 3,
            bidirectional: true,
        };
        let mut model = Model::init(dims, 11);
        let inputs = [0usize, 1, 2, 3, 1, 0];
        let targets = [2usize, 1, 0, 0, 1, 2];
        let mut adam = Adam::new(&model);
        let (first, _) = backward(&model, &inputs, &targets).unwrap();
        let mut last = first;
        for _ in 0..200 {
            let (l, grads) = backward(&model, &inputs, &targets).unwrap();
            adam.step(&mut model, &grads, 1e-2);
            last = l;
        }
        assert!(last < first * 0.1, "loss {first} -> {last}");
    }
}
