//! The fixed training schedule: per-sample updates, order shuffled once,
//! two epochs at 1e-3 and two at 1e-4.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{backward, Adam, Model};
use crate::oracle::OracleRecord;
use crate::task::{adapt_class, CoverageTask};

/// Ordered `(epochs, learning rate)` phases.
#[derive(Debug, Clone, PartialEq)]
pub struct TrainSchedule {
    pub phases: Vec<(usize, f64)>,
}

impl Default for TrainSchedule {
    fn default() -> Self {
        TrainSchedule {
            phases: vec![(2, 1e-3), (2, 1e-4)],
        }
    }
}

impl TrainSchedule {
    pub fn total_epochs(&self) -> usize {
        self.phases.iter().map(|(e, _)| e).sum()
    }

    /// Per-epoch learning rates, flattened.
    pub fn epoch_rates(&self) -> Vec<f64> {
        self.phases
            .iter()
            .flat_map(|&(epochs, lr)| std::iter::repeat_n(lr, epochs))
            .collect()
    }
}

/// One training or evaluation sequence: token rules in, compact class
/// indices out.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sample {
    pub inputs: Vec<usize>,
    pub targets: Vec<usize>,
}

impl Sample {
    /// Adapts a record's labels to `task` and compacts them onto the task's
    /// class indices.
    pub fn from_record(record: &OracleRecord, task: CoverageTask) -> Sample {
        let inputs = record.hetas.iter().map(|h| h.rule.index()).collect();
        let targets = record
            .hetas
            .iter()
            .map(|h| {
                task.compact_index(adapt_class(h.class, task))
                    .expect("adapted class is in the task set")
            })
            .collect();
        Sample { inputs, targets }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EpochStats {
    pub epoch: usize,
    pub learning_rate: f64,
    pub mean_train_loss: f64,
    pub val_token_accuracy: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct History {
    pub epochs: Vec<EpochStats>,
    pub optimizer_steps: u64,
}

/// Trains in place: one optimizer step per sample, sample order shuffled
/// once up front and then fixed across epochs. Validation is monitoring
/// only. Deterministic per seed.
pub fn train(
    model: &mut Model,
    train_set: &[Sample],
    val_set: &[Sample],
    schedule: &TrainSchedule,
    seed: u64,
) -> History {
    assert!(!train_set.is_empty(), "training set must be non-empty");
    let mut order: Vec<usize> = (0..train_set.len()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    order.shuffle(&mut rng);

    let mut adam = Adam::new(model);
    let mut history = Vec::new();

    for (epoch, lr) in schedule.epoch_rates().into_iter().enumerate() {
        let mut loss_total = 0.0;
        for &idx in &order {
            let sample = &train_set[idx];
            let (loss, grads) =
                backward(model, &sample.inputs, &sample.targets).expect("valid training sample");
            adam.step(model, &grads, lr);
            loss_total += loss;
        }
        history.push(EpochStats {
            epoch: epoch + 1,
            learning_rate: lr,
            mean_train_loss: loss_total / train_set.len() as f64,
            val_token_accuracy: token_accuracy(model, val_set),
        });
    }

    History {
        epochs: history,
        optimizer_steps: adam.steps(),
    }
}

/// Fraction of tokens whose argmax matches the target, over all sequences.
pub fn token_accuracy(model: &Model, samples: &[Sample]) -> f64 {
    let mut correct = 0usize;
    let mut total = 0usize;
    for sample in samples {
        let predicted = model.predict(&sample.inputs).expect("valid sample");
        total += sample.targets.len();
        correct += predicted
            .iter()
            .zip(&sample.targets)
            .filter(|(p, t)| p == t)
            .count();
    }
    if total == 0 {
        return 0.0;
    }
    correct as f64 / total as f64
}
