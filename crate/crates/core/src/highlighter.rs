//! Common interface over the three highlighting strategies.

use crate::baseline::regex_highlight;
use crate::minilang::{bf_highlight, lex, FrontendError};
use crate::nn::{Model, ModelError, SavedModel};
use crate::task::CoverageTask;
use crate::token::Heta;

#[derive(Debug, thiserror::Error)]
pub enum HighlightError {
    #[error(transparent)]
    Frontend(#[from] FrontendError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("model head is sized for {model_classes} classes, task {task} has {task_classes}")]
    TaskWidth {
        task: CoverageTask,
        model_classes: usize,
        task_classes: usize,
    },
}

/// A chars → labeled-spans function.
pub trait Highlighter {
    fn name(&self) -> &str;

    fn highlight(&self, chars: &str) -> Result<Vec<Heta>, HighlightError>;

    /// The prediction path alone, for latency measurement; implementations
    /// must not touch the filesystem or format output here.
    fn predict_only(&self, chars: &str) -> Result<(), HighlightError> {
        self.highlight(chars).map(|_| ())
    }

    /// The task the outputs were trained against, when fixed; `None` means
    /// the outputs are full-coverage and adapt to any task.
    fn task_binding(&self) -> Option<CoverageTask> {
        None
    }
}

/// The reference resolver: exact on valid files, fails on everything else.
pub struct BfHighlighter;

impl Highlighter for BfHighlighter {
    fn name(&self) -> &str {
        "bf"
    }

    fn highlight(&self, chars: &str) -> Result<Vec<Heta>, HighlightError> {
        Ok(bf_highlight(chars)?)
    }
}

/// The pattern-table baseline: total on every input.
pub struct RegexHighlighter;

impl Highlighter for RegexHighlighter {
    fn name(&self) -> &str {
        "regex"
    }

    fn highlight(&self, chars: &str) -> Result<Vec<Heta>, HighlightError> {
        Ok(regex_highlight(chars))
    }
}

/// A trained model behind the front-end's lexer.
pub struct NeuralHighlighter {
    model: Model,
    task: CoverageTask,
    name: String,
}

impl NeuralHighlighter {
    pub fn new(model: Model, task: CoverageTask) -> Result<Self, HighlightError> {
        if model.dims.classes != task.class_count() {
            return Err(HighlightError::TaskWidth {
                task,
                model_classes: model.dims.classes,
                task_classes: task.class_count(),
            });
        }
        let name = format!(
            "{}{}",
            if model.dims.bidirectional { "brnn" } else { "rnn" },
            model.dims.hidden
        );
        Ok(NeuralHighlighter { model, task, name })
    }

    pub fn from_saved(saved: SavedModel) -> Result<Self, HighlightError> {
        let task = saved.task;
        Self::new(saved.model, task)
    }

    pub fn task(&self) -> CoverageTask {
        self.task
    }

    pub fn model(&self) -> &Model {
        &self.model
    }
}

impl Highlighter for NeuralHighlighter {
    fn name(&self) -> &str {
        &self.name
    }

    fn highlight(&self, chars: &str) -> Result<Vec<Heta>, HighlightError> {
        let tokens = lex(chars).map_err(FrontendError::from)?;
        if tokens.is_empty() {
            return Ok(Vec::new());
        }
        let inputs: Vec<usize> = tokens.iter().map(|t| t.rule.index()).collect();
        let predicted = self.model.predict(&inputs)?;
        Ok(tokens
            .into_iter()
            .zip(predicted)
            .map(|(eta, compact)| {
                let class = self
                    .task
                    .class_at(compact)
                    .expect("prediction is within the task head");
                Heta::from_eta(eta, class)
            })
            .collect())
    }

    fn predict_only(&self, chars: &str) -> Result<(), HighlightError> {
        // lexing, tensorizing, and the full class vector; no span assembly
        let tokens = lex(chars).map_err(FrontendError::from)?;
        if tokens.is_empty() {
            return Ok(());
        }
        let inputs: Vec<usize> = tokens.iter().map(|t| t.rule.index()).collect();
        let predicted = self.model.predict(&inputs)?;
        std::hint::black_box(predicted);
        Ok(())
    }

    fn task_binding(&self) -> Option<CoverageTask> {
        Some(self.task)
    }
}
