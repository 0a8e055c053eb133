//! Coverage tasks and the adapter that projects labels onto a task.
//!
//! A coverage task fixes the set of classes a highlighter must distinguish.
//! Labels outside the task's set collapse to [`HighlightClass::Any`], which is
//! how one stored full-coverage oracle is reused for every narrower task.

use std::fmt;

use crate::class::HighlightClass;
use crate::token::Heta;

/// One of the four coverage tasks.
///
/// - T1: Any + Lexical + Declarator
/// - T2: Any + Lexical + Identifier
/// - T3: Any + Lexical + Declarator + Identifier
/// - T4: everything (T3 + Annotation)
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CoverageTask {
    T1,
    T2,
    T3,
    T4,
}

impl CoverageTask {
    pub const ALL: [CoverageTask; 4] = [
        CoverageTask::T1,
        CoverageTask::T2,
        CoverageTask::T3,
        CoverageTask::T4,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CoverageTask::T1 => "T1",
            CoverageTask::T2 => "T2",
            CoverageTask::T3 => "T3",
            CoverageTask::T4 => "T4",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.iter().copied().find(|t| t.name() == name)
    }

    /// The admissible classes of this task, in global code order.
    pub fn classes(self) -> Vec<HighlightClass> {
        let mut set = vec![HighlightClass::Any];
        set.extend(HighlightClass::LEXICAL);
        match self {
            CoverageTask::T1 => set.extend(HighlightClass::DECLARATOR),
            CoverageTask::T2 => set.extend(HighlightClass::IDENTIFIER),
            CoverageTask::T3 => {
                set.extend(HighlightClass::DECLARATOR);
                set.extend(HighlightClass::IDENTIFIER);
            }
            CoverageTask::T4 => {
                set.extend(HighlightClass::DECLARATOR);
                set.extend(HighlightClass::IDENTIFIER);
                set.extend(HighlightClass::ANNOTATION);
            }
        }
        set.sort();
        set
    }

    pub fn contains(self, class: HighlightClass) -> bool {
        match self {
            CoverageTask::T4 => true,
            _ => self.classes().contains(&class),
        }
    }

    /// Number of classes the task distinguishes (the model's output width).
    pub fn class_count(self) -> usize {
        self.classes().len()
    }

    /// Compact index of `class` within this task's class list.
    ///
    /// Only defined for classes the task contains; adapt first.
    pub fn compact_index(self, class: HighlightClass) -> Option<usize> {
        self.classes().iter().position(|&c| c == class)
    }

    /// Inverse of [`compact_index`](Self::compact_index).
    pub fn class_at(self, index: usize) -> Option<HighlightClass> {
        self.classes().get(index).copied()
    }

    /// Whether every class of `self` is a class of `other`.
    pub fn is_subtask_of(self, other: CoverageTask) -> bool {
        let sup = other.classes();
        self.classes().iter().all(|c| sup.contains(c))
    }
}

impl fmt::Display for CoverageTask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Projects `class` onto `task`: identity when the task covers it, `Any`
/// otherwise. Idempotent.
pub fn adapt_class(class: HighlightClass, task: CoverageTask) -> HighlightClass {
    if task.contains(class) {
        class
    } else {
        HighlightClass::Any
    }
}

/// Element-wise [`adapt_class`] over a token sequence; spans, texts, and
/// token rules are untouched.
pub fn adapt_oracle(seq: &[Heta], task: CoverageTask) -> Vec<Heta> {
    seq.iter()
        .map(|h| {
            let mut out = h.clone();
            out.class = adapt_class(h.class, task);
            out
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::token::TokenRuleId;
    use proptest::prelude::*;

    #[test]
    fn t1_class_set_is_the_lexical_and_declarator_groups() {
        let t1 = CoverageTask::T1.classes();
        let expected = vec![
            HighlightClass::Any,
            HighlightClass::Keyword,
            HighlightClass::Literal,
            HighlightClass::CharStringLiteral,
            HighlightClass::Comment,
            HighlightClass::ClassDeclarator,
            HighlightClass::FunctionDeclarator,
            HighlightClass::VariableDeclarator,
        ];
        assert_eq!(t1, expected);
    }

    #[test]
    fn t4_covers_all_twelve_classes() {
        assert_eq!(CoverageTask::T4.classes(), HighlightClass::ALL.to_vec());
    }

    #[test]
    fn t1_t2_intersection_is_any_plus_lexical() {
        let t1 = CoverageTask::T1.classes();
        let t2 = CoverageTask::T2.classes();
        let inter: Vec<_> = t1.into_iter().filter(|c| t2.contains(c)).collect();
        let mut expected = vec![HighlightClass::Any];
        expected.extend(HighlightClass::LEXICAL);
        assert_eq!(inter, expected);
    }

    #[test]
    fn task_inclusion_lattice() {
        use CoverageTask::*;
        assert!(T1.is_subtask_of(T3) && T1.is_subtask_of(T4));
        assert!(T2.is_subtask_of(T3) && T2.is_subtask_of(T4));
        assert!(T3.is_subtask_of(T4));
        assert!(!T1.is_subtask_of(T2) && !T2.is_subtask_of(T1));
        assert!(!T4.is_subtask_of(T3));
        for t in CoverageTask::ALL {
            assert!(t.is_subtask_of(t));
            assert!(t.contains(HighlightClass::Any));
        }
    }

    #[test]
    fn adapt_examples() {
        use CoverageTask::*;
        use HighlightClass::*;
        assert_eq!(adapt_class(FieldIdentifier, T1), Any);
        assert_eq!(adapt_class(Keyword, T1), Keyword);
        assert_eq!(adapt_class(AnnotationDeclarator, T3), Any);
        assert_eq!(adapt_class(AnnotationDeclarator, T4), AnnotationDeclarator);
    }

    #[test]
    fn compact_indices_round_trip() {
        for task in CoverageTask::ALL {
            for (i, c) in task.classes().into_iter().enumerate() {
                assert_eq!(task.compact_index(c), Some(i));
                assert_eq!(task.class_at(i), Some(c));
            }
            assert_eq!(task.class_at(task.class_count()), None);
        }
    }

    #[test]
    fn adapt_oracle_changes_only_the_class_field() {
        let seq = vec![
            Heta {
                start: 0,
                end: 0,
                text: "@".into(),
                rule: TokenRuleId(22),
                class: HighlightClass::AnnotationDeclarator,
            },
            Heta {
                start: 1,
                end: 1,
                text: "A".into(),
                rule: TokenRuleId(13),
                class: HighlightClass::AnnotationDeclarator,
            },
            Heta {
                start: 3,
                end: 7,
                text: "class".into(),
                rule: TokenRuleId(0),
                class: HighlightClass::Keyword,
            },
            Heta {
                start: 9,
                end: 9,
                text: "B".into(),
                rule: TokenRuleId(13),
                class: HighlightClass::ClassDeclarator,
            },
        ];
        let adapted = adapt_oracle(&seq, CoverageTask::T2);
        assert_eq!(adapted.len(), seq.len());
        for (orig, new) in seq.iter().zip(&adapted) {
            assert_eq!((orig.start, orig.end), (new.start, new.end));
            assert_eq!(orig.text, new.text);
            assert_eq!(orig.rule, new.rule);
        }
        // both annotation tokens and the class declarator collapse under T2
        assert_eq!(adapted[0].class, HighlightClass::Any);
        assert_eq!(adapted[1].class, HighlightClass::Any);
        assert_eq!(adapted[2].class, HighlightClass::Keyword);
        assert_eq!(adapted[3].class, HighlightClass::Any);
        // T4 adaptation is the identity
        assert_eq!(adapt_oracle(&seq, CoverageTask::T4), seq);
        // empty in, empty out
        assert!(adapt_oracle(&[], CoverageTask::T1).is_empty());
    }

    proptest! {
        #[test]
        fn adapter_closure_and_idempotence(code in 0u8..12, task_idx in 0usize..4) {
            let class = HighlightClass::from_code(code).unwrap();
            let task = CoverageTask::ALL[task_idx];
            let adapted = adapt_class(class, task);
            prop_assert!(task.contains(adapted));
            prop_assert_eq!(adapt_class(adapted, task), adapted);
        }

        #[test]
        fn adapter_monotone_refinement(code in 0u8..12) {
            use CoverageTask::*;
            let class = HighlightClass::from_code(code).unwrap();
            for (small, big) in [(T1, T3), (T1, T4), (T2, T3), (T2, T4), (T3, T4)] {
                prop_assert_eq!(
                    adapt_class(adapt_class(class, big), small),
                    adapt_class(class, small)
                );
            }
        }
    }
}
