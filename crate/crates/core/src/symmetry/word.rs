use std::fmt;

use schemars::JsonSchema;
use serde::{Deserialize, Serialize};

/// Direction of a crossing of 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize, JsonSchema)]
#[serde(rename_all = "snake_case")]
pub enum Sign {
    /// Positive to negative; `+1`.
    Down,
    /// Negative to positive; `-1`.
    Up,
}

impl Sign {
    pub fn value(self) -> i8 {
        match self {
            Sign::Down => 1,
            Sign::Up => -1,
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Down => Sign::Up,
            Sign::Up => Sign::Down,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize, JsonSchema)]
pub struct Letter {
    pub origin: usize,
    pub sign: Sign,
}

impl Letter {
    pub fn new(origin: usize, sign: Sign) -> Self {
        Letter { origin, sign }
    }

    pub fn down(origin: usize) -> Self {
        Letter::new(origin, Sign::Down)
    }

    pub fn up(origin: usize) -> Self {
        Letter::new(origin, Sign::Up)
    }

    pub fn inverse(self) -> Letter {
        Letter::new(self.origin, self.sign.flip())
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{:+})", self.origin, self.sign.value())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize, JsonSchema)]
#[serde(transparent)]
pub struct Word(pub Vec<Letter>);

/// A word with no cancellable adjacent pair under the rule it was reduced by.
pub type ReducedWord = Word;

impl Word {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }
}

impl FromIterator<Letter> for Word {
    fn from_iter<I: IntoIterator<Item = Letter>>(iter: I) -> Self {
        Word(iter.into_iter().collect())
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return f.write_str("[]");
        }
        self.0.iter().try_for_each(|l| write!(f, "{l}"))
    }
}

/// Which adjacent pairs cancel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, JsonSchema)]
#[serde(rename_all = "snake_case")]
pub enum ReductionRule {
    /// `(i, ±1)(i, ∓1)` only.
    SameOrigin,
    /// Any pair of opposite signs; origins are ignored.
    AnyOrigin,
}

impl ReductionRule {
    pub fn cancels(self, a: Letter, b: Letter) -> bool {
        a.sign != b.sign
            && match self {
                ReductionRule::SameOrigin => a.origin == b.origin,
                ReductionRule::AnyOrigin => true,
            }
    }
}

/// Positions in the input word of one cancelled pair, `left < right`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, JsonSchema)]
pub struct Cancellation {
    pub left: usize,
    pub right: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize, JsonSchema)]
pub struct Reduction {
    pub word: ReducedWord,
    /// In the order performed; every letter strictly between `left` and
    /// `right` was cancelled by an earlier entry.
    pub trace: Vec<Cancellation>,
}

pub fn reduce_with(w: &Word, rule: ReductionRule) -> Reduction {
    let mut stack: Vec<(usize, Letter)> = Vec::with_capacity(w.len());
    let mut trace = Vec::new();
    for (right, &l) in w.0.iter().enumerate() {
        match stack.last() {
            Some(&(left, top)) if rule.cancels(top, l) => {
                stack.pop();
                trace.push(Cancellation { left, right });
            }
            _ => stack.push((right, l)),
        }
    }
    Reduction {
        word: stack.into_iter().map(|(_, l)| l).collect(),
        trace,
    }
}

/// Free reduction: cancel `(i, +1)(i, -1)` and `(i, -1)(i, +1)` until none remain.
pub fn reduce_word(w: &Word) -> ReducedWord {
    reduce_with(w, ReductionRule::SameOrigin).word
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(ls: &[(usize, i8)]) -> Word {
        ls.iter()
            .map(|&(o, s)| Letter::new(o, if s > 0 { Sign::Down } else { Sign::Up }))
            .collect()
    }

    #[test]
    fn examples() {
        assert!(reduce_word(&w(&[(1, 1), (1, -1)])).is_empty());
        let x = w(&[(1, 1), (2, -1)]);
        assert_eq!(reduce_word(&x), x);
        assert!(reduce_word(&w(&[(1, 1), (2, -1), (2, 1), (1, -1)])).is_empty());
        assert!(reduce_with(&x, ReductionRule::AnyOrigin).word.is_empty());
    }

    #[test]
    fn trace_is_nested() {
        let r = reduce_with(&w(&[(1, 1), (2, -1), (2, 1), (1, -1)]), ReductionRule::SameOrigin);
        assert_eq!(
            r.trace,
            vec![Cancellation { left: 1, right: 2 }, Cancellation { left: 0, right: 3 }]
        );
    }

    #[test]
    fn display() {
        assert_eq!(w(&[(1, 1), (2, -1)]).to_string(), "(1,+1)(2,-1)");
        assert_eq!(Word::default().to_string(), "[]");
    }
}
