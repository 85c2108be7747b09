//! Deck transformations, crossing words and loop contraction.

mod deck;
mod loops;
mod word;

pub use deck::{
    deck_apply, deck_group, deck_rigidity, deck_samples, deck_verify, DeckCandidate, DeckElement,
    DeckGroupSummary, DeckGroupTable, DeckReport, NonCommutingWitness, RegularPart,
    RigidityVerdict, DECK_GROUP_MAX_K,
};
pub use loops::{
    contract_loop, crossing_word, forced_contraction, loop_class, passages, probe_loop,
    ContractionCertificate, ContractionStage, PLLoopL, Passage, PassageKind, StageKind,
};
pub use word::{
    reduce_with, reduce_word, Cancellation, Letter, ReducedWord, Reduction, ReductionRule, Sign,
    Word,
};
