//! Rich words, their exact counts, and subexponential upper bounds on the
//! number of rich words evaluated with sound tower arithmetic.

pub mod interval;
pub mod tower;

pub use interval::Interval;
pub use tower::{Cmp3, Level, TowerError, TowerReal};
pub mod eertree;
pub use eertree::{is_rich, palindromic_factors_naive, Letter, PalTree, Word, WordError};
pub mod richcount;
pub use richcount::{count_rich, count_rich_naive, enumerate_rich, sample_rich, CountTable};
pub mod bounds;
pub use bounds::{BoundConfig, BoundError, BoundReport, KSequence, PhiSpec, StepCheck};
pub mod verify;
