//! Sequence providers: γ(n), p(n), modular-form coefficients and
//! user-supplied data, plus the on-disk γ cache.

pub mod cache;
pub mod file;
pub mod partition;
pub mod provider;

pub use cache::{CacheRecord, GammaCache, CACHE_FILE_NAME};
pub use file::{load_sequence, SequenceFileFormat};
pub use partition::{partition, partition_table};
pub use provider::{SequenceKind, SequenceProvider};
