//! Uniform access to the sequences whose Jensen polynomials are studied.

use std::collections::HashMap;
use std::path::Path;
use std::sync::{Mutex, RwLock};

use rug::{Float, Integer};

use super::cache::GammaCache;
use super::partition::extend_table;
use crate::asymptotics::AsymParams;
use crate::bigreal::{BigReal, MIN_PREC};
use crate::error::{Error, Result};
use crate::zeta::{f_integral, gamma_exact_with, GammaSource};

/// Relative error of [`SequenceProvider::value_at`] is below
/// `2^{VALUE_SLACK_BITS − prec}`.
pub const VALUE_SLACK_BITS: u32 = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SequenceKind {
    ZetaGamma,
    Partition,
    ModularFile,
    UserFile,
}

impl SequenceKind {
    pub fn name(self) -> &'static str {
        match self {
            SequenceKind::ZetaGamma => "zeta_gamma",
            SequenceKind::Partition => "partition",
            SequenceKind::ModularFile => "modular_file",
            SequenceKind::UserFile => "user_file",
        }
    }
}

/// One tabulated value, kept exact until a precision is requested.
#[derive(Clone, Debug)]
pub(crate) enum TableValue {
    Integer(Integer),
    Decimal(String),
}

impl TableValue {
    pub(crate) fn is_positive(&self) -> bool {
        match self {
            TableValue::Integer(i) => *i > 0,
            TableValue::Decimal(text) => Float::parse(text)
                .map(|p| Float::with_val(64, p) > 0u32)
                .unwrap_or(false),
        }
    }

    fn to_big(&self, prec: u32) -> BigReal {
        match self {
            TableValue::Integer(i) => BigReal::from_integer(i, prec),
            TableValue::Decimal(text) => BigReal::new(Float::with_val(
                prec,
                Float::parse(text).expect("validated on load"),
            )),
        }
    }
}

#[derive(Debug)]
struct ZetaSource {
    cache: Option<GammaCache>,
    f_memo: Mutex<HashMap<(u64, u32), BigReal>>,
    gamma_memo: Mutex<HashMap<(u64, u32), BigReal>>,
}

impl ZetaSource {
    fn f(&self, m: u64, work: u32) -> Result<BigReal> {
        if let Some(v) = self.f_memo.lock().expect("memo lock").get(&(m, work)) {
            return Ok(v.clone());
        }
        let v = f_integral(m as f64, work)?;
        self.f_memo
            .lock()
            .expect("memo lock")
            .insert((m, work), v.clone());
        Ok(v)
    }

    fn gamma(&self, n: u64, prec: u32) -> Result<BigReal> {
        if let Some(v) = self.gamma_memo.lock().expect("memo lock").get(&(n, prec)) {
            return Ok(v.clone());
        }
        let cached = self
            .cache
            .as_ref()
            .and_then(|c| c.get(n, prec, GammaSource::ExactIntegral));
        let value = match cached {
            Some(v) => v,
            None => {
                let v = gamma_exact_with(n, prec, |m, w| self.f(m, w))?.value;
                if let Some(cache) = &self.cache {
                    cache.insert(n, &v, GammaSource::ExactIntegral)?;
                }
                v
            }
        };
        self.gamma_memo
            .lock()
            .expect("memo lock")
            .insert((n, prec), value.clone());
        Ok(value)
    }
}

impl Drop for ZetaSource {
    fn drop(&mut self) {
        if let Some(cache) = &self.cache {
            // explicit flushes report errors; this only catches forgotten ones
            let _ = cache.flush();
        }
    }
}

#[derive(Debug)]
enum Source {
    Zeta(ZetaSource),
    Partition(RwLock<Vec<Integer>>),
    Table { n0: u64, values: Vec<TableValue> },
}

/// A positive sequence `α(n)` together with its normalizing family.
#[derive(Debug)]
pub struct SequenceProvider {
    kind: SequenceKind,
    label: String,
    params: AsymParams,
    source: Source,
}

impl SequenceProvider {
    /// γ(n) from the exact integral formula, memoized in memory and, when
    /// `cache_dir` is given, on disk.
    pub fn zeta_gamma(cache_dir: Option<&Path>) -> Result<Self> {
        let cache = cache_dir.map(GammaCache::open).transpose()?;
        Ok(SequenceProvider {
            kind: SequenceKind::ZetaGamma,
            label: "gamma".into(),
            params: AsymParams::zeta(),
            source: Source::Zeta(ZetaSource {
                cache,
                f_memo: Mutex::new(HashMap::new()),
                gamma_memo: Mutex::new(HashMap::new()),
            }),
        })
    }

    pub fn partition() -> Self {
        SequenceProvider {
            kind: SequenceKind::Partition,
            label: "p".into(),
            params: AsymParams::partition(),
            source: Source::Partition(RwLock::new(Vec::new())),
        }
    }

    /// Integer sequence `α(n0), α(n0+1), …` held in memory.
    pub fn from_integers(label: impl Into<String>, n0: u64, values: Vec<Integer>) -> Result<Self> {
        let values = values.into_iter().map(TableValue::Integer).collect();
        Self::from_table(SequenceKind::UserFile, label.into(), n0, values)
    }

    pub(crate) fn from_table(
        kind: SequenceKind,
        label: String,
        n0: u64,
        values: Vec<TableValue>,
    ) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::domain("sequence", "no values"));
        }
        if let Some(i) = values.iter().position(|v| !v.is_positive()) {
            return Err(Error::domain(
                "sequence",
                format!("value at n={} is not positive", n0 + i as u64),
            ));
        }
        Ok(SequenceProvider {
            kind,
            label,
            params: AsymParams::empirical(),
            source: Source::Table { n0, values },
        })
    }

    /// Replace the normalizing family. Attaching a modular family to a
    /// tabulated sequence marks it as modular-form coefficients.
    pub fn with_params(mut self, params: AsymParams) -> Self {
        if matches!(self.source, Source::Table { .. }) {
            self.kind = match params.family {
                crate::asymptotics::Family::Modular { .. } => SequenceKind::ModularFile,
                _ => SequenceKind::UserFile,
            };
        }
        self.params = params;
        self
    }

    pub fn kind(&self) -> SequenceKind {
        self.kind
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn params(&self) -> &AsymParams {
        &self.params
    }

    /// First index and, for tabulated sequences, last index.
    pub fn domain(&self) -> (u64, Option<u64>) {
        match &self.source {
            Source::Zeta(_) => (1, None),
            Source::Partition(_) => (0, None),
            Source::Table { n0, values } => (*n0, Some(n0 + values.len() as u64 - 1)),
        }
    }

    fn check_domain(&self, n: u64) -> Result<()> {
        let (lo, hi) = self.domain();
        if n < lo || hi.is_some_and(|hi| n > hi) {
            return Err(Error::OutOfDomain {
                label: self.label.clone(),
                n,
                lo,
                hi: hi.unwrap_or(u64::MAX),
            });
        }
        Ok(())
    }

    /// Whether [`exact_at`](Self::exact_at) returns values.
    pub fn has_exact(&self) -> bool {
        match &self.source {
            Source::Zeta(_) => false,
            Source::Partition(_) => true,
            Source::Table { values, .. } => {
                values.iter().all(|v| matches!(v, TableValue::Integer(_)))
            }
        }
    }

    /// `α(n)` as an exact integer, or `None` for sequences without one.
    pub fn exact_at(&self, n: u64) -> Result<Option<Integer>> {
        self.check_domain(n)?;
        if !self.has_exact() {
            return Ok(None);
        }
        Ok(Some(match &self.source {
            Source::Partition(table) => self.partition_value(table, n),
            Source::Table { n0, values } => match &values[(n - n0) as usize] {
                TableValue::Integer(i) => i.clone(),
                TableValue::Decimal(_) => unreachable!("has_exact checked"),
            },
            Source::Zeta(_) => unreachable!("has_exact checked"),
        }))
    }

    fn partition_value(&self, table: &RwLock<Vec<Integer>>, n: u64) -> Integer {
        let idx = n as usize;
        if let Some(v) = table.read().expect("partition table lock").get(idx) {
            return v.clone();
        }
        let mut guard = table.write().expect("partition table lock");
        extend_table(&mut guard, idx);
        guard[idx].clone()
    }

    /// `α(n)` rounded to `prec` bits. Exact and tabulated values are
    /// correctly rounded; γ(n) has relative error below
    /// `2^{VALUE_SLACK_BITS − prec}`.
    pub fn value_at(&self, n: u64, prec: u32) -> Result<BigReal> {
        if prec < MIN_PREC {
            return Err(Error::domain(
                "value_at",
                format!("precision {prec} < {MIN_PREC}"),
            ));
        }
        self.check_domain(n)?;
        match &self.source {
            Source::Zeta(z) => z.gamma(n, prec),
            Source::Partition(table) => {
                Ok(BigReal::from_integer(&self.partition_value(table, n), prec))
            }
            Source::Table { n0, values } => Ok(values[(n - n0) as usize].to_big(prec)),
        }
    }

    /// Write pending cache records to disk.
    pub fn flush(&self) -> Result<()> {
        match &self.source {
            Source::Zeta(ZetaSource {
                cache: Some(cache), ..
            }) => cache.flush(),
            _ => Ok(()),
        }
    }

    /// The on-disk cache, if any.
    pub fn cache(&self) -> Option<&GammaCache> {
        match &self.source {
            Source::Zeta(z) => z.cache.as_ref(),
            _ => None,
        }
    }
}
