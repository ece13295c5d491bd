//! Line-oriented on-disk cache of γ values.
//!
//! One record per line:
//!
//! ```text
//! n=<int> prec=<int> src=<exact|asym> val=<+|-><digits>e<exp>
//! ```
//!
//! The value is `±digits × 10^exp`. `1 + ⌈prec·log₁₀2⌉` significant digits
//! are written, which is enough for round-to-nearest to recover the binary
//! value exactly.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Mutex;

use rug::Float;

use crate::bigreal::BigReal;
use crate::error::{Error, Result};
use crate::zeta::GammaSource;

pub const CACHE_FILE_NAME: &str = "gamma.cache";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CacheRecord {
    pub n: u64,
    pub prec_bits: u32,
    pub source: GammaSource,
    pub negative: bool,
    /// Decimal mantissa without leading zeros; `"0"` for zero.
    pub digits: String,
    pub exponent: i64,
}

/// Decimal digits needed to round-trip a `prec`-bit binary float.
pub fn round_trip_digits(prec: u32) -> usize {
    1 + (f64::from(prec) * std::f64::consts::LOG10_2).ceil() as usize
}

impl CacheRecord {
    pub fn from_value(n: u64, value: &BigReal, source: GammaSource) -> Result<Self> {
        let prec_bits = value.prec();
        if !value.is_finite() {
            return Err(Error::domain("cache", "cannot store a non-finite value"));
        }
        if value.is_zero() {
            return Ok(CacheRecord {
                n,
                prec_bits,
                source,
                negative: value.is_sign_negative(),
                digits: "0".into(),
                exponent: 0,
            });
        }
        let ndigits = round_trip_digits(prec_bits);
        let (negative, mut digits, exp) = value.to_sign_string_exp(10, Some(ndigits));
        let exp = i64::from(exp.expect("finite nonzero value has an exponent"));
        let mut exponent = exp - digits.len() as i64;
        while digits.len() > 1 && digits.ends_with('0') {
            digits.pop();
            exponent += 1;
        }
        Ok(CacheRecord {
            n,
            prec_bits,
            source,
            negative,
            digits,
            exponent,
        })
    }

    pub fn to_value(&self) -> BigReal {
        let text = format!(
            "{}{}e{}",
            if self.negative { "-" } else { "" },
            self.digits,
            self.exponent
        );
        let parsed = Float::parse(&text).expect("record digits were validated");
        BigReal::new(Float::with_val(self.prec_bits, parsed))
    }

    pub fn render(&self) -> String {
        format!(
            "n={} prec={} src={} val={}{}e{}",
            self.n,
            self.prec_bits,
            self.source.tag(),
            if self.negative { '-' } else { '+' },
            self.digits,
            self.exponent
        )
    }

    /// Parse one record; the error is a human-readable reason.
    pub fn parse(line: &str) -> std::result::Result<Self, String> {
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 4 {
            return Err(format!("expected 4 fields, found {}", fields.len()));
        }
        let field = |i: usize, key: &str| -> std::result::Result<&str, String> {
            fields[i]
                .strip_prefix(key)
                .and_then(|rest| rest.strip_prefix('='))
                .ok_or_else(|| format!("field {} should start with `{key}=`", i + 1))
        };
        let n: u64 = field(0, "n")?.parse().map_err(|e| format!("bad n: {e}"))?;
        let prec_bits: u32 = field(1, "prec")?
            .parse()
            .map_err(|e| format!("bad prec: {e}"))?;
        if !(rug::float::prec_min()..=rug::float::prec_max()).contains(&prec_bits) {
            return Err(format!("precision {prec_bits} out of range"));
        }
        let tag = field(2, "src")?;
        let source = GammaSource::from_tag(tag).ok_or_else(|| format!("unknown source `{tag}`"))?;
        let val = field(3, "val")?;
        let (negative, rest) = match val.as_bytes().first() {
            Some(b'+') => (false, &val[1..]),
            Some(b'-') => (true, &val[1..]),
            _ => return Err("value must start with `+` or `-`".into()),
        };
        let (digits, exponent) = rest.split_once('e').ok_or("value lacks an exponent")?;
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(format!("bad mantissa `{digits}`"));
        }
        if digits.len() > 1 && digits.starts_with('0') {
            return Err(format!("mantissa `{digits}` has leading zeros"));
        }
        let exponent: i64 = exponent.parse().map_err(|e| format!("bad exponent: {e}"))?;
        Ok(CacheRecord {
            n,
            prec_bits,
            source,
            negative,
            digits: digits.to_string(),
            exponent,
        })
    }
}

type Key = (u64, u32, &'static str);

#[derive(Debug, Default)]
struct State {
    records: BTreeMap<Key, CacheRecord>,
    dirty: bool,
}

/// In-memory view of one cache file. Writes are held until [`flush`],
/// which replaces the file atomically.
///
/// [`flush`]: GammaCache::flush
#[derive(Debug)]
pub struct GammaCache {
    path: PathBuf,
    state: Mutex<State>,
}

impl GammaCache {
    /// Open `dir/gamma.cache`, creating the directory if needed. Any
    /// malformed line is an error.
    pub fn open(dir: impl AsRef<Path>) -> Result<Self> {
        let dir = dir.as_ref();
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        let path = dir.join(CACHE_FILE_NAME);
        let mut records = BTreeMap::new();
        match fs::read_to_string(&path) {
            Ok(text) => {
                for (i, line) in text.lines().enumerate() {
                    if line.trim().is_empty() {
                        continue;
                    }
                    let record = CacheRecord::parse(line).map_err(|reason| Error::CacheParse {
                        path: path.clone(),
                        line: i + 1,
                        reason,
                    })?;
                    records.insert(key(&record), record);
                }
            }
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => {}
            Err(e) => return Err(Error::io(&path, e)),
        }
        Ok(GammaCache {
            path,
            state: Mutex::new(State {
                records,
                dirty: false,
            }),
        })
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    fn lock(&self) -> std::sync::MutexGuard<'_, State> {
        self.state
            .lock()
            .unwrap_or_else(|poisoned| poisoned.into_inner())
    }

    /// The value stored for `(n, source)` at exactly `prec` bits, or else the
    /// most precise stored value above `prec`, rounded to `prec`.
    pub fn get(&self, n: u64, prec: u32, source: GammaSource) -> Option<BigReal> {
        let state = self.lock();
        let tag = source.tag();
        let mut hits = state
            .records
            .range((n, prec, tag)..=(n, u32::MAX, tag))
            .filter(|(k, _)| k.2 == tag);
        let first = hits.next()?;
        if first.0 .1 == prec {
            return Some(first.1.to_value());
        }
        let (_, record) = hits.next_back().unwrap_or(first);
        Some(record.to_value().with_prec(prec))
    }

    pub fn insert(&self, n: u64, value: &BigReal, source: GammaSource) -> Result<()> {
        let record = CacheRecord::from_value(n, value, source)?;
        let mut state = self.lock();
        state.records.insert(key(&record), record);
        state.dirty = true;
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.lock().records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn records(&self) -> Vec<CacheRecord> {
        self.lock().records.values().cloned().collect()
    }

    /// Write all records to a temporary file and rename it over the cache.
    pub fn flush(&self) -> Result<()> {
        let mut state = self.lock();
        if !state.dirty {
            return Ok(());
        }
        let dir = self.path.parent().unwrap_or(Path::new("."));
        let tmp = dir.join(format!(".{CACHE_FILE_NAME}.{}.tmp", std::process::id()));
        let mut text = String::new();
        for record in state.records.values() {
            text.push_str(&record.render());
            text.push('\n');
        }
        let write = || -> std::io::Result<()> {
            let mut file = fs::File::create(&tmp)?;
            file.write_all(text.as_bytes())?;
            file.sync_all()
        };
        write().map_err(|e| Error::io(&tmp, e))?;
        fs::rename(&tmp, &self.path).map_err(|e| Error::io(&self.path, e))?;
        state.dirty = false;
        Ok(())
    }

    /// Drop every record and delete the file.
    pub fn clear(&self) -> Result<()> {
        let mut state = self.lock();
        state.records.clear();
        state.dirty = false;
        match fs::remove_file(&self.path) {
            Ok(()) => Ok(()),
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(()),
            Err(e) => Err(Error::io(&self.path, e)),
        }
    }
}

fn key(record: &CacheRecord) -> Key {
    (record.n, record.prec_bits, record.source.tag())
}
