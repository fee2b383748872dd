//! Graded quotient spaces of diagrams modulo IHX and STU (AS is built into
//! canonical forms).

mod cache;
mod combo;
mod quotient;
mod relations;

pub use cache::{cache_file_name, cache_load, cache_path, cache_store, read_header, CacheHeader, CACHE_FORMAT_VERSION};
pub use combo::Combo;
pub use quotient::{build_quotient, reduce_combo, space_dimension, DiagramSpace};
pub use relations::{ihx_instances, relation_generators, stu_instances};

use std::collections::{BTreeMap, HashMap};
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex};

use crate::config::Limits;
use crate::diagrams::SpaceKind;
use crate::error::{Error, Result};
use crate::rational::Rational;

/// Memoizing source of quotient spaces, optionally backed by a cache
/// directory.
pub struct SpaceRegistry {
    limits: Limits,
    cache_dir: Option<PathBuf>,
    spaces: Mutex<HashMap<(SpaceKind, usize), Arc<DiagramSpace>>>,
}

impl SpaceRegistry {
    pub fn new(limits: Limits) -> Self {
        SpaceRegistry {
            limits,
            cache_dir: None,
            spaces: Mutex::new(HashMap::new()),
        }
    }

    pub fn with_cache_dir(limits: Limits, dir: impl Into<PathBuf>) -> Self {
        SpaceRegistry {
            cache_dir: Some(dir.into()),
            ..SpaceRegistry::new(limits)
        }
    }

    pub fn limits(&self) -> &Limits {
        &self.limits
    }

    pub fn cache_dir(&self) -> Option<&Path> {
        self.cache_dir.as_deref()
    }

    pub fn get(&self, kind: SpaceKind, degree: usize) -> Result<Arc<DiagramSpace>> {
        self.limits.check_degree(degree)?;
        if let Some(s) = self.spaces.lock().expect("registry lock").get(&(kind, degree)) {
            return Ok(s.clone());
        }
        let space = match &self.cache_dir {
            None => build_quotient(degree, kind, &self.limits)?,
            Some(dir) => match cache_load(degree, kind, dir) {
                Ok(s) => s,
                Err(Error::CacheMissing(_)) => {
                    let s = build_quotient(degree, kind, &self.limits)?;
                    cache_store(&s, dir)?;
                    s
                }
                Err(e) => return Err(e),
            },
        };
        let space = Arc::new(space);
        self.spaces
            .lock()
            .expect("registry lock")
            .entry((kind, degree))
            .or_insert(space.clone());
        Ok(space)
    }

    /// Coordinates of every homogeneous part of `c`, keyed by degree.
    pub fn reduce(&self, c: &Combo) -> Result<BTreeMap<usize, Vec<Rational>>> {
        c.homogeneous_parts()
            .into_iter()
            .map(|(deg, part)| {
                let s = self.get(c.kind(), deg)?;
                Ok((deg, reduce_combo(&part, &s)?))
            })
            .collect()
    }

    /// Whether `c` vanishes in the quotient.
    pub fn reduces_to_zero(&self, c: &Combo) -> Result<bool> {
        use num_traits::Zero;
        Ok(self.reduce(c)?.values().all(|v| v.iter().all(Zero::is_zero)))
    }
}
