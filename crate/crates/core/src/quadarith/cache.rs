use std::collections::HashMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::{Arc, OnceLock, RwLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::classgroup::ClassGroup;
use super::form::{BinaryQF, Discriminant};

/// On-disk record: one JSON file per discriminant.
#[derive(Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct ClassGroupRecord {
    #[serde(rename = "D")]
    pub disc: i64,
    pub h: usize,
    pub forms: Vec<[i64; 3]>,
}

impl ClassGroupRecord {
    pub fn from_group(cg: &ClassGroup) -> Self {
        Self {
            disc: cg.disc().value(),
            h: cg.h(),
            forms: cg.forms().iter().map(|f| [f.a, f.b, f.c]).collect(),
        }
    }

    /// Rebuilds the group; the record is re-validated, never trusted.
    pub fn into_group(self) -> Result<ClassGroup> {
        let disc = Discriminant::fundamental(self.disc)?;
        if self.h != self.forms.len() {
            return Err(Error::Invalid(format!(
                "cached class group for {} lists {} forms but h = {}",
                self.disc,
                self.forms.len(),
                self.h
            )));
        }
        let forms = self
            .forms
            .iter()
            .map(|&[a, b, c]| BinaryQF::new(a, b, c))
            .collect();
        ClassGroup::from_forms(disc, forms)
    }
}

/// Concurrent class-group cache keyed by discriminant, optionally backed by
/// a directory of JSON records.
#[derive(Debug, Default)]
pub struct ClassGroupCache {
    dir: Option<PathBuf>,
    mem: RwLock<HashMap<i64, Arc<ClassGroup>>>,
}

impl ClassGroupCache {
    pub fn new(dir: Option<PathBuf>) -> Self {
        Self {
            dir,
            mem: RwLock::default(),
        }
    }

    /// Process-wide in-memory cache without disk backing.
    pub fn global() -> &'static ClassGroupCache {
        static GLOBAL: OnceLock<ClassGroupCache> = OnceLock::new();
        GLOBAL.get_or_init(ClassGroupCache::default)
    }

    pub fn record_path(dir: &Path, disc: i64) -> PathBuf {
        dir.join(format!("classgroup_{}.json", disc))
    }

    pub fn get(&self, disc: i64) -> Result<Arc<ClassGroup>> {
        if let Some(cg) = self.mem.read().expect("cache lock").get(&disc) {
            return Ok(cg.clone());
        }
        let cg = Arc::new(self.load_or_build(disc)?);
        let mut w = self.mem.write().expect("cache lock");
        Ok(w.entry(disc).or_insert(cg).clone())
    }

    fn load_or_build(&self, disc: i64) -> Result<ClassGroup> {
        let d = Discriminant::fundamental(disc)?;
        let Some(dir) = &self.dir else {
            return ClassGroup::new(d);
        };
        let path = Self::record_path(dir, disc);
        if path.exists() {
            let rec: ClassGroupRecord = serde_json::from_str(&fs::read_to_string(&path)?)?;
            return rec.into_group();
        }
        let cg = ClassGroup::new(d)?;
        fs::create_dir_all(dir)?;
        let text = serde_json::to_string_pretty(&ClassGroupRecord::from_group(&cg))?;
        // Write-then-rename keeps concurrent readers from seeing a torn file.
        let tmp = dir.join(format!(".classgroup_{}.{}.tmp", disc, std::process::id()));
        fs::write(&tmp, text + "\n")?;
        fs::rename(&tmp, &path)?;
        Ok(cg)
    }
}
