use std::fs;
use std::path::{Path, PathBuf};

use super::group::{ElementSet, FiniteMatrixGroup};
use super::MatError;

/// On-disk element sets, one file per key.
#[derive(Debug, Clone)]
pub struct ElementCache {
    dir: PathBuf,
}

impl ElementCache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        ElementCache { dir: dir.into() }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    fn path(&self, key: &str, conductor: u32) -> PathBuf {
        let clean: String = key
            .chars()
            .map(|c| if c.is_ascii_alphanumeric() { c } else { '_' })
            .collect();
        self.dir.join(format!("{clean}-c{conductor}.srge"))
    }

    /// Attaches a cached element set if one exists and contains every
    /// generator; otherwise returns `None`.
    pub fn load(&self, key: &str, group: &FiniteMatrixGroup) -> Option<FiniteMatrixGroup> {
        let conductor = conductor_of(group);
        let bytes = fs::read(self.path(key, conductor)).ok()?;
        let set = ElementSet::read_bytes(&bytes)?;
        if set.dim() != group.dim() || !group.generators().iter().all(|g| set.contains(g)) {
            return None;
        }
        Some(group.clone().with_element_set(set))
    }

    pub fn store(&self, key: &str, group: &FiniteMatrixGroup) -> Result<(), MatError> {
        let set = group.elements()?;
        fs::create_dir_all(&self.dir).map_err(|e| MatError::Cache(e.to_string()))?;
        let mut bytes = Vec::new();
        set.write_bytes(&mut bytes);
        let path = self.path(key, conductor_of(group));
        let tmp = path.with_extension("tmp");
        fs::write(&tmp, bytes).map_err(|e| MatError::Cache(e.to_string()))?;
        fs::rename(&tmp, &path).map_err(|e| MatError::Cache(e.to_string()))
    }

    /// Cached enumeration: load, or enumerate and store.
    pub fn enumerate(&self, key: &str, group: &FiniteMatrixGroup, cap: usize) -> Result<FiniteMatrixGroup, MatError> {
        if let Some(g) = self.load(key, group) {
            return Ok(g);
        }
        let g = group.enumerate(cap)?;
        self.store(key, &g)?;
        Ok(g)
    }
}

fn conductor_of(group: &FiniteMatrixGroup) -> u32 {
    group
        .generators()
        .iter()
        .fold(1, |acc, g| num_integer::lcm(acc, g.conductor()))
}
