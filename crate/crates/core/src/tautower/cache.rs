use std::collections::HashMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::{Arc, RwLock};

use super::{build, build_tau_twisted_sixterm, Scheme, TauError, TauGroup, TauKind};

/// Bumped whenever relator generation changes; old cache files are ignored.
pub const SCHEME_VERSION: u32 = 1;

/// `$WTC_CACHE_DIR`, or `./.wtc-cache`.
pub fn cache_dir() -> PathBuf {
    std::env::var_os("WTC_CACHE_DIR").map(PathBuf::from).unwrap_or_else(|| PathBuf::from(".wtc-cache"))
}

type Key = (TauKind, Scheme, usize, usize);

/// Built groups keyed by `(kind, scheme, m, n)`, in memory and optionally on
/// disk. Readers run concurrently; a miss builds outside the lock and the
/// first writer wins.
#[derive(Debug, Default)]
pub struct TauCache {
    dir: Option<PathBuf>,
    groups: RwLock<HashMap<Key, Arc<TauGroup>>>,
}

impl TauCache {
    pub fn in_memory() -> Self {
        Self::default()
    }

    pub fn on_disk(dir: impl Into<PathBuf>) -> Self {
        TauCache { dir: Some(dir.into()), groups: RwLock::default() }
    }

    pub fn from_env() -> Self {
        Self::on_disk(cache_dir())
    }

    pub fn dir(&self) -> Option<&Path> {
        self.dir.as_deref()
    }

    pub fn file_for(&self, kind: TauKind, scheme: Scheme, m: usize, n: usize) -> Option<PathBuf> {
        let scheme = match scheme {
            Scheme::Standard => "std",
            Scheme::SixTerm => "six",
        };
        self.dir.as_ref().map(|d| d.join(format!("tau-{kind}-{scheme}-m{m}-n{n}-v{SCHEME_VERSION}.json")))
    }

    pub fn get(&self, kind: TauKind, m: usize, n: usize) -> Result<Arc<TauGroup>, TauError> {
        self.get_with(kind, Scheme::Standard, m, n).map(|(g, _)| g)
    }

    pub fn get_sixterm(&self, m: usize, n: usize) -> Result<Arc<TauGroup>, TauError> {
        self.get_with(TauKind::Twisted, Scheme::SixTerm, m, n).map(|(g, _)| g)
    }

    /// The group and whether it came from a cache layer.
    pub fn get_with(
        &self,
        kind: TauKind,
        scheme: Scheme,
        m: usize,
        n: usize,
    ) -> Result<(Arc<TauGroup>, bool), TauError> {
        let key = (kind, scheme, m, n);
        if let Some(g) = self.groups.read().expect("cache poisoned").get(&key) {
            return Ok((g.clone(), true));
        }
        let (group, hit) = match self.load(key)? {
            Some(g) => (g, true),
            None => {
                let g = match scheme {
                    Scheme::Standard => build(kind, m, n)?,
                    Scheme::SixTerm => build_tau_twisted_sixterm(m, n)?,
                };
                self.store(&g)?;
                (g, false)
            }
        };
        let group = Arc::new(group);
        let mut w = self.groups.write().expect("cache poisoned");
        Ok((w.entry(key).or_insert(group).clone(), hit))
    }

    fn load(&self, (kind, scheme, m, n): Key) -> Result<Option<TauGroup>, TauError> {
        let Some(path) = self.file_for(kind, scheme, m, n) else { return Ok(None) };
        let text = match fs::read_to_string(&path) {
            Ok(t) => t,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
            Err(e) => return Err(e.into()),
        };
        // A stale or corrupt file is rebuilt rather than trusted.
        match serde_json::from_str::<TauGroup>(&text) {
            Ok(g) if (g.kind, g.scheme, g.m, g.n) == (kind, scheme, m, n) => Ok(Some(g)),
            _ => Ok(None),
        }
    }

    fn store(&self, g: &TauGroup) -> Result<(), TauError> {
        let Some(path) = self.file_for(g.kind, g.scheme, g.m, g.n) else { return Ok(()) };
        let dir = path.parent().expect("file inside the cache dir");
        fs::create_dir_all(dir)?;
        let tmp = dir.join(format!(".{}.{}", path.file_name().unwrap().to_string_lossy(), std::process::id()));
        fs::write(&tmp, serde_json::to_vec(g)?)?;
        fs::rename(&tmp, &path)?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn memory_layer_shares_groups() {
        let c = TauCache::in_memory();
        let a = c.get(TauKind::Framed, 2, 1).unwrap();
        let (b, hit) = c.get_with(TauKind::Framed, Scheme::Standard, 2, 1).unwrap();
        assert!(hit);
        assert!(Arc::ptr_eq(&a, &b));
        assert!(c.file_for(TauKind::Framed, Scheme::Standard, 2, 1).is_none());
    }

    #[test]
    fn disk_layer_round_trips() {
        let dir = tempfile::tempdir().unwrap();
        let first = TauCache::on_disk(dir.path());
        let (g, hit) = first.get_with(TauKind::Twisted, Scheme::Standard, 2, 2).unwrap();
        assert!(!hit);
        let path = first.file_for(TauKind::Twisted, Scheme::Standard, 2, 2).unwrap();
        assert!(path.exists());

        let second = TauCache::on_disk(dir.path());
        let (h, hit) = second.get_with(TauKind::Twisted, Scheme::Standard, 2, 2).unwrap();
        assert!(hit);
        assert_eq!(g.relators(), h.relators());
        assert_eq!(serde_json::to_string(&*g).unwrap(), serde_json::to_string(&*h).unwrap());

        fs::write(&path, "not json").unwrap();
        let third = TauCache::on_disk(dir.path());
        let (_, hit) = third.get_with(TauKind::Twisted, Scheme::Standard, 2, 2).unwrap();
        assert!(!hit);
    }
}
